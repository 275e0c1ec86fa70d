#include "egoflow/synth.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "egoflow/errors.hpp"

namespace egoflow {

namespace {

// Uniform doubles straight from mt19937_64 bits; keeps generated suites
// byte-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + unit() * (hi - lo); }
    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    double sign() { return engine_() & 1 ? 1.0 : -1.0; }

private:
    std::mt19937_64 engine_;
};

Eigen::Matrix3d rotation_from_vector(const std::array<double, 3>& omega) {
    Eigen::Vector3d w(omega[0], omega[1], omega[2]);
    const double angle = w.norm();
    if (angle == 0.0) return Eigen::Matrix3d::Identity();
    return Eigen::AngleAxisd(angle, w / angle).toRotationMatrix();
}

struct PixelMotion {
    double du = 0, dv = 0;
    bool valid = false;
};

// Finite-displacement motion of one source pixel: back-project along the
// pixel ray, move by (object velocity - camera translation), express in the
// rotated camera frame, re-project. Everything is scaled by 1/depth up
// front; the pinhole projection is scale-invariant, and with zero relative
// translation the depth drops out of the arithmetic entirely, so
// rotation-only renders are bit-identical across scene depths.
PixelMotion move_pixel(const CameraIntrinsics& intr, const Eigen::Matrix3d& cam_rot,
                       const Eigen::Vector3d& cam_trans, const Eigen::Vector3d& velocity,
                       double depth, int col, int row) {
    PixelMotion out;
    const Eigen::Vector3d ray((col - intr.principal_x) / intr.focal_x,
                              (row - intr.principal_y) / intr.focal_y, 1.0);
    Eigen::Vector3d moved = cam_rot.transpose() * (ray + (velocity - cam_trans) / depth);
    if (!(moved.z() > 0.0)) return out;  // behind the camera
    const double px = intr.focal_x * moved.x() / moved.z() + intr.principal_x;
    const double py = intr.focal_y * moved.y() / moved.z() + intr.principal_y;
    out.du = px - col;
    out.dv = py - row;
    out.valid = px >= 0.0 && px <= intr.width - 1.0 && py >= 0.0 && py <= intr.height - 1.0;
    return out;
}

void validate_scene(const SceneSpec& scene) {
    if (!(std::isfinite(scene.background_depth) && scene.background_depth > 0.0))
        throw ParameterError("scene: background depth must be positive");
    if (!scene.background_grid.empty() &&
        scene.background_grid.size() !=
            static_cast<std::size_t>(scene.intr.width) * scene.intr.height)
        throw ParameterError("scene: depth grid size mismatch");
    for (double d : scene.background_grid)
        if (!(std::isfinite(d) && d > 0.0))
            throw ParameterError("scene: depth grid values must be positive");
    for (const SceneObject& o : scene.objects) {
        if (!(std::isfinite(o.depth) && o.depth > 0.0))
            throw ParameterError("scene: object depth must be positive");
        if (o.width < 1 || o.height < 1 || o.x0 < 0 || o.y0 < 0 ||
            o.x0 + o.width > scene.intr.width || o.y0 + o.height > scene.intr.height)
            throw ParameterError("scene: object rectangle out of image bounds");
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double SceneSpec::depth_at(int row, int col) const {
    const int owner = owner_at(row, col);
    if (owner >= 0) return objects[static_cast<std::size_t>(owner)].depth;
    if (!background_grid.empty())
        return background_grid[static_cast<std::size_t>(row) * intr.width + col];
    return background_depth;
}

int SceneSpec::owner_at(int row, int col) const {
    int best = -1;
    double best_depth = 0.0;
    for (std::size_t k = 0; k < objects.size(); ++k) {
        const SceneObject& o = objects[k];
        if (col < o.x0 || col >= o.x0 + o.width || row < o.y0 || row >= o.y0 + o.height)
            continue;
        if (best < 0 || o.depth < best_depth) {  // nearest object wins
            best = static_cast<int>(k);
            best_depth = o.depth;
        }
    }
    return best;
}

RenderedScene render_flow(const SceneSpec& scene) {
    validate_scene(scene);
    const CameraIntrinsics& intr = scene.intr;
    const Eigen::Matrix3d cam_rot = rotation_from_vector(scene.ego.omega);
    const Eigen::Vector3d cam_trans(scene.ego.translation[0], scene.ego.translation[1],
                                    scene.ego.translation[2]);
    RenderedScene out{FlowImage(MotionField(intr.width, intr.height)),
                      SegMask(intr.width, intr.height)};
    out.flow.valid.assign(out.flow.field.pixel_count(), 1);

    std::size_t i = 0;
    for (int row = 0; row < intr.height; ++row) {
        for (int col = 0; col < intr.width; ++col, ++i) {
            const int owner = scene.owner_at(row, col);
            Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
            double depth;
            if (owner >= 0) {
                const SceneObject& o = scene.objects[static_cast<std::size_t>(owner)];
                velocity = Eigen::Vector3d(o.velocity[0], o.velocity[1], o.velocity[2]);
                depth = o.depth;
                if (velocity.squaredNorm() > 0.0) out.mask.moving[i] = 1;
            } else {
                depth = scene.background_grid.empty()
                            ? scene.background_depth
                            : scene.background_grid[i];
            }
            const PixelMotion m =
                move_pixel(intr, cam_rot, cam_trans, velocity, depth, col, row);
            if (m.valid) {
                out.flow.field.u[i] = m.du;
                out.flow.field.v[i] = m.dv;
            } else {
                out.flow.valid[i] = 0;  // flow stays (0,0)
            }
        }
    }
    return out;
}

namespace {

// Scales a mover's velocity until its residual against the plane-depth
// prediction clears `target` px on every object pixel while the object stays
// inside the image. Returns false when the drawn direction cannot work.
bool calibrate_mover(const SceneSpec& scene, const MotionField& predicted,
                     SceneObject& obj, double target) {
    const Eigen::Matrix3d cam_rot = rotation_from_vector(scene.ego.omega);
    const Eigen::Vector3d cam_trans(scene.ego.translation[0], scene.ego.translation[1],
                                    scene.ego.translation[2]);
    for (int iter = 0; iter < 12; ++iter) {
        Eigen::Vector3d vel(obj.velocity[0], obj.velocity[1], obj.velocity[2]);
        double min_res = 1e300;
        bool inside = true;
        for (int row = obj.y0; row < obj.y0 + obj.height && inside; ++row) {
            for (int col = obj.x0; col < obj.x0 + obj.width; ++col) {
                const PixelMotion m =
                    move_pixel(scene.intr, cam_rot, cam_trans, vel, obj.depth, col, row);
                if (!m.valid) {
                    inside = false;
                    break;
                }
                const std::size_t i =
                    static_cast<std::size_t>(row) * scene.intr.width + col;
                const double ru = m.du - predicted.u[i];
                const double rv = m.dv - predicted.v[i];
                min_res = std::min(min_res, std::sqrt(ru * ru + rv * rv));
            }
        }
        if (!inside) {
            for (double& c : obj.velocity) c *= 0.5;
            continue;
        }
        if (min_res >= target && min_res <= 4.0 * target) return true;
        if (min_res < 1e-4) return false;  // degenerate direction, re-draw
        const double gain = 1.5 * target / min_res;
        for (double& c : obj.velocity) c *= gain;
    }
    return false;
}

SceneObject draw_object(Rng& rng, const SuiteOptions& opt, double bg_depth) {
    SceneObject o;
    const int margin = 12;
    o.width = rng.range(opt.width / 10, opt.width / 5);
    o.height = rng.range(opt.height / 10, opt.height / 5);
    o.x0 = rng.range(margin, opt.width - o.width - margin);
    o.y0 = rng.range(margin, opt.height - o.height - margin);
    o.depth = bg_depth * rng.uniform(0.6, 1.6);
    // direction only; calibrate_mover sets the magnitude
    const double scale = 0.01 * bg_depth;
    o.velocity = {rng.uniform(-scale, scale), rng.uniform(-scale, scale),
                  rng.uniform(-scale, scale)};
    return o;
}

EgoMotion draw_ego(Rng& rng, const SuiteOptions& opt, int kind) {
    const double r = opt.max_rotation, t = opt.max_translation;
    std::array<double, 3> omega{}, trans{};
    switch (kind) {
        case 0:  // yaw-dominant turn: |w_y| at least 8x the other rotations
            omega = {rng.uniform(-r / 16, r / 16), rng.sign() * rng.uniform(0.5 * r, r),
                     rng.uniform(-r / 16, r / 16)};
            trans = {rng.uniform(-t / 20, t / 20), rng.uniform(-t / 20, t / 20),
                     rng.uniform(0.2 * t, 0.6 * t)};
            break;
        case 1:  // forward driving
            omega = {rng.uniform(-r / 10, r / 10), rng.uniform(-r / 10, r / 10),
                     rng.uniform(-r / 10, r / 10)};
            trans = {rng.uniform(-t / 20, t / 20), rng.uniform(-t / 20, t / 20),
                     rng.uniform(0.5 * t, t)};
            break;
        default:  // mixed 6-DoF
            omega = {rng.uniform(-r, r), rng.uniform(-r, r), rng.uniform(-r, r)};
            trans = {rng.uniform(-t, t), rng.uniform(-t, t), rng.uniform(-t, t)};
            break;
    }
    return EgoMotion(omega, trans, 0.1);
}

SceneSpec make_parallax_scene(Rng& rng, const SuiteOptions& opt, int index) {
    const double fx = opt.focal * rng.uniform(0.8, 1.2);
    const double cx = (opt.width - 1) / 2.0 + rng.uniform(-opt.width / 40.0, opt.width / 40.0);
    const double cy =
        (opt.height - 1) / 2.0 + rng.uniform(-opt.height / 40.0, opt.height / 40.0);
    CameraIntrinsics intr(fx, fx, cx, cy, opt.width, opt.height);
    SceneSpec scene(intr);
    scene.background_depth = rng.uniform(8.0, 30.0);

    // Object tracking the camera translation, focus of expansion at its
    // center: zero flow on the object, prediction residual below threshold.
    SceneObject o;
    o.width = opt.width / 6;
    o.height = opt.height / 6;
    o.x0 = static_cast<int>(cx) - o.width / 2;
    o.y0 = static_cast<int>(cy) - o.height / 2;
    o.depth = scene.background_depth;
    const double foe_x = o.x0 + o.width / 2.0;
    const double foe_y = o.y0 + o.height / 2.0;
    const double tz = 0.7 * opt.max_translation;
    std::array<double, 3> trans{tz * (foe_x - cx) / fx, tz * (foe_y - cy) / fx, tz};
    scene.ego = EgoMotion({0, 0, 0}, trans, 0.1);
    o.velocity = trans;
    scene.objects.push_back(o);
    char buf[48];
    std::snprintf(buf, sizeof buf, "parallax_%03d", index);
    scene.name = buf;
    return scene;
}

}  // namespace

std::vector<SceneSpec> make_suite(std::uint64_t seed, int count, const SuiteOptions& opt) {
    if (count < 1) throw ParameterError("make_suite: count must be >= 1");
    if (opt.min_movers < 0 || opt.max_movers < opt.min_movers)
        throw ParameterError("make_suite: bad mover range");
    Rng rng(seed);
    std::vector<SceneSpec> suite;
    suite.reserve(static_cast<std::size_t>(count));
    const bool parallax =
        opt.include_parallax_scene && opt.max_movers >= 1 && count >= 4;
    static const char* kKindNames[3] = {"yaw", "forward", "mixed"};

    for (int index = 0; index < count; ++index) {
        if (parallax && index == count - 1) {
            suite.push_back(make_parallax_scene(rng, opt, index));
            continue;
        }
        const int kind = index % 3;
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 32)
                throw ParameterError("make_suite: could not satisfy mover constraints");
            const double fx = opt.focal * rng.uniform(0.8, 1.2);
            const double cx =
                (opt.width - 1) / 2.0 + rng.uniform(-opt.width / 40.0, opt.width / 40.0);
            const double cy =
                (opt.height - 1) / 2.0 + rng.uniform(-opt.height / 40.0, opt.height / 40.0);
            SceneSpec scene(CameraIntrinsics(fx, fx, cx, cy, opt.width, opt.height));
            scene.background_depth = rng.uniform(8.0, 30.0);
            scene.ego = draw_ego(rng, opt, kind);
            char buf[48];
            std::snprintf(buf, sizeof buf, "%s_%03d", kKindNames[kind], index);
            scene.name = buf;

            const int movers = rng.range(opt.min_movers, opt.max_movers);
            bool ok = true;
            if (movers > 0) {
                const MotionField predicted =
                    ego_field(scene.intr, scene.ego, DepthModel(scene.background_depth));
                for (int k = 0; k < movers && ok; ++k) {
                    SceneObject obj = draw_object(rng, opt, scene.background_depth);
                    ok = calibrate_mover(scene, predicted, obj, opt.min_mover_residual);
                    if (ok) scene.objects.push_back(obj);
                }
            }
            if (ok) {
                suite.push_back(std::move(scene));
                break;
            }
        }
    }
    return suite;
}

std::string serialize_scene(const SceneSpec& scene) {
    validate_scene(scene);
    std::ostringstream out;
    out << "egoflow-scene 1\n";
    out << "name " << scene.name << "\n";
    out << "intrinsics " << fmt(scene.intr.focal_x) << ' ' << fmt(scene.intr.focal_y) << ' '
        << fmt(scene.intr.principal_x) << ' ' << fmt(scene.intr.principal_y) << ' '
        << scene.intr.width << ' ' << scene.intr.height << "\n";
    out << "ego " << fmt(scene.ego.omega[0]) << ' ' << fmt(scene.ego.omega[1]) << ' '
        << fmt(scene.ego.omega[2]) << ' ' << fmt(scene.ego.translation[0]) << ' '
        << fmt(scene.ego.translation[1]) << ' ' << fmt(scene.ego.translation[2]) << "\n";
    if (scene.ego.frame_interval)
        out << "frame_interval " << fmt(*scene.ego.frame_interval) << "\n";
    out << "background " << fmt(scene.background_depth) << "\n";
    if (!scene.background_grid.empty()) {
        out << "background_grid\n";
        std::size_t i = 0;
        for (int row = 0; row < scene.intr.height; ++row) {
            for (int col = 0; col < scene.intr.width; ++col, ++i) {
                if (col) out << ' ';
                out << fmt(scene.background_grid[i]);
            }
            out << "\n";
        }
    }
    for (const SceneObject& o : scene.objects)
        out << "object " << o.x0 << ' ' << o.y0 << ' ' << o.width << ' ' << o.height << ' '
            << fmt(o.depth) << ' ' << fmt(o.velocity[0]) << ' ' << fmt(o.velocity[1]) << ' '
            << fmt(o.velocity[2]) << "\n";
    return out.str();
}

SceneSpec parse_scene(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "egoflow-scene 1")
        throw FormatError("scene: missing 'egoflow-scene 1' header");

    std::string name = "scene";
    std::optional<CameraIntrinsics> intr;
    EgoMotion ego;
    std::optional<double> frame_interval;
    double background = 10.0;
    bool want_grid = false;
    std::vector<double> grid;
    std::vector<SceneObject> objects;
    std::array<double, 3> omega{}, trans{};

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        if (want_grid && grid.size() <
                             static_cast<std::size_t>(intr ? intr->width * intr->height : 0)) {
            double v;
            while (ls >> v) grid.push_back(v);
            continue;
        }
        std::string key;
        ls >> key;
        if (key == "name") {
            ls >> name;
        } else if (key == "intrinsics") {
            double fx, fy, px, py;
            int w, h;
            if (!(ls >> fx >> fy >> px >> py >> w >> h))
                throw FormatError("scene: bad intrinsics line");
            try {
                intr.emplace(fx, fy, px, py, w, h);
            } catch (const ParameterError& e) {
                throw FormatError(std::string("scene: ") + e.what());
            }
        } else if (key == "ego") {
            if (!(ls >> omega[0] >> omega[1] >> omega[2] >> trans[0] >> trans[1] >> trans[2]))
                throw FormatError("scene: bad ego line");
        } else if (key == "frame_interval") {
            double dt;
            if (!(ls >> dt)) throw FormatError("scene: bad frame_interval line");
            frame_interval = dt;
        } else if (key == "background") {
            if (!(ls >> background)) throw FormatError("scene: bad background line");
        } else if (key == "background_grid") {
            if (!intr) throw FormatError("scene: background_grid before intrinsics");
            want_grid = true;
        } else if (key == "object") {
            SceneObject o;
            if (!(ls >> o.x0 >> o.y0 >> o.width >> o.height >> o.depth >> o.velocity[0] >>
                  o.velocity[1] >> o.velocity[2]))
                throw FormatError("scene: bad object line");
            objects.push_back(o);
        } else {
            throw FormatError("scene: unknown key '" + key + "'");
        }
    }
    if (!intr) throw FormatError("scene: missing intrinsics");

    SceneSpec scene(*intr);
    scene.name = name;
    try {
        scene.ego = EgoMotion(omega, trans, frame_interval);
    } catch (const ParameterError& e) {
        throw FormatError(std::string("scene: ") + e.what());
    }
    scene.background_depth = background;
    scene.background_grid = std::move(grid);
    scene.objects = std::move(objects);
    try {
        validate_scene(scene);
    } catch (const ParameterError& e) {
        throw FormatError(std::string("scene: ") + e.what());
    }
    return scene;
}

}  // namespace egoflow
