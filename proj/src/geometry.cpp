#include "egoflow/geometry.hpp"

#include <cmath>
#include <string>

#include "egoflow/errors.hpp"

namespace egoflow {

namespace {

void check_intrinsics(const CameraIntrinsics& intr) {
    if (!(std::isfinite(intr.focal_x) && intr.focal_x > 0.0) ||
        !(std::isfinite(intr.focal_y) && intr.focal_y > 0.0))
        throw ParameterError("intrinsics: focal lengths must be positive and finite");
    if (intr.width < 1 || intr.height < 1)
        throw ParameterError("intrinsics: image dimensions must be >= 1");
    if (!(intr.principal_x >= 0.0 && intr.principal_x < intr.width) ||
        !(intr.principal_y >= 0.0 && intr.principal_y < intr.height))
        throw ParameterError("intrinsics: principal point must lie inside the image");
}

void check_finite3(const std::array<double, 3>& v, const char* what) {
    for (double c : v)
        if (!std::isfinite(c))
            throw ParameterError(std::string(what) + ": components must be finite");
}

void check_depth(const DepthModel& depth) {
    if (!(std::isfinite(depth.constant_depth) && depth.constant_depth > 0.0))
        throw ParameterError("depth: constant_depth must be positive and finite");
}

// Focal lengths entering the kernels. fc = fx when isotropic so the cross
// term reduces exactly to the single-f equation.
struct Focals {
    double fx, fy, fc;
};

Focals focals_for(const CameraIntrinsics& intr, CoordMode mode) {
    if (mode == CoordMode::kNormalized) return {1.0, 1.0, 1.0};
    double fx = intr.focal_x, fy = intr.focal_y;
    return {fx, fy, fx == fy ? fx : std::sqrt(fx * fy)};
}

// Per-pixel kernels, written as one contribution per motion parameter and
// folded (rot_x + rot_y) + rot_z, (trans_x + trans_y) + trans_z. Every code
// path that synthesizes fields goes through these same expressions, which is
// what makes the composition and per-component decomposition identities hold
// without tolerances: the fused field is rot + trans by a single addition,
// and summing the six isolated components in index order replays exactly the
// folds below.
inline double rot_u(double wx, double wy, double wz, const Focals& f, double x, double y) {
    const double rx = ((wx / f.fc) * x) * y;
    const double ry = -(wy * f.fx) - ((wy / f.fx) * x) * x;
    const double rz = wz * y;
    return (rx + ry) + rz;
}
inline double rot_v(double wx, double wy, double wz, const Focals& f, double x, double y) {
    const double rx = (wx * f.fy) + ((wx / f.fy) * y) * y;
    const double ry = -(((wy / f.fc) * x) * y);
    const double rz = -(wz * x);
    return (rx + ry) + rz;
}
inline double trans_u(double tx, double tz, const Focals& f, double z, double x) {
    const double cx = -((tx * f.fx) / z);
    const double cz = (tz * x) / z;
    return (cx + 0.0) + cz;
}
inline double trans_v(double ty, double tz, const Focals& f, double z, double y) {
    const double cy = -((ty * f.fy) / z);
    const double cz = (tz * y) / z;
    return (0.0 + cy) + cz;
}

inline double centered_x(const CameraIntrinsics& intr, CoordMode mode, int col) {
    double x = col - intr.principal_x;
    return mode == CoordMode::kNormalized ? x / intr.focal_x : x;
}
inline double centered_y(const CameraIntrinsics& intr, CoordMode mode, int row) {
    double y = row - intr.principal_y;
    return mode == CoordMode::kNormalized ? y / intr.focal_y : y;
}

}  // namespace

CameraIntrinsics::CameraIntrinsics(double fx, double fy, double cx, double cy, int w, int h)
    : focal_x(fx), focal_y(fy), principal_x(cx), principal_y(cy), width(w), height(h) {
    check_intrinsics(*this);
}

EgoMotion::EgoMotion(const std::array<double, 3>& omega_rad,
                     const std::array<double, 3>& translation_m,
                     std::optional<double> frame_interval_s)
    : omega(omega_rad), translation(translation_m), frame_interval(frame_interval_s) {
    check_finite3(omega, "ego-motion rotation");
    check_finite3(translation, "ego-motion translation");
    if (frame_interval && !(std::isfinite(*frame_interval) && *frame_interval > 0.0))
        throw ParameterError("ego-motion: frame_interval must be positive and finite");
}

DepthModel::DepthModel(double depth_m) : constant_depth(depth_m) {
    check_depth(*this);
}

MotionField::MotionField(int w, int h) : width(w), height(h) {
    if (w < 1 || h < 1) throw ParameterError("motion field: dimensions must be >= 1");
    u.assign(static_cast<std::size_t>(w) * h, 0.0);
    v.assign(static_cast<std::size_t>(w) * h, 0.0);
}

MotionField rotational_field(const CameraIntrinsics& intr,
                             const std::array<double, 3>& omega, CoordMode mode) {
    check_intrinsics(intr);
    check_finite3(omega, "rotation");
    const Focals f = focals_for(intr, mode);
    const double wx = omega[0], wy = omega[1], wz = omega[2];
    MotionField out(intr.width, intr.height);
    std::size_t i = 0;
    for (int row = 0; row < intr.height; ++row) {
        const double y = centered_y(intr, mode, row);
        for (int col = 0; col < intr.width; ++col, ++i) {
            const double x = centered_x(intr, mode, col);
            out.u[i] = rot_u(wx, wy, wz, f, x, y);
            out.v[i] = rot_v(wx, wy, wz, f, x, y);
        }
    }
    return out;
}

MotionField translational_field(const CameraIntrinsics& intr,
                                const std::array<double, 3>& translation,
                                const DepthModel& depth, CoordMode mode) {
    check_intrinsics(intr);
    check_finite3(translation, "translation");
    check_depth(depth);
    const Focals f = focals_for(intr, mode);
    const double tx = translation[0], ty = translation[1], tz = translation[2];
    const double z = depth.constant_depth;
    MotionField out(intr.width, intr.height);
    std::size_t i = 0;
    for (int row = 0; row < intr.height; ++row) {
        const double y = centered_y(intr, mode, row);
        const double vt = trans_v(ty, tz, f, z, y);
        for (int col = 0; col < intr.width; ++col, ++i) {
            const double x = centered_x(intr, mode, col);
            out.u[i] = trans_u(tx, tz, f, z, x);
            out.v[i] = vt;
        }
    }
    return out;
}

MotionField compose_field(const MotionField& rot, const MotionField& trans) {
    if (!rot.same_size(trans))
        throw ParameterError("compose_field: dimension mismatch");
    MotionField out(rot.width, rot.height);
    const std::size_t n = rot.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        out.u[i] = rot.u[i] + trans.u[i];
        out.v[i] = rot.v[i] + trans.v[i];
    }
    return out;
}

MotionField ego_field(const CameraIntrinsics& intr, const EgoMotion& ego,
                      const DepthModel& depth, CoordMode mode) {
    check_intrinsics(intr);
    check_finite3(ego.omega, "ego-motion rotation");
    check_finite3(ego.translation, "ego-motion translation");
    check_depth(depth);
    const Focals f = focals_for(intr, mode);
    const double wx = ego.omega[0], wy = ego.omega[1], wz = ego.omega[2];
    const double tx = ego.translation[0], ty = ego.translation[1], tz = ego.translation[2];
    const double z = depth.constant_depth;
    MotionField out(intr.width, intr.height);
    std::size_t i = 0;
    for (int row = 0; row < intr.height; ++row) {
        const double y = centered_y(intr, mode, row);
        const double vt = trans_v(ty, tz, f, z, y);
        for (int col = 0; col < intr.width; ++col, ++i) {
            const double x = centered_x(intr, mode, col);
            out.u[i] = rot_u(wx, wy, wz, f, x, y) + trans_u(tx, tz, f, z, x);
            out.v[i] = rot_v(wx, wy, wz, f, x, y) + vt;
        }
    }
    return out;
}

}  // namespace egoflow
