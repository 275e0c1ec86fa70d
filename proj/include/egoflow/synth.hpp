#pragma once

#include <optional>
#include <string>
#include <vector>

#include "egoflow/flow_codec.hpp"
#include "egoflow/geometry.hpp"
#include "egoflow/segmentation.hpp"

// Synthetic scene oracle: renders exact ground-truth flow by back-projecting
// every pixel with its depth, applying the relative 3D motion (camera pose
// change plus per-object velocity), and re-projecting. A finite-displacement
// two-pose computation, deliberately a different code path from the
// closed-form field equations it cross-checks.

namespace egoflow {

// Axis-aligned image rectangle [x0, x0+w) x [y0, y0+h) at a single depth,
// moving with a uniform 3D velocity in the reference camera frame.
struct SceneObject {
    int x0 = 0, y0 = 0, width = 0, height = 0;
    double depth = 10.0;                      // m, > 0
    std::array<double, 3> velocity{};         // m/frame
};

struct SceneSpec {
    std::string name = "scene";
    CameraIntrinsics intr;
    EgoMotion ego;
    double background_depth = 10.0;           // m, > 0
    std::vector<double> background_grid;      // optional per-pixel depth, row-major
    std::vector<SceneObject> objects;

    explicit SceneSpec(const CameraIntrinsics& intrinsics) : intr(intrinsics) {}

    // Depth of the source pixel: nearest covering object, else grid, else
    // the constant background.
    double depth_at(int row, int col) const;
    // Index into objects of the nearest covering object, or -1.
    int owner_at(int row, int col) const;
};

struct RenderedScene {
    FlowImage flow;   // invalid where the point leaves the view frustum
    SegMask mask;     // pixels owned by an object with nonzero velocity
};

// Exact finite-displacement flow. A pixel is flagged invalid when the moved
// point ends up at nonpositive depth or re-projects outside
// [0, width-1] x [0, height-1].
RenderedScene render_flow(const SceneSpec& scene);

struct SuiteOptions {
    int width = 160;
    int height = 120;
    double focal = 130.0;              // scenes draw focals near this value
    int min_movers = 1, max_movers = 5;
    double max_rotation = 0.02;        // rad/frame caps
    double max_translation = 0.2;      // m/frame caps
    double min_mover_residual = 1.2;   // px, against the plane-depth prediction
    // Replace the last scene with the parallax-ambiguity construction (an
    // object tracking the camera translation with the focus of expansion on
    // it, giving near-zero residual). Only emitted when movers are enabled
    // and count >= 4.
    bool include_parallax_scene = true;

    static SuiteOptions static_scenes() {
        SuiteOptions o;
        o.min_movers = 0;
        o.max_movers = 0;
        o.include_parallax_scene = false;
        return o;
    }
};

// Deterministic: identical seed, count and options give identical scenes.
// Scene kinds cycle yaw-dominant, forward, mixed 6-DoF; names carry the kind.
std::vector<SceneSpec> make_suite(std::uint64_t seed, int count,
                                  const SuiteOptions& options = {});

// Line-oriented text form (see the grammar in the implementation); numbers
// round-trip exactly.
std::string serialize_scene(const SceneSpec& scene);
SceneSpec parse_scene(const std::string& text);

}  // namespace egoflow
