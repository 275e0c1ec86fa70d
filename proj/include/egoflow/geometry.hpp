#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

// Closed-form motion-field synthesis for a pinhole camera.
//
// A motion field is the 2D image-plane velocity field induced by relative
// motion between the camera and the scene. For differential camera motion
// (omega, T) and a pixel at centered coordinates (x, y) it decomposes into
// a rotational part that is independent of scene depth,
//
//   u_r = -wy*fx + wz*y + (wx/fc)*x*y - (wy/fx)*x*x
//   v_r =  wx*fy - wz*x - (wy/fc)*x*y + (wx/fy)*y*y
//
// and a translational part scaled by the inverse scene depth Z,
//
//   u_t = (Tz*x - Tx*fx) / Z
//   v_t = (Tz*y - Ty*fy) / Z
//
// with fc = sqrt(fx*fy) (fc = fx when the focal lengths are equal, so the
// anisotropic form reduces exactly to the single-f textbook equations).
// Coordinates are centered at the principal point, x rightward, y downward,
// focal lengths in pixels.
//
// Evaluation order is pinned for reproducibility: each of the six motion
// parameters contributes one term group, rounded per group, folded
// (rot_x + rot_y) + rot_z and (trans_x + trans_y) + trans_z, and the full
// field adds those two partial sums once. This makes two identities exact
// rather than approximate: ego_field equals the three-step
// rotational/translational/compose path, and the six single-parameter fields
// sum back to the full field (see component_sum in vmt.hpp).

namespace egoflow {

struct CameraIntrinsics {
    double focal_x;
    double focal_y;
    double principal_x;
    double principal_y;
    int width;
    int height;

    // Throws ParameterError unless focal lengths are positive and finite,
    // the principal point lies inside the image, and width/height >= 1.
    CameraIntrinsics(double fx, double fy, double cx, double cy, int w, int h);
};

// Differential 6-DoF camera motion between two consecutive frames.
// omega is in rad/frame about the camera x (right), y (down), z (forward)
// axes; translation is in m/frame along the same axes. Rate-based sources
// must be pre-multiplied by the frame interval before constructing this.
struct EgoMotion {
    std::array<double, 3> omega{};
    std::array<double, 3> translation{};
    std::optional<double> frame_interval;  // seconds, > 0 when present

    EgoMotion() = default;  // zero motion
    EgoMotion(const std::array<double, 3>& omega_rad,
              const std::array<double, 3>& translation_m,
              std::optional<double> frame_interval_s = std::nullopt);
};

// Constant-depth virtual plane standing in for a per-pixel depth map.
struct DepthModel {
    double constant_depth;

    explicit DepthModel(double depth_m = 10.0);
};

// Dense per-pixel 2-vector grid, row-major. Plain container: construction
// zero-fills, ops validate what they need.
struct MotionField {
    int width = 0;
    int height = 0;
    std::vector<double> u;
    std::vector<double> v;

    MotionField() = default;
    MotionField(int w, int h);

    std::size_t pixel_count() const { return u.size(); }
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * width + col;
    }
    double u_at(int row, int col) const { return u[index(row, col)]; }
    double v_at(int row, int col) const { return v[index(row, col)]; }
    bool same_size(const MotionField& other) const {
        return width == other.width && height == other.height;
    }
};

// Pixel-unit centered coordinates (the default), or image-plane coordinates
// divided by the focal length so the equations run with f = 1 (the usual
// visualization convention).
enum class CoordMode { kPixels, kNormalized };

// Field induced by pure camera rotation. Independent of scene depth.
MotionField rotational_field(const CameraIntrinsics& intr,
                             const std::array<double, 3>& omega,
                             CoordMode mode = CoordMode::kPixels);

// Field induced by pure camera translation against a constant-depth plane.
MotionField translational_field(const CameraIntrinsics& intr,
                                const std::array<double, 3>& translation,
                                const DepthModel& depth,
                                CoordMode mode = CoordMode::kPixels);

// Per-pixel sum of two fields of identical dimensions.
MotionField compose_field(const MotionField& rot, const MotionField& trans);

// compose_field(rotational_field(...), translational_field(...)) computed in
// one pass; bit-identical to the three-step composition.
MotionField ego_field(const CameraIntrinsics& intr, const EgoMotion& ego,
                      const DepthModel& depth,
                      CoordMode mode = CoordMode::kPixels);

}  // namespace egoflow
