#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "egoflow/geometry.hpp"

// Colorwheel encoding of motion fields: the standard 55-bin wheel
// (15 RY, 6 YG, 4 GC, 11 CB, 13 BM, 6 MR segments), hue taken from
// atan2(-v, -u), saturation from min(|v|/max_magnitude, 1), zero vectors
// rendering white. Channel values land in [0,255] for any finite field.
//
// The per-pixel angle uses a polynomial atan2 (max error ~1e-7 rad) and
// single-precision blending so the encoder vectorizes; against an exact
// double-precision evaluation the 8-bit output can differ by at most one
// count on isolated pixels.

namespace egoflow {

// Colorwheel-encoded tensor, planar channel layout.
struct VmtImage {
    int width = 0, height = 0;
    std::vector<std::uint8_t> r, g, b;

    VmtImage() = default;
    VmtImage(int w, int h);

    std::size_t pixel_count() const { return r.size(); }
};

// Normalization applied to a field before encoding.
struct Normalization {
    enum class Mode { kPerFrameMax, kFixed };
    Mode mode = Mode::kPerFrameMax;
    double scale = 1.0;  // kFixed only, > 0

    static Normalization per_frame_max() { return {}; }
    static Normalization fixed(double scale);
};

// Largest per-pixel magnitude of the field (0 for an all-zero field).
double max_magnitude(const MotionField& field);

// Divides every component by the mode's scale. kPerFrameMax with an all-zero
// field is the identity.
MotionField normalize_field(const MotionField& field, const Normalization& norm);

// max_magnitude = nullopt selects AUTO (the per-frame maximum).
VmtImage colorwheel_encode(const MotionField& field,
                           std::optional<double> max_magnitude = std::nullopt);

// 8-bit RGB PNG of the encoded image.
std::vector<std::uint8_t> encode_vmt_png(const VmtImage& image);

// The 55 wheel colors, exposed so tests and tools can reason about hue bins.
struct WheelColor {
    std::uint8_t r, g, b;
};
const std::vector<WheelColor>& colorwheel_bins();

namespace detail {
// Encode core shared with the fused VMT builder: divides components by
// `scale` in double (normalize_field's exact rounding), saturates at
// `max_magnitude`.
void encode_scaled(const double* u, const double* v, std::size_t n, double scale,
                   double max_magnitude, std::uint8_t* out_r, std::uint8_t* out_g,
                   std::uint8_t* out_b);
}  // namespace detail

}  // namespace egoflow
