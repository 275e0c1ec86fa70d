#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "egoflow/colorwheel.hpp"
#include "egoflow/geometry.hpp"

// Vehicle Motion Tensor generation: differential ego-motion + intrinsics
// -> composed motion field -> colorwheel tensor, plus the per-component
// decomposition (one field per motion parameter with the other five zeroed).

namespace egoflow {

enum class MotionComponent : int {
    kRotX = 0,
    kRotY = 1,
    kRotZ = 2,
    kTransX = 3,
    kTransY = 4,
    kTransZ = 5,
};
inline constexpr int kMotionComponentCount = 6;
const char* motion_component_name(MotionComponent c);

// colorwheel_encode(normalize_field(ego_field(...), norm)). The hot path is
// fused but stays bit-identical to that composition.
VmtImage build_vmt(const CameraIntrinsics& intr, const EgoMotion& ego,
                   const DepthModel& depth,
                   const Normalization& norm = Normalization::per_frame_max());

struct VmtDecomposition {
    std::array<MotionField, kMotionComponentCount> fields;
    std::array<VmtImage, kMotionComponentCount> images;
};

// One field+image per motion parameter, others zeroed. component_sum of the
// fields reproduces ego_field exactly.
VmtDecomposition decompose_vmt(const CameraIntrinsics& intr, const EgoMotion& ego,
                               const DepthModel& depth,
                               const Normalization& norm = Normalization::per_frame_max());

// Canonical in-index-order summation of the six component fields:
// ((c0+c1)+c2) + ((c3+c4)+c5) per pixel, matching the synthesis kernels'
// fold so the result is bit-for-bit ego_field.
MotionField component_sum(const std::array<MotionField, kMotionComponentCount>& fields);

struct DominantComponent {
    bool any = false;                      // false when all six fields are zero
    MotionComponent component = MotionComponent::kRotX;
    std::array<double, kMotionComponentCount> energy_fraction{};  // sums to 1 when any
};

// Argmax of mean squared field magnitude over the six components.
DominantComponent dominant_component(
    const std::array<MotionField, kMotionComponentCount>& fields);

// p-th percentile (0..100) of per-pixel magnitudes pooled over a set of
// fields; the recommended way to pick a fixed normalization scale.
double percentile_magnitude(std::span<const MotionField> fields, double percentile);

// Raw float32 little-endian tensor dump: 16-byte header (magic "VMT1",
// uint32 channels, width, height), then channel-major planes.
std::vector<std::uint8_t> write_tensor(const VmtImage& image);            // 3 channels, 0..255
std::vector<std::uint8_t> write_tensor(const MotionField& field);         // 2 channels (u,v)
std::vector<std::uint8_t> write_tensor(
    const std::array<MotionField, kMotionComponentCount>& fields);        // 12 channels

}  // namespace egoflow
