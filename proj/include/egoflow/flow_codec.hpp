#pragma once

#include <cstdint>
#include <vector>

#include "egoflow/geometry.hpp"

// Optical-flow container codecs.
//
//   .flo           float sentinel 202021.25, int32 width, int32 height, then
//                  width*height interleaved (u,v) float32; all little-endian.
//                  No validity mask: reads come back all-valid.
//   KITTI flow PNG 16-bit RGB PNG; R,G store u,v as round(value*64) + 32768
//                  clamped to [0,65535], B stores validity (0/1). Invalid
//                  pixels are written as stored zeros.

namespace egoflow {

// Observed flow plus an optional validity mask (empty = all valid).
struct FlowImage {
    MotionField field;
    std::vector<std::uint8_t> valid;  // 0/1 per pixel when present

    FlowImage() = default;
    explicit FlowImage(MotionField f) : field(std::move(f)) {}

    bool pixel_valid(std::size_t i) const { return valid.empty() || valid[i] != 0; }
};

FlowImage read_flo(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> write_flo(const FlowImage& flow);
std::vector<std::uint8_t> write_flo(const MotionField& field);

FlowImage read_kitti_flow_png(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> write_kitti_flow_png(const FlowImage& flow);

}  // namespace egoflow
