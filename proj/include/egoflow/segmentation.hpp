#pragma once

#include <cstdint>
#include <vector>

#include "egoflow/flow_codec.hpp"
#include "egoflow/geometry.hpp"

// Ego-motion-compensated motion segmentation: subtract the predicted camera
// motion field from observed flow, threshold the residual magnitude, and
// score masks with per-class IoU.

namespace egoflow {

struct SegMask {
    int width = 0, height = 0;
    std::vector<std::uint8_t> moving;  // 0/1 per pixel

    SegMask() = default;
    SegMask(int w, int h);
};

struct EvalReport {
    double moving_iou = 0, static_iou = 0, mean_iou = 0;
    std::uint64_t moving_tp = 0, moving_fp = 0, moving_fn = 0;
    std::uint64_t static_tp = 0, static_fp = 0, static_fn = 0;
};

// residual = observed - predicted per pixel. Invalid observed pixels come
// back as (0,0) and stay invalid.
FlowImage compensate(const FlowImage& observed, const MotionField& predicted);

// moving = |residual| > tau; invalid pixels are static.
SegMask threshold_segment(const FlowImage& residual, double tau);

// 3x3 majority vote, image border pixels use the available neighborhood.
SegMask majority_filter(const SegMask& mask);

// Per-class IoU; a class absent from both prediction and ground truth counts
// as IoU 1 (vacuous agreement). mean_iou = (moving + static) / 2.
EvalReport evaluate(const SegMask& pred, const SegMask& gt);

// Dataset-level report from summed per-frame counts.
EvalReport report_from_counts(std::uint64_t m_tp, std::uint64_t m_fp, std::uint64_t m_fn,
                              std::uint64_t s_tp, std::uint64_t s_fp, std::uint64_t s_fn);

// 8-bit single-channel PNG, 0 = static, 255 = moving.
std::vector<std::uint8_t> write_mask_png(const SegMask& mask);
SegMask read_mask_png(const std::vector<std::uint8_t>& bytes);

}  // namespace egoflow
