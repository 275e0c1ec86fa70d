#include "egoflow/segmentation.hpp"

#include <cmath>

#include "egoflow/errors.hpp"
#include "egoflow/png_io.hpp"

namespace egoflow {

SegMask::SegMask(int w, int h) : width(w), height(h) {
    if (w < 1 || h < 1) throw ParameterError("mask: dimensions must be >= 1");
    moving.assign(static_cast<std::size_t>(w) * h, 0);
}

FlowImage compensate(const FlowImage& observed, const MotionField& predicted) {
    if (!observed.field.same_size(predicted))
        throw ParameterError("compensate: dimension mismatch");
    FlowImage residual(MotionField(predicted.width, predicted.height));
    const std::size_t n = predicted.pixel_count();
    if (!observed.valid.empty()) residual.valid = observed.valid;
    for (std::size_t i = 0; i < n; ++i) {
        if (!observed.pixel_valid(i)) continue;  // residual stays (0,0), carried invalid
        residual.field.u[i] = observed.field.u[i] - predicted.u[i];
        residual.field.v[i] = observed.field.v[i] - predicted.v[i];
    }
    return residual;
}

SegMask threshold_segment(const FlowImage& residual, double tau) {
    if (!(std::isfinite(tau) && tau >= 0.0))
        throw ParameterError("threshold: tau must be >= 0");
    const MotionField& f = residual.field;
    SegMask mask(f.width, f.height);
    const double tau_sq = tau * tau;
    for (std::size_t i = 0; i < f.pixel_count(); ++i) {
        if (!residual.pixel_valid(i)) continue;  // invalid pixels stay static
        const double mag_sq = f.u[i] * f.u[i] + f.v[i] * f.v[i];
        mask.moving[i] = mag_sq > tau_sq ? 1 : 0;
    }
    return mask;
}

SegMask majority_filter(const SegMask& mask) {
    SegMask out(mask.width, mask.height);
    for (int row = 0; row < mask.height; ++row) {
        for (int col = 0; col < mask.width; ++col) {
            int votes = 0, cells = 0;
            for (int dr = -1; dr <= 1; ++dr) {
                const int r = row + dr;
                if (r < 0 || r >= mask.height) continue;
                for (int dc = -1; dc <= 1; ++dc) {
                    const int c = col + dc;
                    if (c < 0 || c >= mask.width) continue;
                    ++cells;
                    votes += mask.moving[static_cast<std::size_t>(r) * mask.width + c];
                }
            }
            out.moving[static_cast<std::size_t>(row) * mask.width + col] =
                2 * votes > cells ? 1 : 0;
        }
    }
    return out;
}

EvalReport report_from_counts(std::uint64_t m_tp, std::uint64_t m_fp, std::uint64_t m_fn,
                              std::uint64_t s_tp, std::uint64_t s_fp, std::uint64_t s_fn) {
    EvalReport r;
    r.moving_tp = m_tp;
    r.moving_fp = m_fp;
    r.moving_fn = m_fn;
    r.static_tp = s_tp;
    r.static_fp = s_fp;
    r.static_fn = s_fn;
    const std::uint64_t m_union = m_tp + m_fp + m_fn;
    const std::uint64_t s_union = s_tp + s_fp + s_fn;
    // A class absent from both masks scores 1: vacuous agreement.
    r.moving_iou = m_union ? static_cast<double>(m_tp) / static_cast<double>(m_union) : 1.0;
    r.static_iou = s_union ? static_cast<double>(s_tp) / static_cast<double>(s_union) : 1.0;
    r.mean_iou = (r.moving_iou + r.static_iou) / 2.0;
    return r;
}

EvalReport evaluate(const SegMask& pred, const SegMask& gt) {
    if (pred.width != gt.width || pred.height != gt.height)
        throw ParameterError("evaluate: dimension mismatch");
    std::uint64_t m_tp = 0, m_fp = 0, m_fn = 0, s_tp = 0, s_fp = 0, s_fn = 0;
    for (std::size_t i = 0; i < pred.moving.size(); ++i) {
        const bool p = pred.moving[i] != 0;
        const bool g = gt.moving[i] != 0;
        if (p && g) ++m_tp;
        if (p && !g) ++m_fp, ++s_fn;
        if (!p && g) ++m_fn, ++s_fp;
        if (!p && !g) ++s_tp;
    }
    return report_from_counts(m_tp, m_fp, m_fn, s_tp, s_fp, s_fn);
}

std::vector<std::uint8_t> write_mask_png(const SegMask& mask) {
    png::Gray8 img;
    img.width = mask.width;
    img.height = mask.height;
    img.pixels.resize(mask.moving.size());
    for (std::size_t i = 0; i < mask.moving.size(); ++i)
        img.pixels[i] = mask.moving[i] ? 255 : 0;
    return png::encode_gray8(img);
}

SegMask read_mask_png(const std::vector<std::uint8_t>& bytes) {
    png::Gray8 img = png::decode_gray8(bytes);
    SegMask mask(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        mask.moving[i] = img.pixels[i] >= 128 ? 1 : 0;
    return mask;
}

}  // namespace egoflow
