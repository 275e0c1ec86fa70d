#include "egoflow/vmt.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "egoflow/errors.hpp"

namespace egoflow {

namespace {

constexpr char kTensorMagic[4] = {'V', 'M', 'T', '1'};

void append_le32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

void append_plane_f32(std::vector<std::uint8_t>& out, const float* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t bits;
        std::memcpy(&bits, &data[i], 4);
        append_le32(out, bits);
    }
}

std::vector<std::uint8_t> tensor_header(std::uint32_t channels, std::uint32_t width,
                                        std::uint32_t height) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kTensorMagic, kTensorMagic + 4);
    append_le32(out, channels);
    append_le32(out, width);
    append_le32(out, height);
    return out;
}

void append_field_planes(std::vector<std::uint8_t>& out, const MotionField& f) {
    std::vector<float> plane(f.pixel_count());
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = static_cast<float>(f.u[i]);
    append_plane_f32(out, plane.data(), plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = static_cast<float>(f.v[i]);
    append_plane_f32(out, plane.data(), plane.size());
}

EgoMotion single_component(const EgoMotion& ego, int k) {
    std::array<double, 3> omega{};
    std::array<double, 3> trans{};
    if (k < 3)
        omega[k] = ego.omega[k];
    else
        trans[k - 3] = ego.translation[k - 3];
    return EgoMotion(omega, trans, ego.frame_interval);
}

}  // namespace

const char* motion_component_name(MotionComponent c) {
    switch (c) {
        case MotionComponent::kRotX: return "rot_x";
        case MotionComponent::kRotY: return "rot_y";
        case MotionComponent::kRotZ: return "rot_z";
        case MotionComponent::kTransX: return "trans_x";
        case MotionComponent::kTransY: return "trans_y";
        case MotionComponent::kTransZ: return "trans_z";
    }
    return "?";
}

VmtImage build_vmt(const CameraIntrinsics& intr, const EgoMotion& ego,
                   const DepthModel& depth, const Normalization& norm) {
    MotionField field = ego_field(intr, ego, depth);
    double scale;
    if (norm.mode == Normalization::Mode::kFixed) {
        if (!(std::isfinite(norm.scale) && norm.scale > 0.0))
            throw ParameterError("normalization: fixed scale must be positive and finite");
        scale = norm.scale;
    } else {
        scale = max_magnitude(field);
        if (scale == 0.0) scale = 1.0;  // zero field normalizes to itself
    }
    // One fused divide+encode pass; bit-identical to
    // colorwheel_encode(normalize_field(field, norm), 1.0).
    VmtImage out(field.width, field.height);
    detail::encode_scaled(field.u.data(), field.v.data(), field.pixel_count(), scale, 1.0,
                          out.r.data(), out.g.data(), out.b.data());
    return out;
}

VmtDecomposition decompose_vmt(const CameraIntrinsics& intr, const EgoMotion& ego,
                               const DepthModel& depth, const Normalization& norm) {
    VmtDecomposition out;
    for (int k = 0; k < kMotionComponentCount; ++k) {
        EgoMotion component = single_component(ego, k);
        out.fields[k] = ego_field(intr, component, depth);
        double scale;
        if (norm.mode == Normalization::Mode::kFixed) {
            scale = norm.scale;
        } else {
            scale = max_magnitude(out.fields[k]);
            if (scale == 0.0) scale = 1.0;
        }
        out.images[k] = VmtImage(intr.width, intr.height);
        detail::encode_scaled(out.fields[k].u.data(), out.fields[k].v.data(),
                              out.fields[k].pixel_count(), scale, 1.0,
                              out.images[k].r.data(), out.images[k].g.data(),
                              out.images[k].b.data());
    }
    return out;
}

MotionField component_sum(const std::array<MotionField, kMotionComponentCount>& fields) {
    MotionField rot = compose_field(compose_field(fields[0], fields[1]), fields[2]);
    MotionField trans = compose_field(compose_field(fields[3], fields[4]), fields[5]);
    return compose_field(rot, trans);
}

DominantComponent dominant_component(
    const std::array<MotionField, kMotionComponentCount>& fields) {
    DominantComponent out;
    std::array<double, kMotionComponentCount> energy{};
    double total = 0.0;
    for (int k = 0; k < kMotionComponentCount; ++k) {
        const MotionField& f = fields[k];
        double sum = 0.0;
        for (std::size_t i = 0; i < f.pixel_count(); ++i)
            sum += f.u[i] * f.u[i] + f.v[i] * f.v[i];
        energy[k] = f.pixel_count() ? sum / static_cast<double>(f.pixel_count()) : 0.0;
        total += energy[k];
    }
    if (total == 0.0) return out;  // any == false: no dominant component
    out.any = true;
    int best = 0;
    for (int k = 1; k < kMotionComponentCount; ++k)
        if (energy[k] > energy[best]) best = k;
    out.component = static_cast<MotionComponent>(best);
    for (int k = 0; k < kMotionComponentCount; ++k) out.energy_fraction[k] = energy[k] / total;
    return out;
}

double percentile_magnitude(std::span<const MotionField> fields, double percentile) {
    if (!(percentile >= 0.0 && percentile <= 100.0))
        throw ParameterError("percentile must be in [0, 100]");
    std::vector<double> mags;
    for (const MotionField& f : fields)
        for (std::size_t i = 0; i < f.pixel_count(); ++i)
            mags.push_back(std::sqrt(f.u[i] * f.u[i] + f.v[i] * f.v[i]));
    if (mags.empty()) throw ParameterError("percentile_magnitude: no pixels");
    std::sort(mags.begin(), mags.end());
    const double pos = percentile / 100.0 * static_cast<double>(mags.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, mags.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return mags[lo] + frac * (mags[hi] - mags[lo]);
}

std::vector<std::uint8_t> write_tensor(const VmtImage& image) {
    auto out = tensor_header(3, static_cast<std::uint32_t>(image.width),
                             static_cast<std::uint32_t>(image.height));
    std::vector<float> plane(image.pixel_count());
    for (const auto* ch : {&image.r, &image.g, &image.b}) {
        for (std::size_t i = 0; i < plane.size(); ++i)
            plane[i] = static_cast<float>((*ch)[i]);
        append_plane_f32(out, plane.data(), plane.size());
    }
    return out;
}

std::vector<std::uint8_t> write_tensor(const MotionField& field) {
    auto out = tensor_header(2, static_cast<std::uint32_t>(field.width),
                             static_cast<std::uint32_t>(field.height));
    append_field_planes(out, field);
    return out;
}

std::vector<std::uint8_t> write_tensor(
    const std::array<MotionField, kMotionComponentCount>& fields) {
    for (int k = 1; k < kMotionComponentCount; ++k)
        if (!fields[k].same_size(fields[0]))
            throw ParameterError("tensor dump: component dimensions differ");
    auto out = tensor_header(12, static_cast<std::uint32_t>(fields[0].width),
                             static_cast<std::uint32_t>(fields[0].height));
    for (const MotionField& f : fields) append_field_planes(out, f);
    return out;
}

}  // namespace egoflow
