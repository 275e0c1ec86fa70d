#include "egoflow/flow_codec.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "egoflow/errors.hpp"
#include "egoflow/png_io.hpp"

namespace egoflow {

namespace {

constexpr float kFloSentinel = 202021.25f;
constexpr int kMaxDimension = 99999;  // same sanity bound as the reference reader

void append_le32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

std::uint32_t load_le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

float load_le_float(const std::uint8_t* p) {
    std::uint32_t bits = load_le32(p);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

void append_le_float(std::vector<std::uint8_t>& out, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    append_le32(out, bits);
}

std::uint16_t kitti_store(double value) {
    double stored = std::round(value * 64.0) + 32768.0;
    if (stored < 0.0) stored = 0.0;
    if (stored > 65535.0) stored = 65535.0;
    return static_cast<std::uint16_t>(stored);
}

}  // namespace

FlowImage read_flo(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 12) throw FormatError(".flo: truncated header");
    if (load_le_float(bytes.data()) != kFloSentinel)
        throw FormatError(".flo: bad sentinel (not a flow file, or wrong endianness)");
    const std::int32_t w = static_cast<std::int32_t>(load_le32(bytes.data() + 4));
    const std::int32_t h = static_cast<std::int32_t>(load_le32(bytes.data() + 8));
    if (w < 1 || h < 1 || w > kMaxDimension || h > kMaxDimension)
        throw FormatError(".flo: illegal dimensions");
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() != 12 + n * 8) throw FormatError(".flo: payload size mismatch");

    FlowImage flow(MotionField(w, h));
    const std::uint8_t* p = bytes.data() + 12;
    for (std::size_t i = 0; i < n; ++i, p += 8) {
        flow.field.u[i] = load_le_float(p);
        flow.field.v[i] = load_le_float(p + 4);
    }
    return flow;
}

std::vector<std::uint8_t> write_flo(const MotionField& field) {
    if (field.width < 1 || field.height < 1)
        throw ParameterError(".flo: cannot write an empty field");
    if (field.width > kMaxDimension || field.height > kMaxDimension)
        throw ParameterError(".flo: dimensions exceed format bounds");
    std::vector<std::uint8_t> out;
    out.reserve(12 + field.pixel_count() * 8);
    append_le_float(out, kFloSentinel);
    append_le32(out, static_cast<std::uint32_t>(field.width));
    append_le32(out, static_cast<std::uint32_t>(field.height));
    for (std::size_t i = 0; i < field.pixel_count(); ++i) {
        append_le_float(out, static_cast<float>(field.u[i]));
        append_le_float(out, static_cast<float>(field.v[i]));
    }
    return out;
}

std::vector<std::uint8_t> write_flo(const FlowImage& flow) { return write_flo(flow.field); }

FlowImage read_kitti_flow_png(const std::vector<std::uint8_t>& bytes) {
    png::Rgb16 img = png::decode_rgb16(bytes);
    FlowImage flow(MotionField(img.width, img.height));
    flow.valid.assign(flow.field.pixel_count(), 1);
    for (std::size_t i = 0; i < flow.field.pixel_count(); ++i) {
        const std::uint16_t su = img.pixels[3 * i];
        const std::uint16_t sv = img.pixels[3 * i + 1];
        const std::uint16_t sm = img.pixels[3 * i + 2];
        if (sm != 0) {
            flow.field.u[i] = (static_cast<double>(su) - 32768.0) / 64.0;
            flow.field.v[i] = (static_cast<double>(sv) - 32768.0) / 64.0;
        } else {
            flow.valid[i] = 0;  // u,v stay (0,0)
        }
    }
    return flow;
}

std::vector<std::uint8_t> write_kitti_flow_png(const FlowImage& flow) {
    const MotionField& f = flow.field;
    if (f.width < 1 || f.height < 1)
        throw ParameterError("kitti png: cannot write an empty field");
    png::Rgb16 img;
    img.width = f.width;
    img.height = f.height;
    img.pixels.assign(f.pixel_count() * 3, 0);
    for (std::size_t i = 0; i < f.pixel_count(); ++i) {
        // canonical invalid pixel: stored zeros. Non-finite components (the
        // usual unknown-flow markers) are demoted to invalid as well.
        if (!flow.pixel_valid(i) || !std::isfinite(f.u[i]) || !std::isfinite(f.v[i])) continue;
        img.pixels[3 * i] = kitti_store(f.u[i]);
        img.pixels[3 * i + 1] = kitti_store(f.v[i]);
        img.pixels[3 * i + 2] = 1;
    }
    return png::encode_rgb16(img);
}

}  // namespace egoflow
