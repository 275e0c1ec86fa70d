#include "egoflow/colorwheel.hpp"

#include <algorithm>
#include <cmath>

#include "egoflow/errors.hpp"
#include "egoflow/png_io.hpp"

namespace egoflow {

namespace {

// Segment lengths of the standard wheel; 55 bins total.
constexpr int kRY = 15, kYG = 6, kGC = 4, kCB = 11, kBM = 13, kMR = 6;
constexpr int kBins = kRY + kYG + kGC + kCB + kBM + kMR;

std::vector<WheelColor> make_wheel() {
    std::vector<WheelColor> w;
    w.reserve(kBins);
    auto push = [&](int r, int g, int b) {
        w.push_back({static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                     static_cast<std::uint8_t>(b)});
    };
    for (int i = 0; i < kRY; ++i) push(255, 255 * i / kRY, 0);
    for (int i = 0; i < kYG; ++i) push(255 - 255 * i / kYG, 255, 0);
    for (int i = 0; i < kGC; ++i) push(0, 255, 255 * i / kGC);
    for (int i = 0; i < kCB; ++i) push(0, 255 - 255 * i / kCB, 255);
    for (int i = 0; i < kBM; ++i) push(255 * i / kBM, 0, 255);
    for (int i = 0; i < kMR; ++i) push(255, 0, 255 - 255 * i / kMR);
    return w;
}

// Wheel channels padded by one entry ([kBins] = [0]) so the k0+1 lookup
// never wraps.
struct WheelTables {
    float r[kBins + 1], g[kBins + 1], b[kBins + 1];
    WheelTables() {
        auto wheel = make_wheel();
        for (int i = 0; i <= kBins; ++i) {
            const WheelColor& c = wheel[i % kBins];
            r[i] = static_cast<float>(c.r);
            g[i] = static_cast<float>(c.g);
            b[i] = static_cast<float>(c.b);
        }
    }
};
const WheelTables kWheel;

constexpr float kPi = 3.14159265358979323846f;
constexpr float kHalfPi = 1.57079632679489662f;

// Odd-polynomial fit of atan on [-1,1]: atan(z) ~= z*P(z*z), max error about
// 1.1e-7 rad in single precision, branch-free so the encode loop vectorizes.
inline float atan_poly(float t) {
    float p = 0.002766283502f;
    p = p * t - 0.015731249122f;
    p = p * t + 0.042137623589f;
    p = p * t - 0.074568548260f;
    p = p * t + 0.106183706370f;
    p = p * t - 0.141977977941f;
    p = p * t + 0.199918720291f;
    p = p * t - 0.333330367093f;
    p = p * t + 0.999999981789f;
    return p;
}

}  // namespace

VmtImage::VmtImage(int w, int h) : width(w), height(h) {
    if (w < 1 || h < 1) throw ParameterError("vmt image: dimensions must be >= 1");
    const std::size_t n = static_cast<std::size_t>(w) * h;
    r.assign(n, 0);
    g.assign(n, 0);
    b.assign(n, 0);
}

Normalization Normalization::fixed(double scale) {
    if (!(std::isfinite(scale) && scale > 0.0))
        throw ParameterError("normalization: fixed scale must be positive and finite");
    Normalization n;
    n.mode = Mode::kFixed;
    n.scale = scale;
    return n;
}

double max_magnitude(const MotionField& field) {
    double max_sq = 0.0;
    const std::size_t n = field.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        double sq = field.u[i] * field.u[i] + field.v[i] * field.v[i];
        if (sq > max_sq) max_sq = sq;
    }
    return std::sqrt(max_sq);
}

MotionField normalize_field(const MotionField& field, const Normalization& norm) {
    double scale;
    if (norm.mode == Normalization::Mode::kFixed) {
        if (!(std::isfinite(norm.scale) && norm.scale > 0.0))
            throw ParameterError("normalization: fixed scale must be positive and finite");
        scale = norm.scale;
    } else {
        scale = max_magnitude(field);
        if (scale == 0.0) return field;  // guarded division: zero field is left as-is
    }
    MotionField out(field.width, field.height);
    const std::size_t n = field.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        out.u[i] = field.u[i] / scale;
        out.v[i] = field.v[i] / scale;
    }
    return out;
}

namespace detail {

// Shared encode core. Components are divided by `scale` in double, matching
// normalize_field's rounding exactly, which is what keeps build_vmt's fused
// path bit-identical to colorwheel_encode(normalize_field(...)). The wheel
// math itself runs in single precision over chunked scratch so the math pass
// vectorizes. Non-finite components (precondition violations) still map to a
// deterministic in-range color; no undefined float->int casts.
void encode_scaled(const double* u, const double* v, std::size_t n, double scale,
                   double max_magnitude, std::uint8_t* out_r, std::uint8_t* out_g,
                   std::uint8_t* out_b) {
    constexpr std::size_t kChunk = 4096;
    float rad[kChunk], fk[kChunk];
    const float inv_max = 1.0f / static_cast<float>(max_magnitude);
    const float top_bin = static_cast<float>(kBins - 1);
    for (std::size_t base = 0; base < n; base += kChunk) {
        const std::size_t m = std::min(kChunk, n - base);
        const double* cu = u + base;
        const double* cv = v + base;
        for (std::size_t i = 0; i < m; ++i) {
            const float x = static_cast<float>(cu[i] / scale);
            const float y = static_cast<float>(cv[i] / scale);
            rad[i] = std::sqrt(x * x + y * y) * inv_max;
            const float ax = std::fabs(x), ay = std::fabs(y);
            const float hi = std::max(ax, ay);
            const float lo = std::min(ax, ay);
            const float den = std::max(hi, 1e-30f);
            const float z = lo / den;
            float a0 = z * atan_poly(z * z);
            const float swap = ay > ax ? 1.0f : 0.0f;
            a0 = a0 + swap * (kHalfPi - 2.0f * a0);
            const float flip = x > 0.0f ? 1.0f : 0.0f;     // angle of (-x,-y)
            a0 = a0 + flip * (kPi - 2.0f * a0);
            const float a = std::copysign(a0, -y);         // atan2(-y,-x) incl. zero signs
            float k = (a / kPi + 1.0f) * 0.5f * top_bin;
            k = k > 0.0f ? k : 0.0f;                       // also maps NaN to bin 0
            k = k < top_bin ? k : top_bin;
            fk[i] = k;
        }
        std::uint8_t* cr = out_r + base;
        std::uint8_t* cg = out_g + base;
        std::uint8_t* cb = out_b + base;
        for (std::size_t i = 0; i < m; ++i) {
            const float k = fk[i];
            const int k0 = static_cast<int>(k);
            const float f = k - static_cast<float>(k0);
            const float sat = rad[i] < 1.0f ? rad[i] : 1.0f;
            const float c0 = kWheel.r[k0] + f * (kWheel.r[k0 + 1] - kWheel.r[k0]);
            const float c1 = kWheel.g[k0] + f * (kWheel.g[k0 + 1] - kWheel.g[k0]);
            const float c2 = kWheel.b[k0] + f * (kWheel.b[k0 + 1] - kWheel.b[k0]);
            float r8 = 255.0f - sat * (255.0f - c0);
            float g8 = 255.0f - sat * (255.0f - c1);
            float b8 = 255.0f - sat * (255.0f - c2);
            r8 = r8 > 0.0f ? r8 : 0.0f;
            g8 = g8 > 0.0f ? g8 : 0.0f;
            b8 = b8 > 0.0f ? b8 : 0.0f;
            r8 = r8 < 255.0f ? r8 : 255.0f;
            g8 = g8 < 255.0f ? g8 : 255.0f;
            b8 = b8 < 255.0f ? b8 : 255.0f;
            cr[i] = static_cast<std::uint8_t>(r8);
            cg[i] = static_cast<std::uint8_t>(g8);
            cb[i] = static_cast<std::uint8_t>(b8);
        }
    }
}

}  // namespace detail

VmtImage colorwheel_encode(const MotionField& field, std::optional<double> max_mag) {
    if (field.width < 1 || field.height < 1)
        throw ParameterError("colorwheel: cannot encode an empty field");
    double mag;
    if (max_mag) {
        if (!(std::isfinite(*max_mag) && *max_mag > 0.0))
            throw ParameterError("colorwheel: max_magnitude must be positive and finite");
        mag = *max_mag;
    } else {
        mag = max_magnitude(field);
        if (mag == 0.0) mag = 1.0;  // zero field: saturation is zero everywhere anyway
    }
    VmtImage out(field.width, field.height);
    detail::encode_scaled(field.u.data(), field.v.data(), field.pixel_count(), 1.0, mag,
                          out.r.data(), out.g.data(), out.b.data());
    return out;
}

std::vector<std::uint8_t> encode_vmt_png(const VmtImage& image) {
    png::Rgb8 img;
    img.width = image.width;
    img.height = image.height;
    img.pixels.resize(image.pixel_count() * 3);
    for (std::size_t i = 0; i < image.pixel_count(); ++i) {
        img.pixels[3 * i] = image.r[i];
        img.pixels[3 * i + 1] = image.g[i];
        img.pixels[3 * i + 2] = image.b[i];
    }
    return png::encode_rgb8(img);
}

const std::vector<WheelColor>& colorwheel_bins() {
    static const std::vector<WheelColor> wheel = make_wheel();
    return wheel;
}

}  // namespace egoflow
