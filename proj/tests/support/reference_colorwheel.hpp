#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Scalar double-precision transcription of the standard optical-flow color
// wheel (direct port of the published wheel construction and interpolation),
// adapted to this project's saturate-at-one contract for out-of-range
// magnitudes. Used as the independent oracle for the fast encoder; the fast
// path may differ by at most one 8-bit count per channel.
namespace testsupport {

struct RefColor {
    int r, g, b;
};

inline const std::array<std::array<int, 3>, 55>& reference_wheel() {
    static const auto wheel = [] {
        std::array<std::array<int, 3>, 55> w{};
        const int RY = 15, YG = 6, GC = 4, CB = 11, BM = 13, MR = 6;
        int k = 0;
        for (int i = 0; i < RY; ++i, ++k) w[k] = {255, 255 * i / RY, 0};
        for (int i = 0; i < YG; ++i, ++k) w[k] = {255 - 255 * i / YG, 255, 0};
        for (int i = 0; i < GC; ++i, ++k) w[k] = {0, 255, 255 * i / GC};
        for (int i = 0; i < CB; ++i, ++k) w[k] = {0, 255 - 255 * i / CB, 255};
        for (int i = 0; i < BM; ++i, ++k) w[k] = {255 * i / BM, 0, 255};
        for (int i = 0; i < MR; ++i, ++k) w[k] = {255, 0, 255 - 255 * i / MR};
        return w;
    }();
    return wheel;
}

inline RefColor reference_color(double u, double v, double max_magnitude) {
    const auto& wheel = reference_wheel();
    const int ncols = 55;
    const double fx = u / max_magnitude;
    const double fy = v / max_magnitude;
    double rad = std::sqrt(fx * fx + fy * fy);
    if (rad > 1.0) rad = 1.0;  // saturate, not darken
    const double a = std::atan2(-fy, -fx) / 3.14159265358979323846;
    const double fk = (a + 1.0) / 2.0 * (ncols - 1);
    int k0 = static_cast<int>(fk);
    if (k0 < 0) k0 = 0;
    if (k0 > ncols - 1) k0 = ncols - 1;
    const int k1 = (k0 + 1) % ncols;
    const double f = fk - k0;
    RefColor out{};
    int* channels[3] = {&out.r, &out.g, &out.b};
    for (int c = 0; c < 3; ++c) {
        const double col0 = wheel[k0][c] / 255.0;
        const double col1 = wheel[k1][c] / 255.0;
        double col = (1.0 - f) * col0 + f * col1;
        col = 1.0 - rad * (1.0 - col);
        *channels[c] = static_cast<int>(255.0 * col);
    }
    return out;
}

}  // namespace testsupport
