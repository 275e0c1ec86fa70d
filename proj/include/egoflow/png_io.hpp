#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Minimal libpng wrappers for the few raster shapes this project needs.
// All encoders are deterministic: fixed compression settings, no ancillary
// chunks beyond what libpng emits by default.

namespace egoflow::png {

struct Gray8 {
    int width = 0, height = 0;
    std::vector<std::uint8_t> pixels;  // row-major
};

struct Rgb8 {
    int width = 0, height = 0;
    std::vector<std::uint8_t> pixels;  // row-major interleaved RGB
};

struct Rgb16 {
    int width = 0, height = 0;
    std::vector<std::uint16_t> pixels;  // row-major interleaved RGB, host order
};

std::vector<std::uint8_t> encode_gray8(const Gray8& img);
std::vector<std::uint8_t> encode_rgb8(const Rgb8& img);
std::vector<std::uint8_t> encode_rgb16(const Rgb16& img);

Gray8 decode_gray8(const std::vector<std::uint8_t>& bytes);
Rgb8 decode_rgb8(const std::vector<std::uint8_t>& bytes);
Rgb16 decode_rgb16(const std::vector<std::uint8_t>& bytes);

// Bit depth / color type of a PNG stream without a full decode.
struct PngInfo {
    int width = 0, height = 0, bit_depth = 0, channels = 0;
};
PngInfo probe(const std::vector<std::uint8_t>& bytes);

}  // namespace egoflow::png

namespace egoflow {

// Whole-file helpers shared by the codecs and the CLI.
std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);
void write_file(const std::string& path, const std::string& text);

}  // namespace egoflow
