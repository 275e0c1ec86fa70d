#include "egoflow/png_io.hpp"

#include <png.h>

#include <cstring>
#include <fstream>

#include "egoflow/errors.hpp"

namespace egoflow::png {

namespace {

struct Reader {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos = 0;
};

void read_callback(png_structp png, png_bytep out, png_size_t count) {
    auto* r = static_cast<Reader*>(png_get_io_ptr(png));
    if (r->pos + count > r->size) png_error(png, "unexpected end of PNG stream");
    std::memcpy(out, r->data + r->pos, count);
    r->pos += count;
}

void write_callback(png_structp png, png_bytep data, png_size_t count) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + count);
}

void flush_callback(png_structp) {}

struct Decoded {
    int width = 0, height = 0, bit_depth = 0, channels = 0;
    std::vector<std::uint8_t> rows;  // raw bytes, 16-bit samples big-endian
};

Decoded decode(const std::vector<std::uint8_t>& bytes, bool header_only = false) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw FormatError("not a PNG stream");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    Decoded result;
    std::vector<png_bytep> row_ptrs;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("corrupt PNG stream");
    }
    Reader reader{bytes.data(), bytes.size()};
    png_set_read_fn(png, &reader, read_callback);
    png_read_info(png, info);

    result.width = static_cast<int>(png_get_image_width(png, info));
    result.height = static_cast<int>(png_get_image_height(png, info));
    result.bit_depth = png_get_bit_depth(png, info);
    result.channels = png_get_channels(png, info);
    if (header_only) {
        png_destroy_read_struct(&png, &info, nullptr);
        return result;
    }

    // Normalize palettes and sub-byte grays so callers only see 8/16-bit
    // samples with the raw channel count.
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (result.bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);
    result.bit_depth = png_get_bit_depth(png, info);
    result.channels = png_get_channels(png, info);

    const std::size_t stride = png_get_rowbytes(png, info);
    result.rows.resize(stride * result.height);
    row_ptrs.resize(result.height);
    for (int y = 0; y < result.height; ++y) row_ptrs[y] = result.rows.data() + stride * y;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return result;
}

std::vector<std::uint8_t> encode(int width, int height, int bit_depth, int color_type,
                                 const std::uint8_t* rows, std::size_t stride) {
    if (width < 1 || height < 1) throw ParameterError("png encode: empty image");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    std::vector<std::uint8_t> out;
    std::vector<png_bytep> row_ptrs(height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encode failed");
    }
    png_set_write_fn(png, &out, write_callback, flush_callback);
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y)
        row_ptrs[y] = const_cast<png_bytep>(rows + stride * y);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

}  // namespace

std::vector<std::uint8_t> encode_gray8(const Gray8& img) {
    if (img.pixels.size() != static_cast<std::size_t>(img.width) * img.height)
        throw ParameterError("png encode: pixel buffer size mismatch");
    return encode(img.width, img.height, 8, PNG_COLOR_TYPE_GRAY, img.pixels.data(),
                  static_cast<std::size_t>(img.width));
}

std::vector<std::uint8_t> encode_rgb8(const Rgb8& img) {
    if (img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * 3)
        throw ParameterError("png encode: pixel buffer size mismatch");
    return encode(img.width, img.height, 8, PNG_COLOR_TYPE_RGB, img.pixels.data(),
                  static_cast<std::size_t>(img.width) * 3);
}

std::vector<std::uint8_t> encode_rgb16(const Rgb16& img) {
    if (img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * 3)
        throw ParameterError("png encode: pixel buffer size mismatch");
    // 16-bit PNG samples are big-endian on the wire.
    std::vector<std::uint8_t> rows(img.pixels.size() * 2);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        rows[2 * i] = static_cast<std::uint8_t>(img.pixels[i] >> 8);
        rows[2 * i + 1] = static_cast<std::uint8_t>(img.pixels[i] & 0xff);
    }
    return encode(img.width, img.height, 16, PNG_COLOR_TYPE_RGB, rows.data(),
                  static_cast<std::size_t>(img.width) * 6);
}

Gray8 decode_gray8(const std::vector<std::uint8_t>& bytes) {
    Decoded d = decode(bytes);
    if (d.bit_depth != 8 || d.channels != 1)
        throw FormatError("expected an 8-bit single-channel PNG");
    Gray8 img;
    img.width = d.width;
    img.height = d.height;
    img.pixels = std::move(d.rows);
    return img;
}

Rgb8 decode_rgb8(const std::vector<std::uint8_t>& bytes) {
    Decoded d = decode(bytes);
    if (d.bit_depth != 8 || d.channels != 3)
        throw FormatError("expected an 8-bit RGB PNG");
    Rgb8 img;
    img.width = d.width;
    img.height = d.height;
    img.pixels = std::move(d.rows);
    return img;
}

Rgb16 decode_rgb16(const std::vector<std::uint8_t>& bytes) {
    Decoded d = decode(bytes);
    if (d.bit_depth != 16 || d.channels != 3)
        throw FormatError("expected a 16-bit RGB PNG");
    Rgb16 img;
    img.width = d.width;
    img.height = d.height;
    img.pixels.resize(static_cast<std::size_t>(d.width) * d.height * 3);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        img.pixels[i] = static_cast<std::uint16_t>((d.rows[2 * i] << 8) | d.rows[2 * i + 1]);
    return img;
}

PngInfo probe(const std::vector<std::uint8_t>& bytes) {
    Decoded d = decode(bytes, /*header_only=*/true);
    return {d.width, d.height, d.bit_depth, d.channels};
}

}  // namespace egoflow::png

namespace egoflow {

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path);
    return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace egoflow
