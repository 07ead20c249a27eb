// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/core/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "matforge/core/error.hpp"

namespace matforge {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
    return f;
}

// Decoded PNG rows: 1 or 3 channels, 8 or 16 bits, host order.
struct RawPng {
    int width = 0, height = 0, channels = 0, bit_depth = 8;
    std::vector<unsigned char> bytes;
};

void png_error_fn(png_structp png, png_const_charp msg) {
    auto* out = static_cast<std::string*>(png_get_error_ptr(png));
    if (out) *out = msg;
    png_longjmp(png, 1);
}
void png_warning_fn(png_structp, png_const_charp) {}

RawPng read_raw_png(const std::filesystem::path& path) {
    FilePtr file = open_file(path, "rb");
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw IoError("not a PNG file: " + path.string());

    std::string message;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_error_fn, png_warning_fn);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    RawPng raw;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("PNG decode failed for " + path.string() + ": " + message);
    }
    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    png_set_expand(png);
    png_set_strip_alpha(png);
    if (png_get_bit_depth(png, info) == 16) png_set_swap(png);
    png_read_update_info(png, info);

    raw.width = static_cast<int>(png_get_image_width(png, info));
    raw.height = static_cast<int>(png_get_image_height(png, info));
    raw.channels = png_get_channels(png, info);
    raw.bit_depth = png_get_bit_depth(png, info);
    std::size_t rowbytes = png_get_rowbytes(png, info);
    raw.bytes.resize(rowbytes * static_cast<std::size_t>(raw.height));
    rows.resize(static_cast<std::size_t>(raw.height));
    for (int y = 0; y < raw.height; ++y) rows[static_cast<std::size_t>(y)] = raw.bytes.data() + rowbytes * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if (raw.channels != 1 && raw.channels != 3)
        throw IoError("unsupported PNG channel layout in " + path.string());
    return raw;
}

}  // namespace

FloatImage read_png(const std::filesystem::path& path) {
    RawPng raw = read_raw_png(path);
    FloatImage img(raw.width, raw.height, raw.channels);
    if (raw.bit_depth == 16) {
        const auto* p = reinterpret_cast<const std::uint16_t*>(raw.bytes.data());
        for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = p[i] / 65535.0f;
    } else {
        for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = raw.bytes[i] / 255.0f;
    }
    return img;
}

Image8 read_png8(const std::filesystem::path& path) {
    RawPng raw = read_raw_png(path);
    Image8 img(raw.width, raw.height, raw.channels);
    if (raw.bit_depth == 16) {
        const auto* p = reinterpret_cast<const std::uint16_t*>(raw.bytes.data());
        for (std::size_t i = 0; i < img.data.size(); ++i)
            img.data[i] = static_cast<std::uint8_t>((p[i] * 255u + 32767u) / 65535u);
    } else {
        std::copy(raw.bytes.begin(), raw.bytes.begin() + static_cast<std::ptrdiff_t>(img.data.size()), img.data.begin());
    }
    return img;
}

void write_png(const std::filesystem::path& path, const Image8& image) {
    if (image.channels != 1 && image.channels != 3) throw InvalidArgument("write_png: need 1 or 3 channels");
    FilePtr file = open_file(path, "wb");
    std::string message;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_error_fn, png_warning_fn);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encode failed for " + path.string() + ": " + message);
    }
    png_init_io(png, file.get());
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
    for (int y = 0; y < image.height; ++y)
        png_write_row(png, const_cast<png_bytep>(image.data.data() + stride * static_cast<std::size_t>(y)));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fflush(file.get()) != 0) throw IoError("write failed: " + path.string());
}

void write_png(const std::filesystem::path& path, const Mask& mask) {
    Image8 img(mask.width, mask.height, 1);
    for (std::size_t i = 0; i < mask.data.size(); ++i) img.data[i] = mask.data[i] ? 255 : 0;
    write_png(path, img);
}

Mask read_mask(const std::filesystem::path& path) {
    Image8 img = read_png8(path);
    Mask m(img.width, img.height);
    for (std::size_t i = 0; i < m.data.size(); ++i)
        m.data[i] = img.data[i * static_cast<std::size_t>(img.channels)] > 127 ? 1 : 0;
    return m;
}

// ---------------------------------------------------------------------------
// Radiance RGBE

namespace {

void rgbe_from_float(const float* rgb, unsigned char out[4]) {
    float v = std::max({rgb[0], rgb[1], rgb[2]});
    if (!(v > 1e-32f)) {
        out[0] = out[1] = out[2] = out[3] = 0;
        return;
    }
    int e;
    float m = std::frexp(v, &e) * 256.0f / v;
    for (int c = 0; c < 3; ++c) out[c] = static_cast<unsigned char>(std::max(0.0f, rgb[c]) * m);
    out[3] = static_cast<unsigned char>(e + 128);
}

void float_from_rgbe(const unsigned char in[4], float* rgb) {
    if (in[3] == 0) {
        rgb[0] = rgb[1] = rgb[2] = 0;
        return;
    }
    float f = std::ldexp(1.0f, in[3] - (128 + 8));
    for (int c = 0; c < 3; ++c) rgb[c] = (in[c] + 0.5f) * f;
}

}  // namespace

FloatImage read_hdr(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (line.rfind("#?", 0) != 0) throw IoError("not a Radiance file: " + path.string());
    bool rgbe = false;
    while (std::getline(in, line) && !line.empty()) {
        if (line == "FORMAT=32-bit_rle_rgbe") rgbe = true;
    }
    if (!rgbe) throw IoError("unsupported Radiance format in " + path.string());
    std::getline(in, line);
    int width = 0, height = 0;
    char ya[3] = {}, xa[3] = {};
    if (std::sscanf(line.c_str(), "%2s %d %2s %d", ya, &height, xa, &width) != 4 || std::string(ya) != "-Y" ||
        std::string(xa) != "+X" || width <= 0 || height <= 0)
        throw IoError("unsupported Radiance resolution line in " + path.string());

    FloatImage img(width, height, 3);
    std::vector<unsigned char> scan(static_cast<std::size_t>(width) * 4);
    auto get = [&]() -> unsigned char {
        int c = in.get();
        if (c == EOF) throw IoError("truncated Radiance file: " + path.string());
        return static_cast<unsigned char>(c);
    };
    for (int y = 0; y < height; ++y) {
        unsigned char head[4] = {get(), get(), get(), get()};
        bool rle = width >= 8 && width < 32768 && head[0] == 2 && head[1] == 2 && !(head[2] & 0x80) &&
                   ((head[2] << 8) | head[3]) == width;
        if (rle) {
            for (int c = 0; c < 4; ++c) {
                int x = 0;
                while (x < width) {
                    unsigned char count = get();
                    if (count > 128) {
                        count = static_cast<unsigned char>(count - 128);
                        if (x + count > width) throw IoError("corrupt RLE in " + path.string());
                        unsigned char v = get();
                        for (int k = 0; k < count; ++k) scan[static_cast<std::size_t>(x++) * 4 + c] = v;
                    } else {
                        if (count == 0 || x + count > width) throw IoError("corrupt RLE in " + path.string());
                        for (int k = 0; k < count; ++k) scan[static_cast<std::size_t>(x++) * 4 + c] = get();
                    }
                }
            }
        } else {
            std::memcpy(scan.data(), head, 4);
            for (std::size_t i = 4; i < scan.size(); ++i) scan[i] = get();
        }
        for (int x = 0; x < width; ++x) float_from_rgbe(&scan[static_cast<std::size_t>(x) * 4], &img.data[img.index(x, y)]);
    }
    return img;
}

void write_hdr(const std::filesystem::path& path, const FloatImage& image) {
    if (image.channels != 3) throw InvalidArgument("write_hdr: need 3 channels");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string());
    out << "#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y " << image.height << " +X " << image.width << "\n";
    const int w = image.width;
    std::vector<unsigned char> scan(static_cast<std::size_t>(w) * 4);
    std::vector<unsigned char> buf;
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < w; ++x) rgbe_from_float(&image.data[image.index(x, y)], &scan[static_cast<std::size_t>(x) * 4]);
        if (w < 8 || w >= 32768) {
            out.write(reinterpret_cast<const char*>(scan.data()), static_cast<std::streamsize>(scan.size()));
            continue;
        }
        buf.clear();
        buf.insert(buf.end(), {2, 2, static_cast<unsigned char>(w >> 8), static_cast<unsigned char>(w & 0xFF)});
        for (int c = 0; c < 4; ++c) {
            auto at = [&](int x) { return scan[static_cast<std::size_t>(x) * 4 + c]; };
            int x = 0;
            while (x < w) {
                int run = 1;
                while (x + run < w && run < 127 && at(x + run) == at(x)) ++run;
                if (run >= 3) {
                    buf.push_back(static_cast<unsigned char>(128 + run));
                    buf.push_back(at(x));
                    x += run;
                    continue;
                }
                int start = x;
                int len = 0;
                while (x < w && len < 128) {
                    if (x + 2 < w && at(x) == at(x + 1) && at(x) == at(x + 2)) break;
                    ++x;
                    ++len;
                }
                buf.push_back(static_cast<unsigned char>(len));
                for (int k = start; k < start + len; ++k) buf.push_back(at(k));
            }
        }
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    }
    if (!out) throw IoError("write failed: " + path.string());
}

float srgb_to_linear(float v) {
    return v <= 0.04045f ? v / 12.92f : std::pow((v + 0.055f) / 1.055f, 2.4f);
}

float linear_to_srgb(float v) {
    return v <= 0.0031308f ? v * 12.92f : 1.055f * std::pow(v, 1.0f / 2.4f) - 0.055f;
}

}  // namespace matforge
