#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <png.h>

#include "glyphrec/error.hpp"
#include "glyphrec/image.hpp"

namespace glyphrec {

namespace detail {

inline int pgm_next_int(std::istream& in, const std::string& path) {
    // Skips whitespace and '#' comment lines between header tokens.
    while (true) {
        const int c = in.peek();
        if (c == EOF) throw UnreadableImage(path + ": truncated PGM header");
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        break;
    }
    int value = 0;
    if (!(in >> value)) throw UnreadableImage(path + ": malformed PGM header");
    return value;
}

}  // namespace detail

inline GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UnreadableImage(path.string() + ": cannot open");
    std::string magic(2, '\0');
    in.read(magic.data(), 2);
    if (magic != "P2" && magic != "P5") throw UnreadableImage(path.string() + ": not a P2/P5 PGM");
    const int width = detail::pgm_next_int(in, path.string());
    const int height = detail::pgm_next_int(in, path.string());
    const int maxval = detail::pgm_next_int(in, path.string());
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
        throw UnreadableImage(path.string() + ": bad PGM dimensions");

    GrayImage img(width, height);
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (magic == "P2") {
        for (std::size_t i = 0; i < n; ++i) {
            int v = 0;
            if (!(in >> v)) throw UnreadableImage(path.string() + ": truncated P2 data");
            img.pixels()[i] = static_cast<std::uint8_t>(v * 255 / maxval);
        }
    } else {
        in.get();  // single whitespace after maxval
        if (maxval < 256) {
            std::vector<char> buf(n);
            in.read(buf.data(), static_cast<std::streamsize>(n));
            if (static_cast<std::size_t>(in.gcount()) != n)
                throw UnreadableImage(path.string() + ": truncated P5 data");
            for (std::size_t i = 0; i < n; ++i)
                img.pixels()[i] = static_cast<std::uint8_t>(
                    static_cast<unsigned char>(buf[i]) * 255 / maxval);
        } else {
            std::vector<char> buf(2 * n);
            in.read(buf.data(), static_cast<std::streamsize>(2 * n));
            if (static_cast<std::size_t>(in.gcount()) != 2 * n)
                throw UnreadableImage(path.string() + ": truncated P5 data");
            for (std::size_t i = 0; i < n; ++i) {
                const int v = (static_cast<unsigned char>(buf[2 * i]) << 8) |
                              static_cast<unsigned char>(buf[2 * i + 1]);
                img.pixels()[i] = static_cast<std::uint8_t>(v * 255 / maxval);
            }
        }
    }
    return img;
}

inline void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("WriteFailed", path.string() + ": cannot open for writing");
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels().data()),
              static_cast<std::streamsize>(img.pixels().size()));
}

inline void write_pgm(const std::filesystem::path& path, const BinaryImage& img) {
    GrayImage gray(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixels().size(); ++i)
        gray.pixels()[i] = img.pixels()[i] ? 0 : 255;  // ink is dark
    write_pgm(path, gray);
}

inline GrayImage read_png(const std::filesystem::path& path) {
    std::FILE* fp = std::fopen(path.string().c_str(), "rb");
    if (!fp) throw UnreadableImage(path.string() + ": cannot open");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        std::fclose(fp);
        throw UnreadableImage(path.string() + ": libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw UnreadableImage(path.string() + ": PNG decode failed");
    }
    png_init_io(png, fp);
    png_read_info(png, info);

    // Normalize everything to 8-bit grayscale.
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    const auto color = png_get_color_type(png, info);
    if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
        color == PNG_COLOR_TYPE_PALETTE)
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    GrayImage img(width, height);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int r = 0; r < height; ++r)
        rows[static_cast<std::size_t>(r)] = img.pixels().data() + static_cast<std::size_t>(r) * width;
    png_read_image(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return img;
}

/// Reads a grayscale image, dispatching on the file's magic bytes.
inline GrayImage read_image(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw UnreadableImage(path.string() + ": cannot open");
    char magic[2] = {0, 0};
    probe.read(magic, 2);
    probe.close();
    if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) return read_pgm(path);
    if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') return read_png(path);
    throw UnreadableImage(path.string() + ": unsupported image format (PGM P2/P5 or PNG)");
}

}  // namespace glyphrec
