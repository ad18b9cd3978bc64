#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "glyphrec/image.hpp"
#include "glyphrec/io.hpp"
#include "glyphrec/rng.hpp"

namespace glyphrec {

/// Simple stroke-drawn glyph classes used for benchmarks and demos.
inline const std::array<std::string, 10>& glyph_class_names() {
    static const std::array<std::string, 10> names = {
        "00_hline", "01_vline", "02_diag", "03_plus", "04_ell",
        "05_tee",   "06_zee",   "07_ring", "08_loop", "09_cross"};
    return names;
}

namespace detail {

class GlyphCanvas {
public:
    explicit GlyphCanvas(int size) : size_(size), ink_(static_cast<std::size_t>(size) * size, 0) {}

    void stamp(int r, int c, int thickness) {
        const int lo = -(thickness / 2), hi = thickness / 2 + thickness % 2;
        for (int dr = lo; dr < hi; ++dr)
            for (int dc = lo; dc < hi; ++dc) {
                const int rr = r + dr, cc = c + dc;
                if (rr >= 0 && rr < size_ && cc >= 0 && cc < size_)
                    ink_[static_cast<std::size_t>(rr) * size_ + cc] = 1;
            }
    }

    void stroke(int r0, int c0, int r1, int c1, int thickness) {
        const int steps = std::max({std::abs(r1 - r0), std::abs(c1 - c0), 1});
        for (int s = 0; s <= steps; ++s) {
            const int r = r0 + static_cast<int>(std::lround(static_cast<double>(r1 - r0) * s / steps));
            const int c = c0 + static_cast<int>(std::lround(static_cast<double>(c1 - c0) * s / steps));
            stamp(r, c, thickness);
        }
    }

    void arc(int rc, int cc, double radius_r, double radius_c, int thickness) {
        for (int deg = 0; deg < 360; deg += 2) {
            const double a = deg * 3.14159265358979323846 / 180.0;
            stamp(rc + static_cast<int>(std::lround(radius_r * std::sin(a))),
                  cc + static_cast<int>(std::lround(radius_c * std::cos(a))), thickness);
        }
    }

    bool inked(int r, int c) const { return ink_[static_cast<std::size_t>(r) * size_ + c] != 0; }

private:
    int size_;
    std::vector<std::uint8_t> ink_;
};

}  // namespace detail

/// Renders one jittered grayscale glyph of the given class (0..9) on a
/// 64x64 page: bright noisy background, dark noisy ink, random position,
/// stroke length and thickness.
inline GrayImage render_glyph(int class_id, Rng& rng) {
    constexpr int kPage = 64;
    detail::GlyphCanvas canvas(kPage);

    const int t = rng.range(1, 3);
    const int cy = kPage / 2 + rng.range(-4, 4);
    const int cx = kPage / 2 + rng.range(-4, 4);
    const int h = rng.range(34, 49) / 2;

    switch (class_id) {
        case 0: canvas.stroke(cy, cx - h, cy, cx + h, t); break;
        case 1: canvas.stroke(cy - h, cx, cy + h, cx, t); break;
        case 2: canvas.stroke(cy - h, cx - h, cy + h, cx + h, t); break;
        case 3:
            canvas.stroke(cy, cx - h, cy, cx + h, t);
            canvas.stroke(cy - h, cx, cy + h, cx, t);
            break;
        case 4:
            canvas.stroke(cy - h, cx - h, cy + h, cx - h, t);
            canvas.stroke(cy + h, cx - h, cy + h, cx + h, t);
            break;
        case 5:
            canvas.stroke(cy - h, cx - h, cy - h, cx + h, t);
            canvas.stroke(cy - h, cx, cy + h, cx, t);
            break;
        case 6:
            canvas.stroke(cy - h, cx - h, cy - h, cx + h, t);
            canvas.stroke(cy - h, cx + h, cy + h, cx - h, t);
            canvas.stroke(cy + h, cx - h, cy + h, cx + h, t);
            break;
        case 7: canvas.arc(cy, cx, h, h, t); break;
        case 8:
            canvas.arc(cy, cx, h / 2.0, h, t);
            canvas.stroke(cy, cx + h, cy + h, cx + h, t);
            break;
        case 9:
            canvas.stroke(cy - h, cx - h, cy + h, cx + h, t);
            canvas.stroke(cy - h, cx + h, cy + h, cx - h, t);
            break;
        default: throw Error("BadConfig", "glyph class must be 0..9");
    }

    const double ink_level = rng.uniform(10.0, 60.0);
    GrayImage img(kPage, kPage);
    for (int r = 0; r < kPage; ++r) {
        for (int c = 0; c < kPage; ++c) {
            double v;
            if (canvas.inked(r, c)) {
                v = ink_level + rng.uniform(-12.0, 12.0);
            } else {
                v = 235.0 + rng.uniform(-10.0, 10.0);
            }
            img.set(r, c, static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0)));
        }
    }
    return img;
}

/// Writes `per_class` PGM samples of each glyph class under
/// `root/<class_name>/`, in the directory layout the dataset loader reads.
inline void write_synthetic_corpus(const std::filesystem::path& root, int per_class,
                                   std::uint64_t seed) {
    namespace fs = std::filesystem;
    for (int cls = 0; cls < static_cast<int>(glyph_class_names().size()); ++cls) {
        const fs::path dir = root / glyph_class_names()[static_cast<std::size_t>(cls)];
        fs::create_directories(dir);
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls), 0x9c));
        for (int i = 0; i < per_class; ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "%04d.pgm", i);
            write_pgm(dir / name, render_glyph(cls, rng));
        }
    }
}

}  // namespace glyphrec
