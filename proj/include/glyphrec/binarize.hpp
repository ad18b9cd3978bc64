#pragma once

#include <cmath>
#include <cstdint>

#include "glyphrec/image.hpp"

namespace glyphrec {

struct BinarizeResult {
    BinaryImage image;   ///< true = foreground (ink, the darker side)
    double threshold = 0.0;
    int iterations = 0;
};

/// Iterative threshold selection. Starting from T = 128, pixels below T are
/// foreground and pixels at or above T are background; the new threshold is
/// the mean of the two class means. Iteration stops once the relative change
/// |T' - T| / max(T, 1) drops below 2%. An empty class contributes the
/// current threshold as its mean, which drives T towards the occupied side.
inline BinarizeResult binarize_dynamic_threshold(const GrayImage& img) {
    double threshold = 128.0;
    int iterations = 0;
    for (int guard = 0; guard < 4096; ++guard) {
        double fg_sum = 0.0, bg_sum = 0.0;
        std::size_t fg_n = 0, bg_n = 0;
        for (std::uint8_t p : img.pixels()) {
            if (p < threshold) {
                fg_sum += p;
                ++fg_n;
            } else {
                bg_sum += p;
                ++bg_n;
            }
        }
        const double fg_mean = fg_n ? fg_sum / static_cast<double>(fg_n) : threshold;
        const double bg_mean = bg_n ? bg_sum / static_cast<double>(bg_n) : threshold;
        const double next = (fg_mean + bg_mean) / 2.0;
        const double rel = std::abs(next - threshold) / std::max(threshold, 1.0);
        threshold = next;
        ++iterations;
        if (rel < 0.02) break;
    }

    BinaryImage out(img.width(), img.height());
    std::size_t fg = 0;
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const bool ink = img.at(r, c) < threshold;
            out.set(r, c, ink);
            if (ink) ++fg;
        }
    }
    if (fg == 0) throw NoForeground("converged threshold leaves no foreground pixel");
    return BinarizeResult{std::move(out), threshold, iterations};
}

}  // namespace glyphrec
