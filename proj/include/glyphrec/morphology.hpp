#pragma once

#include "glyphrec/image.hpp"

namespace glyphrec {

/// Dilation with a 3x3 square structuring element; outside the image counts
/// as background.
inline BinaryImage dilate3(const BinaryImage& img) {
    BinaryImage out(img.width(), img.height());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            bool fg = false;
            for (int dr = -1; dr <= 1 && !fg; ++dr)
                for (int dc = -1; dc <= 1 && !fg; ++dc) fg = img.at_or_bg(r + dr, c + dc);
            out.set(r, c, fg);
        }
    }
    return out;
}

/// Erosion with a 3x3 square structuring element; outside the image counts
/// as background, so border pixels never survive.
inline BinaryImage erode3(const BinaryImage& img) {
    BinaryImage out(img.width(), img.height());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            bool fg = true;
            for (int dr = -1; dr <= 1 && fg; ++dr)
                for (int dc = -1; dc <= 1 && fg; ++dc) fg = img.at_or_bg(r + dr, c + dc);
            out.set(r, c, fg);
        }
    }
    return out;
}

inline BinaryImage close3(const BinaryImage& img) { return erode3(dilate3(img)); }

/// Smoothing applied to the scaled canvas: one closing pass followed by one
/// dilation, both 3x3.
inline BinaryImage morph_cleanup(const BinaryImage& img) { return dilate3(close3(img)); }

}  // namespace glyphrec
