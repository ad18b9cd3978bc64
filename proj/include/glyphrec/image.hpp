#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "glyphrec/error.hpp"

namespace glyphrec {

/// Side length of the canonical canvas every character is scaled to.
inline constexpr int kCanvasSize = 100;

struct Pixel {
    int row = 0;
    int col = 0;
    bool operator==(const Pixel&) const = default;
};

/// 8-bit grayscale raster, row-major.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, std::uint8_t fill = 0)
        : width_(width), height_(height),
          pixels_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
        if (width < 1 || height < 1) throw Error("BadImage", "dimensions must be >= 1");
    }

    int width() const { return width_; }
    int height() const { return height_; }

    std::uint8_t at(int row, int col) const {
        return pixels_[static_cast<std::size_t>(row) * width_ + col];
    }
    void set(int row, int col, std::uint8_t value) {
        pixels_[static_cast<std::size_t>(row) * width_ + col] = value;
    }

    const std::vector<std::uint8_t>& pixels() const { return pixels_; }
    std::vector<std::uint8_t>& pixels() { return pixels_; }

    bool operator==(const GrayImage&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Binary raster, row-major; nonzero means foreground (ink).
class BinaryImage {
public:
    BinaryImage() = default;
    BinaryImage(int width, int height, bool fill = false)
        : width_(width), height_(height),
          pixels_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                  fill ? std::uint8_t{1} : std::uint8_t{0}) {
        if (width < 1 || height < 1) throw Error("BadImage", "dimensions must be >= 1");
    }

    int width() const { return width_; }
    int height() const { return height_; }

    bool at(int row, int col) const {
        return pixels_[static_cast<std::size_t>(row) * width_ + col] != 0;
    }
    /// Out-of-range coordinates read as background.
    bool at_or_bg(int row, int col) const {
        if (row < 0 || row >= height_ || col < 0 || col >= width_) return false;
        return at(row, col);
    }
    void set(int row, int col, bool value) {
        pixels_[static_cast<std::size_t>(row) * width_ + col] = value ? 1 : 0;
    }

    std::size_t foreground_count() const {
        return static_cast<std::size_t>(std::count_if(pixels_.begin(), pixels_.end(),
                                                      [](std::uint8_t p) { return p != 0; }));
    }

    int count_neighbors8(int row, int col) const {
        int n = 0;
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc)
                if ((dr != 0 || dc != 0) && at_or_bg(row + dr, col + dc)) ++n;
        return n;
    }

    const std::vector<std::uint8_t>& pixels() const { return pixels_; }
    std::vector<std::uint8_t>& pixels() { return pixels_; }

    bool operator==(const BinaryImage&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Axis-aligned rectangle in pixel coordinates.
struct Rect {
    int left = 0;
    int top = 0;
    int width = 0;
    int height = 0;
    bool operator==(const Rect&) const = default;
};

/// Smallest rectangle containing every foreground pixel.
inline Rect tight_bounding_box(const BinaryImage& img) {
    int rmin = img.height(), rmax = -1, cmin = img.width(), cmax = -1;
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (!img.at(r, c)) continue;
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
            cmin = std::min(cmin, c);
            cmax = std::max(cmax, c);
        }
    }
    if (rmax < 0) throw NoForeground("image has no foreground pixel");
    return Rect{cmin, rmin, cmax - cmin + 1, rmax - rmin + 1};
}

/// Crops `img` to `box` and stretches it onto the canonical canvas.
/// Each canvas pixel reads the half-open source window
/// [floor(i*n/100), floor((i+1)*n/100)) along each axis, widened to at least
/// one source pixel; the pixel is foreground if any window pixel is. When the
/// box is smaller than the canvas this is plain nearest-neighbor replication;
/// when it is larger the windows tile the box, so no foreground is dropped.
inline BinaryImage scale_to_canvas(const BinaryImage& img, const Rect& box) {
    if (box.width < 1 || box.height < 1 || box.left < 0 || box.top < 0 ||
        box.left + box.width > img.width() || box.top + box.height > img.height()) {
        throw Error("BadRect", "box does not lie inside the image");
    }
    BinaryImage out(kCanvasSize, kCanvasSize);
    for (int r = 0; r < kCanvasSize; ++r) {
        const int r0 = box.top + static_cast<int>(static_cast<std::int64_t>(r) * box.height / kCanvasSize);
        const int r1 = std::max(
            box.top + static_cast<int>(static_cast<std::int64_t>(r + 1) * box.height / kCanvasSize), r0 + 1);
        for (int c = 0; c < kCanvasSize; ++c) {
            const int c0 = box.left + static_cast<int>(static_cast<std::int64_t>(c) * box.width / kCanvasSize);
            const int c1 = std::max(
                box.left + static_cast<int>(static_cast<std::int64_t>(c + 1) * box.width / kCanvasSize), c0 + 1);
            bool fg = false;
            for (int rr = r0; rr < r1 && !fg; ++rr)
                for (int cc = c0; cc < c1 && !fg; ++cc) fg = img.at(rr, cc);
            out.set(r, c, fg);
        }
    }
    return out;
}

/// Labels 8-connected foreground components; background gets -1.
/// Returns the label raster and the component count.
inline std::pair<std::vector<int>, int> label_components8(const BinaryImage& img) {
    const int w = img.width(), h = img.height();
    std::vector<int> labels(static_cast<std::size_t>(w) * h, -1);
    std::vector<Pixel> stack;
    int next = 0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!img.at(r, c) || labels[static_cast<std::size_t>(r) * w + c] >= 0) continue;
            labels[static_cast<std::size_t>(r) * w + c] = next;
            stack.push_back({r, c});
            while (!stack.empty()) {
                const Pixel p = stack.back();
                stack.pop_back();
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int rr = p.row + dr, cc = p.col + dc;
                        if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
                        auto& l = labels[static_cast<std::size_t>(rr) * w + cc];
                        if (img.at(rr, cc) && l < 0) {
                            l = next;
                            stack.push_back({rr, cc});
                        }
                    }
                }
            }
            ++next;
        }
    }
    return {std::move(labels), next};
}

inline int count_components8(const BinaryImage& img) { return label_components8(img).second; }

}  // namespace glyphrec
