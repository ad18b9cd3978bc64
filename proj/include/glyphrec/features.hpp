#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <string>
#include <vector>

#include "glyphrec/contour.hpp"
#include "glyphrec/error.hpp"
#include "glyphrec/image.hpp"
#include "glyphrec/thinning.hpp"

namespace glyphrec {

enum class Family : int { Shadow = 0, Intersection = 1, LineFit = 2, ChainCode = 3 };

inline constexpr int kFamilyCount = 4;
inline constexpr std::array<Family, kFamilyCount> kAllFamilies = {
    Family::Shadow, Family::Intersection, Family::LineFit, Family::ChainCode};

inline constexpr std::size_t family_length(Family f) {
    switch (f) {
        case Family::Shadow: return 16;
        case Family::Intersection: return 32;
        case Family::LineFit: return 48;
        case Family::ChainCode: return 200;
    }
    return 0;
}

inline const char* family_name(Family f) {
    switch (f) {
        case Family::Shadow: return "shadow";
        case Family::Intersection: return "intersection";
        case Family::LineFit: return "linefit";
        case Family::ChainCode: return "chaincode";
    }
    return "?";
}

/// Fixed-length feature vector tagged with the extractor that produced it.
struct FeatureVector {
    Family family = Family::Shadow;
    std::vector<double> values;

    FeatureVector() = default;
    explicit FeatureVector(Family f) : family(f), values(family_length(f), 0.0) {}
    FeatureVector(Family f, std::vector<double> v) : family(f), values(std::move(v)) {
        if (values.size() != family_length(f))
            throw DimensionMismatch("feature vector length does not match its family");
    }
};

using FeatureBundle = std::array<FeatureVector, kFamilyCount>;

/// Regular partition of the canonical canvas into equal cells.
struct SegmentGrid {
    int rows = 0;
    int cols = 0;
    int cell_height = 0;
    int cell_width = 0;

    SegmentGrid(int rows_, int cols_) : rows(rows_), cols(cols_) {
        if (rows < 1 || cols < 1 || kCanvasSize % rows != 0 || kCanvasSize % cols != 0)
            throw Error("BadGrid", "grid must evenly divide the canvas");
        cell_height = kCanvasSize / rows;
        cell_width = kCanvasSize / cols;
    }

    static SegmentGrid skeleton4x4() { return SegmentGrid(4, 4); }
    static SegmentGrid contour5x5() { return SegmentGrid(5, 5); }

    int cell_index(int row, int col) const { return (row / cell_height) * cols + col / cell_width; }
};

// ---------------------------------------------------------------------------
// Shadow features
// ---------------------------------------------------------------------------

namespace detail {

// The canvas is cut by its two diagonals and the two midlines into eight
// triangular octants, numbered clockwise on screen starting from the upper
// half of the top-left quadrant. Each octant projects onto two perpendicular
// sides of length 50: a half-edge of the canvas boundary and a half-midline.
// Working in doubled pixel-center coordinates (X = 2*col + 1, Y = 2*row + 1,
// center at 100) keeps the membership tests exact. Pixels centered on a
// diagonal belong to both octants that share it, so a fully inked canvas
// saturates every projection.
struct OctantSide {
    bool project_columns;  // true: covered cells are column indices, else rows
    int origin;            // first covered cell index of the 50-cell side
};

struct Octant {
    OctantSide edge;     // half-edge of the canvas boundary
    OctantSide midline;  // half-midline through the canvas center
};

inline constexpr std::array<Octant, 8> kOctants = {{
    {{true, 0}, {false, 0}},    // 0: top-left quadrant, upper triangle
    {{true, 50}, {false, 0}},   // 1: top-right quadrant, upper triangle
    {{false, 0}, {true, 50}},   // 2: top-right quadrant, lower triangle
    {{false, 50}, {true, 50}},  // 3: bottom-right quadrant, upper triangle
    {{true, 50}, {false, 50}},  // 4: bottom-right quadrant, lower triangle
    {{true, 0}, {false, 50}},   // 5: bottom-left quadrant, lower triangle
    {{false, 50}, {true, 0}},   // 6: bottom-left quadrant, upper triangle
    {{false, 0}, {true, 0}},    // 7: top-left quadrant, lower triangle
}};

/// Octant membership of the pixel at (row, col); one entry normally,
/// two when the pixel center lies on a diagonal.
inline int octants_of_pixel(int row, int col, std::array<int, 2>& out) {
    const int x = 2 * col + 1, y = 2 * row + 1;  // doubled coords, center=100
    int n = 0;
    if (y <= x && x <= 100 && y <= 100) out[n++] = 0;
    if (x >= 100 && x + y <= 200 && y <= 100) out[n++] = 1;
    if (x + y >= 200 && y <= 100 && x >= 100) out[n++] = 2;
    if (y >= 100 && x >= y && x >= 100) out[n++] = 3;
    if (x >= 100 && y >= x && y >= 100) out[n++] = 4;
    if (x <= 100 && x + y >= 200 && y >= 100) out[n++] = 5;
    if (x + y <= 200 && y >= 100 && x <= 100) out[n++] = 6;
    if (y <= 100 && x <= y && x <= 100) out[n++] = 7;
    return n;
}

}  // namespace detail

/// Sixteen values in [0, 1]: for each octant, the fraction of its two
/// reference sides covered by the projections of the octant's foreground
/// pixels (boundary edge first, then midline).
inline FeatureVector shadow_features(const BinaryImage& img) {
    if (img.width() != kCanvasSize || img.height() != kCanvasSize)
        throw DimensionMismatch("shadow features expect the canonical canvas");
    std::array<std::array<std::bitset<50>, 2>, 8> covered{};
    std::array<int, 2> octs{};
    for (int r = 0; r < kCanvasSize; ++r) {
        for (int c = 0; c < kCanvasSize; ++c) {
            if (!img.at(r, c)) continue;
            const int n = detail::octants_of_pixel(r, c, octs);
            for (int i = 0; i < n; ++i) {
                const detail::Octant& oct = detail::kOctants[static_cast<std::size_t>(octs[i])];
                const detail::OctantSide sides[2] = {oct.edge, oct.midline};
                for (int s = 0; s < 2; ++s) {
                    const int cell = (sides[s].project_columns ? c : r) - sides[s].origin;
                    covered[static_cast<std::size_t>(octs[i])][static_cast<std::size_t>(s)].set(
                        static_cast<std::size_t>(cell));
                }
            }
        }
    }
    FeatureVector out(Family::Shadow);
    for (int o = 0; o < 8; ++o)
        for (int s = 0; s < 2; ++s)
            out.values[static_cast<std::size_t>(2 * o + s)] =
                static_cast<double>(covered[static_cast<std::size_t>(o)][static_cast<std::size_t>(s)].count()) / 50.0;
    return out;
}

// ---------------------------------------------------------------------------
// Chain code histogram
// ---------------------------------------------------------------------------

/// Per-block direction histogram over a 5x5 partition of the canvas. Every
/// chain step is attributed to the block containing the step's source pixel;
/// feature index = 8 * block + direction code. Values are raw counts.
inline FeatureVector chain_code_histogram(const std::vector<ContourChain>& chains,
                                          const SegmentGrid& grid) {
    if (grid.rows != 5 || grid.cols != 5)
        throw DimensionMismatch("chain code histogram expects a 5x5 grid");
    FeatureVector out(Family::ChainCode);
    for (const ContourChain& chain : chains) {
        Pixel cur = chain.start;
        for (std::uint8_t code : chain.codes) {
            const int block = grid.cell_index(cur.row, cur.col);
            out.values[static_cast<std::size_t>(8 * block + code)] += 1.0;
            cur = {cur.row + kFreemanDelta[code].first, cur.col + kFreemanDelta[code].second};
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Open ends and junctions
// ---------------------------------------------------------------------------

/// Per-segment counts over a 4x4 partition of the skeleton: features 0..15
/// count open ends (exactly one foreground 8-neighbor), features 16..31
/// count junctions (more than two), both row-major.
inline FeatureVector intersection_features(const Skeleton& sk, const SegmentGrid& grid) {
    if (grid.rows != 4 || grid.cols != 4)
        throw DimensionMismatch("intersection features expect a 4x4 grid");
    const BinaryImage& img = sk.image;
    if (img.width() != kCanvasSize || img.height() != kCanvasSize)
        throw DimensionMismatch("intersection features expect the canonical canvas");
    FeatureVector out(Family::Intersection);
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (!img.at(r, c)) continue;
            const int n = img.count_neighbors8(r, c);
            const int seg = grid.cell_index(r, c);
            if (n == 1) out.values[static_cast<std::size_t>(seg)] += 1.0;
            else if (n > 2) out.values[static_cast<std::size_t>(16 + seg)] += 1.0;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Straight line fitting
// ---------------------------------------------------------------------------

/// Least-squares line fit of one segment's pixels, in segment-local
/// coordinates (x = column, y = row, origin at the segment's top-left).
/// The slope is reported through the doubled-angle point
/// (orientation_sin, orientation_cos) = (2b, 1 - b^2) / (1 + b^2), which is
/// continuous across the vertical where the raw slope flips sign; a vertical
/// fit maps to (0, -1). Segments with fewer than two pixels carry the
/// off-circle sentinel (0, 0) and a zero intercept.
struct SegmentLineFit {
    double intercept = 0.0;
    double orientation_sin = 0.0;
    double orientation_cos = 0.0;
    std::size_t point_count = 0;
};

inline SegmentLineFit line_fit_segment(const std::vector<Pixel>& points) {
    SegmentLineFit fit;
    fit.point_count = points.size();
    if (points.size() < 2) return fit;

    double sx = 0.0, sy = 0.0, sxy = 0.0, sxx = 0.0;
    const double n = static_cast<double>(points.size());
    for (const Pixel& p : points) {
        const double x = p.col, y = p.row;
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        // All points share one column: a vertical line through it.
        fit.intercept = points.front().col;
        fit.orientation_sin = 0.0;
        fit.orientation_cos = -1.0;
        return fit;
    }
    const double slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sxy * sx - sxx * sy) / (sx * sx - n * sxx);
    fit.orientation_sin = 2.0 * slope / (1.0 + slope * slope);
    fit.orientation_cos = (1.0 - slope * slope) / (1.0 + slope * slope);
    return fit;
}

/// 48 values over a 4x4 partition of the skeleton: 0..15 intercepts,
/// 16..31 orientation sines, 32..47 orientation cosines, all row-major.
inline FeatureVector line_fitting_features(const Skeleton& sk, const SegmentGrid& grid) {
    if (grid.rows != 4 || grid.cols != 4)
        throw DimensionMismatch("line fitting features expect a 4x4 grid");
    const BinaryImage& img = sk.image;
    if (img.width() != kCanvasSize || img.height() != kCanvasSize)
        throw DimensionMismatch("line fitting features expect the canonical canvas");
    FeatureVector out(Family::LineFit);
    for (int gr = 0; gr < grid.rows; ++gr) {
        for (int gc = 0; gc < grid.cols; ++gc) {
            std::vector<Pixel> local;
            for (int r = 0; r < grid.cell_height; ++r)
                for (int c = 0; c < grid.cell_width; ++c)
                    if (img.at(gr * grid.cell_height + r, gc * grid.cell_width + c))
                        local.push_back({r, c});
            const SegmentLineFit fit = line_fit_segment(local);
            const std::size_t seg = static_cast<std::size_t>(gr * grid.cols + gc);
            out.values[seg] = fit.intercept;
            out.values[16 + seg] = fit.orientation_sin;
            out.values[32 + seg] = fit.orientation_cos;
        }
    }
    return out;
}

}  // namespace glyphrec
