#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "glyphrec/image.hpp"

namespace glyphrec {

/// Direction codes: 0 = east, increasing counterclockwise in 45 degree
/// steps (1 NE, 2 N, 3 NW, 4 W, 5 SW, 6 S, 7 SE). Row offsets are negative
/// upwards because rows grow downwards.
inline constexpr std::array<std::pair<int, int>, 8> kFreemanDelta = {{
    {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}}};

inline constexpr int opposite_code(int code) { return (code + 4) % 8; }

/// One traced contour: a start pixel and the direction codes that walk it.
struct ContourChain {
    Pixel start;
    std::vector<std::uint8_t> codes;
    bool closed = false;
};

/// Pixel sequence visited when the chain is replayed from its start.
/// The start pixel is included; a closed chain ends on it again.
inline std::vector<Pixel> replay_chain(const ContourChain& chain) {
    std::vector<Pixel> pts;
    pts.reserve(chain.codes.size() + 1);
    Pixel cur = chain.start;
    pts.push_back(cur);
    for (std::uint8_t code : chain.codes) {
        cur = {cur.row + kFreemanDelta[code].first, cur.col + kFreemanDelta[code].second};
        pts.push_back(cur);
    }
    return pts;
}

/// Marks every foreground pixel that touches background through a 4-neighbor.
/// The image border counts as background.
inline BinaryImage extract_contour_mask(const BinaryImage& img) {
    BinaryImage out(img.width(), img.height());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (!img.at(r, c)) continue;
            const bool boundary = !img.at_or_bg(r - 1, c) || !img.at_or_bg(r + 1, c) ||
                                  !img.at_or_bg(r, c - 1) || !img.at_or_bg(r, c + 1);
            out.set(r, c, boundary);
        }
    }
    return out;
}

namespace detail {

/// Boundary walk around one mask component, clockwise. From the backtrack
/// direction (pointing at the previously visited pixel) the scan tries
/// directions in decreasing code order, which sweeps clockwise on screen;
/// the first foreground pixel found is the next step. The walk stops when
/// it stands on the start pixel and would repeat its first move.
inline ContourChain trace_component(const BinaryImage& mask, Pixel start) {
    ContourChain chain{start, {}, true};
    bool any_neighbor = false;
    for (const auto& [dr, dc] : kFreemanDelta)
        if (mask.at_or_bg(start.row + dr, start.col + dc)) any_neighbor = true;
    if (!any_neighbor) return chain;  // isolated pixel: empty closed chain

    Pixel cur = start;
    int backtrack = 4;  // pretend the walk arrived from the west
    int first_move = -1;
    // Each mask pixel is entered at most once per incoming direction, so the
    // walk length is bounded by 8 times the component size.
    const std::size_t guard_limit = 8 * mask.pixels().size() + 16;
    for (std::size_t guard = 0; guard < guard_limit; ++guard) {
        int move = -1;
        Pixel next;
        for (int i = 1; i <= 8; ++i) {
            const int code = (backtrack - i + 16) % 8;
            const Pixel cand{cur.row + kFreemanDelta[code].first,
                             cur.col + kFreemanDelta[code].second};
            if (mask.at_or_bg(cand.row, cand.col)) {
                move = code;
                next = cand;
                break;
            }
        }
        if (cur == start && first_move >= 0 && move == first_move) break;
        if (first_move < 0) first_move = move;
        chain.codes.push_back(static_cast<std::uint8_t>(move));
        backtrack = opposite_code(move);
        cur = next;
    }
    chain.closed = (cur == start);
    return chain;
}

}  // namespace detail

/// Traces every 8-connected component of a contour mask into one chain.
/// Tracing starts at the component's top-most then left-most pixel and
/// follows the component boundary clockwise.
inline std::vector<ContourChain> trace_chain_codes(const BinaryImage& mask) {
    const auto [labels, count] = label_components8(mask);
    std::vector<Pixel> starts(static_cast<std::size_t>(count), Pixel{-1, -1});
    for (int r = 0; r < mask.height(); ++r) {
        for (int c = 0; c < mask.width(); ++c) {
            const int l = labels[static_cast<std::size_t>(r) * mask.width() + c];
            if (l >= 0 && starts[static_cast<std::size_t>(l)].row < 0) starts[static_cast<std::size_t>(l)] = {r, c};
        }
    }
    std::vector<ContourChain> chains;
    chains.reserve(starts.size());
    for (const Pixel& start : starts) chains.push_back(detail::trace_component(mask, start));
    return chains;
}

}  // namespace glyphrec
