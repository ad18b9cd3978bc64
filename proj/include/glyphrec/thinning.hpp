#pragma once

#include <array>
#include <utility>
#include <vector>

#include "glyphrec/image.hpp"

namespace glyphrec {

/// One-pixel-wide skeleton of a binary image.
struct Skeleton {
    BinaryImage image;
};

namespace detail {

// Ring offsets in the order P2..P9 (N, NE, E, SE, S, SW, W, NW).
inline constexpr std::array<std::pair<int, int>, 8> kRing = {{
    {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}}};

inline std::array<int, 8> ring_bits(const BinaryImage& img, int r, int c) {
    std::array<int, 8> bits{};
    for (std::size_t i = 0; i < kRing.size(); ++i)
        bits[i] = img.at_or_bg(r + kRing[i].first, c + kRing[i].second) ? 1 : 0;
    return bits;
}

/// Number of 8-connected groups formed by the foreground ring cells,
/// using true grid adjacency (N and E are diagonal neighbors of each other,
/// so they connect even when NE is background).
inline int ring_component_count(const std::array<int, 8>& bits) {
    std::array<int, 8> group{};
    group.fill(-1);
    int groups = 0;
    for (int i = 0; i < 8; ++i) {
        if (bits[i] == 0 || group[i] >= 0) continue;
        group[i] = groups;
        std::array<int, 8> stack{};
        int top = 0;
        stack[top++] = i;
        while (top > 0) {
            const int a = stack[--top];
            for (int j = 0; j < 8; ++j) {
                if (bits[j] == 0 || group[j] >= 0) continue;
                const int dr = kRing[a].first - kRing[j].first;
                const int dc = kRing[a].second - kRing[j].second;
                if (dr >= -1 && dr <= 1 && dc >= -1 && dc <= 1) {
                    group[j] = groups;
                    stack[top++] = j;
                }
            }
        }
        ++groups;
    }
    return groups;
}

/// Deleting (r, c) keeps the local picture intact: the pixel is neither
/// isolated nor an end point, touches background through a side, and its
/// foreground neighbors stay one connected group without it.
inline bool deletion_is_safe(const BinaryImage& img, int r, int c) {
    const auto bits = ring_bits(img, r, c);
    int count = 0;
    for (int v : bits) count += v;
    if (count < 2) return false;
    const bool bg4 = !bits[0] || !bits[2] || !bits[4] || !bits[6];
    if (!bg4) return false;
    return ring_component_count(bits) == 1;
}

inline bool in_full_2x2_block(const BinaryImage& img, int r, int c) {
    for (int dr = -1; dr <= 0; ++dr) {
        for (int dc = -1; dc <= 0; ++dc) {
            if (img.at_or_bg(r + dr, c + dc) && img.at_or_bg(r + dr, c + dc + 1) &&
                img.at_or_bg(r + dr + 1, c + dc) && img.at_or_bg(r + dr + 1, c + dc + 1))
                return true;
        }
    }
    return false;
}

/// One subiteration: candidates are marked with the classic two-phase
/// neighborhood rules on the frozen image, then deleted one at a time,
/// each re-verified with deletion_is_safe against the current image. The
/// purely parallel variant can split a component or erase a small one
/// outright; the sequential commit step rules both out, and protects the
/// last pixels of a shrinking component as a side effect.
inline int thin_subiteration(BinaryImage& img, int phase) {
    std::vector<Pixel> candidates;
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (!img.at(r, c)) continue;
            const auto b = ring_bits(img, r, c);
            const int p2 = b[0], p4 = b[2], p6 = b[4], p8 = b[6];
            int count = 0, transitions = 0;
            for (int i = 0; i < 8; ++i) {
                count += b[i];
                if (b[i] == 0 && b[(i + 1) % 8] == 1) ++transitions;
            }
            if (count < 2 || count > 6 || transitions != 1) continue;
            const bool ok = phase == 0 ? (p2 * p4 * p6 == 0 && p4 * p6 * p8 == 0)
                                       : (p2 * p4 * p8 == 0 && p2 * p6 * p8 == 0);
            if (ok) candidates.push_back({r, c});
        }
    }
    int deleted = 0;
    for (const Pixel& p : candidates) {
        if (!deletion_is_safe(img, p.row, p.col)) continue;
        img.set(p.row, p.col, false);
        ++deleted;
    }
    return deleted;
}

/// Removes leftover thickness: any pixel that sits in a fully set 2x2 block
/// and can be safely deleted is dropped, sequentially, until none is left.
inline void remove_redundant_pixels(BinaryImage& img) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int r = 0; r < img.height(); ++r) {
            for (int c = 0; c < img.width(); ++c) {
                if (!img.at(r, c) || !in_full_2x2_block(img, r, c)) continue;
                if (!deletion_is_safe(img, r, c)) continue;
                img.set(r, c, false);
                changed = true;
            }
        }
    }
}

}  // namespace detail

/// Iterative two-subiteration thinning followed by a redundant-pixel pass
/// that clears remaining 2x2 thickness. Deletions are always verified to
/// preserve 8-connectivity, so the skeleton keeps the input's component
/// count.
inline Skeleton thin_to_skeleton(const BinaryImage& img) {
    BinaryImage work = img;
    while (detail::thin_subiteration(work, 0) + detail::thin_subiteration(work, 1) > 0) {
    }
    detail::remove_redundant_pixels(work);
    return Skeleton{std::move(work)};
}

}  // namespace glyphrec
