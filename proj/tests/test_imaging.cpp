#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "glyphrec/binarize.hpp"
#include "glyphrec/contour.hpp"
#include "glyphrec/image.hpp"
#include "glyphrec/io.hpp"
#include "glyphrec/morphology.hpp"
#include "glyphrec/thinning.hpp"
#include "support/oracles.hpp"
#include "support/png_fixtures.hpp"
#include "support/tempdir.hpp"

using namespace glyphrec;

namespace {

GrayImage gray_from(int width, int height, std::initializer_list<int> values) {
    GrayImage img(width, height);
    std::size_t i = 0;
    for (int v : values) img.pixels()[i++] = static_cast<std::uint8_t>(v);
    return img;
}

bool has_full_2x2_block(const BinaryImage& img) {
    for (int r = 0; r + 1 < img.height(); ++r)
        for (int c = 0; c + 1 < img.width(); ++c)
            if (img.at(r, c) && img.at(r, c + 1) && img.at(r + 1, c) && img.at(r + 1, c + 1))
                return true;
    return false;
}

}  // namespace

TEST_CASE("dynamic threshold binarization") {
    SECTION("two dark and two bright pixels converge in one step") {
        const auto res = binarize_dynamic_threshold(gray_from(2, 2, {0, 0, 255, 255}));
        REQUIRE(res.threshold == 127.5);
        REQUIRE(res.iterations == 1);
        REQUIRE(res.image.at(0, 0));
        REQUIRE(res.image.at(0, 1));
        REQUIRE_FALSE(res.image.at(1, 0));
        REQUIRE_FALSE(res.image.at(1, 1));
        const auto trace = oracles::iterate_threshold({0, 0, 255, 255});
        REQUIRE(trace.threshold == res.threshold);
    }

    SECTION("50/200 image needs a second pass that repartitions identically") {
        const auto res = binarize_dynamic_threshold(gray_from(2, 2, {50, 50, 200, 200}));
        REQUIRE(res.threshold == 125.0);
        REQUIRE(res.iterations == 2);
        REQUIRE(res.image.at(0, 0));
        REQUIRE_FALSE(res.image.at(1, 1));
    }

    SECTION("uniform bright image has no foreground") {
        REQUIRE_THROWS_AS(binarize_dynamic_threshold(GrayImage(4, 4, 255)), NoForeground);
    }

    SECTION("converges within 50 iterations on random images") {
        Rng rng(101);
        for (int i = 0; i < 250; ++i) {
            const GrayImage img = oracles::random_gray(rng);
            try {
                const auto res = binarize_dynamic_threshold(img);
                REQUIRE(res.iterations <= 50);
                const auto trace = oracles::iterate_threshold(img.pixels());
                REQUIRE(trace.threshold == Catch::Approx(res.threshold).margin(1e-12));
                for (int r = 0; r < img.height(); ++r)
                    for (int c = 0; c < img.width(); ++c)
                        REQUIRE(res.image.at(r, c) == (img.at(r, c) < res.threshold));
            } catch (const NoForeground&) {
                REQUIRE(oracles::iterate_threshold(img.pixels()).foreground_empty);
            }
        }
    }
}

TEST_CASE("tight bounding box") {
    SECTION("single pixel") {
        BinaryImage img(8, 8);
        img.set(4, 3, true);  // x=3, y=4
        REQUIRE(tight_bounding_box(img) == Rect{3, 4, 1, 1});
    }
    SECTION("two extreme pixels") {
        BinaryImage img(12, 8);
        img.set(0, 0, true);
        img.set(5, 9, true);  // x=9, y=5
        REQUIRE(tight_bounding_box(img) == Rect{0, 0, 10, 6});
    }
    SECTION("all background") {
        REQUIRE_THROWS_AS(tight_bounding_box(BinaryImage(5, 5)), NoForeground);
    }
}

TEST_CASE("scale to canvas") {
    SECTION("identity when the box already matches the canvas") {
        Rng rng(7);
        BinaryImage img(kCanvasSize, kCanvasSize);
        for (int i = 0; i < 500; ++i)
            img.set(rng.range(0, 99), rng.range(0, 99), true);
        const BinaryImage out = scale_to_canvas(img, Rect{0, 0, kCanvasSize, kCanvasSize});
        REQUIRE(out == img);
    }

    SECTION("a single-pixel box paints the whole canvas") {
        BinaryImage img(10, 10);
        img.set(4, 7, true);
        const BinaryImage out = scale_to_canvas(img, Rect{7, 4, 1, 1});
        REQUIRE(out.foreground_count() == static_cast<std::size_t>(kCanvasSize) * kCanvasSize);
    }

    SECTION("half-width box doubles a line at its left edge") {
        BinaryImage img(50, 100);
        for (int r = 0; r < 100; ++r) img.set(r, 0, true);
        const BinaryImage out = scale_to_canvas(img, Rect{0, 0, 50, 100});
        REQUIRE(out.width() == kCanvasSize);
        REQUIRE(out.height() == kCanvasSize);
        for (int r = 0; r < kCanvasSize; ++r) {
            REQUIRE(out.at(r, 0));
            REQUIRE(out.at(r, 1));
            REQUIRE_FALSE(out.at(r, 2));
        }
        REQUIRE(out.foreground_count() == 200);
    }

    SECTION("keeps at least one foreground pixel for any box with ink") {
        Rng rng(13);
        for (int i = 0; i < 200; ++i) {
            // Sparse images stress the shrink path where plain sampling
            // could step over isolated pixels.
            const int side = rng.range(2, 220);
            BinaryImage img(side, side);
            const int n = rng.range(1, 8);
            for (int p = 0; p < n; ++p) img.set(rng.range(0, side - 1), rng.range(0, side - 1), true);
            const Rect box = tight_bounding_box(img);
            const BinaryImage out = scale_to_canvas(img, box);
            REQUIRE(out.width() == kCanvasSize);
            REQUIRE(out.height() == kCanvasSize);
            REQUIRE(out.foreground_count() >= 1);
        }
    }

    SECTION("matches a per-pixel window oracle") {
        Rng rng(17);
        for (int i = 0; i < 50; ++i) {
            const BinaryImage img = oracles::random_blob(rng, rng.range(20, 160));
            if (img.foreground_count() == 0) continue;
            const Rect box = tight_bounding_box(img);
            const BinaryImage out = scale_to_canvas(img, box);
            for (int r = 0; r < kCanvasSize; ++r) {
                for (int c = 0; c < kCanvasSize; ++c) {
                    const int r0 = box.top + static_cast<int>(std::floor(r * box.height / 100.0));
                    const int r1 = std::max(box.top + static_cast<int>(std::floor((r + 1) * box.height / 100.0)),
                                            r0 + 1);
                    const int c0 = box.left + static_cast<int>(std::floor(c * box.width / 100.0));
                    const int c1 = std::max(box.left + static_cast<int>(std::floor((c + 1) * box.width / 100.0)),
                                            c0 + 1);
                    bool expect = false;
                    for (int rr = r0; rr < r1; ++rr)
                        for (int cc = c0; cc < c1; ++cc) expect = expect || img.at(rr, cc);
                    REQUIRE(out.at(r, c) == expect);
                }
            }
        }
    }
}

TEST_CASE("morphological cleanup") {
    SECTION("empty image stays empty") {
        REQUIRE(morph_cleanup(BinaryImage(kCanvasSize, kCanvasSize)).foreground_count() == 0);
    }

    SECTION("single pixel grows to a 3x3 block") {
        BinaryImage img(kCanvasSize, kCanvasSize);
        img.set(50, 50, true);
        const BinaryImage out = morph_cleanup(img);
        REQUIRE(out.foreground_count() == 9);
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc) REQUIRE(out.at(50 + dr, 50 + dc));
    }

    SECTION("closing bridges a two-pixel gap before dilation") {
        BinaryImage img(kCanvasSize, kCanvasSize);
        img.set(50, 50, true);
        img.set(50, 52, true);
        const BinaryImage expected =
            oracles::dilate_oracle(oracles::erode_oracle(oracles::dilate_oracle(img)));
        const BinaryImage out = morph_cleanup(img);
        REQUIRE(out == expected);
        REQUIRE(out.at(50, 51));  // the gap is gone
    }

    SECTION("matches the set-morphology oracle on random blobs") {
        Rng rng(23);
        for (int i = 0; i < 60; ++i) {
            const BinaryImage img = oracles::random_blob(rng);
            REQUIRE(dilate3(img) == oracles::dilate_oracle(img));
            REQUIRE(erode3(img) == oracles::erode_oracle(img));
            REQUIRE(morph_cleanup(img) ==
                    oracles::dilate_oracle(oracles::erode_oracle(oracles::dilate_oracle(img))));
        }
    }
}

TEST_CASE("thinning") {
    SECTION("one-pixel-wide line is already thin") {
        BinaryImage img(kCanvasSize, kCanvasSize);
        for (int c = 10; c < 90; ++c) img.set(50, c, true);
        REQUIRE(thin_to_skeleton(img).image == img);
    }

    SECTION("solid bar collapses to a width-one path over the same span") {
        BinaryImage img(kCanvasSize, kCanvasSize);
        for (int r = 40; r < 45; ++r)
            for (int c = 0; c < kCanvasSize; ++c) img.set(r, c, true);
        const BinaryImage sk = thin_to_skeleton(img).image;
        REQUIRE(sk.foreground_count() > 0);
        REQUIRE_FALSE(has_full_2x2_block(sk));
        REQUIRE(count_components8(sk) == 1);
        int min_col = kCanvasSize, max_col = -1;
        for (int c = 0; c < kCanvasSize; ++c) {
            int per_col = 0;
            for (int r = 0; r < kCanvasSize; ++r) {
                if (!sk.at(r, c)) continue;
                ++per_col;
                REQUIRE(r >= 40);
                REQUIRE(r < 45);
                min_col = std::min(min_col, c);
                max_col = std::max(max_col, c);
            }
            REQUIRE(per_col <= 1);
        }
        REQUIRE(min_col <= 5);
        REQUIRE(max_col >= 94);
    }

    SECTION("empty image gives an empty skeleton") {
        REQUIRE(thin_to_skeleton(BinaryImage(kCanvasSize, kCanvasSize)).image.foreground_count() == 0);
    }

    SECTION("idempotent, one pixel wide and connectivity preserving on random blobs") {
        Rng rng(29);
        for (int i = 0; i < 80; ++i) {
            const BinaryImage img = oracles::random_blob(rng);
            const BinaryImage sk = thin_to_skeleton(img).image;
            REQUIRE_FALSE(has_full_2x2_block(sk));
            REQUIRE(count_components8(sk) == count_components8(img));
            REQUIRE(thin_to_skeleton(sk).image == sk);
        }
    }
}

TEST_CASE("contour mask") {
    SECTION("single pixel is its own contour") {
        BinaryImage img(9, 9);
        img.set(4, 4, true);
        const BinaryImage mask = extract_contour_mask(img);
        REQUIRE(mask.at(4, 4));
        REQUIRE(mask.foreground_count() == 1);
    }

    SECTION("solid block keeps only its perimeter ring") {
        BinaryImage img(kCanvasSize, kCanvasSize);
        for (int r = 20; r < 30; ++r)
            for (int c = 40; c < 50; ++c) img.set(r, c, true);
        const BinaryImage mask = extract_contour_mask(img);
        REQUIRE(mask.foreground_count() == 36);
        for (int r = 0; r < kCanvasSize; ++r)
            for (int c = 0; c < kCanvasSize; ++c)
                REQUIRE(mask.at(r, c) == oracles::is_contour_oracle(img, r, c));
    }

    SECTION("empty image gives an empty mask") {
        REQUIRE(extract_contour_mask(BinaryImage(10, 10)).foreground_count() == 0);
    }

    SECTION("matches the neighbor-scan oracle on random blobs") {
        Rng rng(31);
        for (int i = 0; i < 60; ++i) {
            const BinaryImage img = oracles::random_blob(rng);
            const BinaryImage mask = extract_contour_mask(img);
            for (int r = 0; r < img.height(); ++r)
                for (int c = 0; c < img.width(); ++c)
                    REQUIRE(mask.at(r, c) == oracles::is_contour_oracle(img, r, c));
        }
    }
}

namespace {

/// Visit events of a replayed chain; the closing arrival back at the start
/// is not an extra event. An isolated pixel is one event with no codes.
std::size_t traversal_count(const ContourChain& chain, const std::vector<Pixel>& pts) {
    if (chain.codes.empty()) return 0;
    return chain.closed ? pts.size() - 1 : pts.size();
}

}  // namespace

TEST_CASE("image file reading") {
    support::TempDir tmp("io");
    const auto expected = [](int r, int c) { return static_cast<std::uint8_t>((r * 6 + c) * 10); };
    auto check_ramp = [&](const GrayImage& img) {
        REQUIRE(img.width() == png_fixtures::kWidth);
        REQUIRE(img.height() == png_fixtures::kHeight);
        for (int r = 0; r < img.height(); ++r)
            for (int c = 0; c < img.width(); ++c) REQUIRE(img.at(r, c) == expected(r, c));
    };

    SECTION("png in grayscale, rgb and 16-bit variants") {
        auto drop = [&](const char* name, const unsigned char* data, std::size_t n) {
            std::ofstream out(tmp.path() / name, std::ios::binary);
            out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n));
            return tmp.path() / name;
        };
        check_ramp(read_image(drop("g8.png", png_fixtures::kGray8, sizeof png_fixtures::kGray8)));
        check_ramp(read_image(drop("rgb.png", png_fixtures::kRgb, sizeof png_fixtures::kRgb)));
        check_ramp(read_image(drop("g16.png", png_fixtures::kGray16, sizeof png_fixtures::kGray16)));
    }

    SECTION("ascii and binary pgm agree") {
        std::ofstream p2(tmp.path() / "ramp.pgm");
        p2 << "P2\n# ramp\n6 4\n255\n";
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 6; ++c) p2 << int(expected(r, c)) << "\n";
        p2.close();
        check_ramp(read_image(tmp.path() / "ramp.pgm"));

        GrayImage img(6, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 6; ++c) img.set(r, c, expected(r, c));
        write_pgm(tmp.path() / "ramp5.pgm", img);
        check_ramp(read_image(tmp.path() / "ramp5.pgm"));
    }

    SECTION("junk files are rejected") {
        std::ofstream(tmp.path() / "junk.pgm") << "hello world";
        REQUIRE_THROWS_AS(read_image(tmp.path() / "junk.pgm"), UnreadableImage);
        REQUIRE_THROWS_AS(read_image(tmp.path() / "missing.png"), UnreadableImage);
    }
}

TEST_CASE("chain code tracing") {
    SECTION("isolated pixel yields an empty closed chain") {
        BinaryImage mask(5, 5);
        mask.set(2, 2, true);
        const auto chains = trace_chain_codes(mask);
        REQUIRE(chains.size() == 1);
        REQUIRE(chains[0].codes.empty());
        REQUIRE(chains[0].closed);
        REQUIRE(chains[0].start == Pixel{2, 2});
    }

    SECTION("hollow ring traces clockwise in eight steps") {
        BinaryImage mask(3, 3, true);
        mask.set(1, 1, false);
        const auto chains = trace_chain_codes(mask);
        REQUIRE(chains.size() == 1);
        const ContourChain& chain = chains[0];
        REQUIRE(chain.start == Pixel{0, 0});
        REQUIRE(chain.closed);
        REQUIRE(chain.codes == std::vector<std::uint8_t>{0, 0, 6, 6, 4, 4, 2, 2});
        const auto pts = replay_chain(chain);
        REQUIRE(pts.front() == pts.back());
        const std::set<std::pair<int, int>> visited(
            [&pts] {
                std::set<std::pair<int, int>> s;
                for (const Pixel& p : pts) s.insert({p.row, p.col});
                return s;
            }());
        REQUIRE(visited.size() == 8);
    }

    SECTION("disjoint components trace independently") {
        BinaryImage mask(20, 20);
        auto ring = [&mask](int r0, int c0) {
            for (int d = 0; d < 3; ++d) {
                mask.set(r0, c0 + d, true);
                mask.set(r0 + 2, c0 + d, true);
                mask.set(r0 + d, c0, true);
                mask.set(r0 + d, c0 + 2, true);
            }
        };
        ring(2, 2);
        ring(10, 12);
        const auto chains = trace_chain_codes(mask);
        REQUIRE(chains.size() == 2);
    }

    SECTION("replay stays on the mask, closes, and balances its arithmetic") {
        Rng rng(37);
        for (int i = 0; i < 60; ++i) {
            const BinaryImage img = oracles::random_blob(rng);
            const BinaryImage mask = extract_contour_mask(img);
            const auto [labels, n_components] = label_components8(mask);
            const auto chains = trace_chain_codes(mask);
            REQUIRE(static_cast<int>(chains.size()) == n_components);
            for (const ContourChain& chain : chains) {
                const auto pts = replay_chain(chain);
                for (const Pixel& p : pts) REQUIRE(mask.at_or_bg(p.row, p.col));
                if (chain.closed) {
                    REQUIRE(pts.front() == pts.back());
                    REQUIRE(chain.codes.size() == traversal_count(chain, pts));
                } else {
                    REQUIRE(chain.codes.size() == traversal_count(chain, pts) - 1);
                }
                // The start pixel is the top-most, then left-most of its component.
                const int comp = labels[static_cast<std::size_t>(chain.start.row) * mask.width() +
                                        chain.start.col];
                for (int r = 0; r < mask.height(); ++r)
                    for (int c = 0; c < mask.width(); ++c)
                        if (labels[static_cast<std::size_t>(r) * mask.width() + c] == comp)
                            REQUIRE(std::pair(chain.start.row, chain.start.col) <= std::pair(r, c));
            }
        }
    }
}
