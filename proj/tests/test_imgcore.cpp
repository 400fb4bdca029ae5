#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "moveseg/histogram.hpp"
#include "moveseg/hog.hpp"
#include "moveseg/morphology.hpp"
#include "moveseg/pnm.hpp"
#include "moveseg/raster.hpp"
#include "moveseg/resample.hpp"
#include "test_util.hpp"

using namespace moveseg;
using testutil::random_mask;
using testutil::random_raster;
using testutil::subset_of;

namespace {

// Independent oracle: box bounds by full enumeration of true coordinates.
BBox bbox_oracle(const BinaryMask& mask) {
    int min_x = 1 << 30, min_y = 1 << 30, max_x = -1, max_y = -1;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                min_x = std::min(min_x, x);
                min_y = std::min(min_y, y);
                max_x = std::max(max_x, x);
                max_y = std::max(max_y, y);
            }
    return {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

// Independent oracle: direct O(n k^2) morphology.
BinaryMask morph_oracle(const BinaryMask& mask, int k, bool erosion) {
    int r = k / 2;
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            bool acc = erosion;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    int xx = x + dx, yy = y + dy;
                    bool v = xx >= 0 && xx < mask.width && yy >= 0 && yy < mask.height &&
                             mask.at(xx, yy);
                    acc = erosion ? (acc && v) : (acc || v);
                }
            out.set(x, y, acc);
        }
    return out;
}

} // namespace

TEST_CASE("tight_bbox basic cases") {
    BinaryMask single(8, 8);
    single.set(3, 4, true);
    CHECK(tight_bbox(single) == BBox{3, 4, 1, 1});

    BinaryMask full(10, 10, true);
    CHECK(tight_bbox(full) == BBox{0, 0, 10, 10});

    BinaryMask two(6, 5);
    two.set(1, 1, true);
    two.set(4, 2, true);
    CHECK(tight_bbox(two) == bbox_oracle(two));
    CHECK(tight_bbox(two) == BBox{1, 1, 4, 2});

    BinaryMask empty(4, 4);
    CHECK_THROWS_AS(tight_bbox(empty), ValidationError);
}

TEST_CASE("tight_bbox matches enumeration oracle on random masks") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        BinaryMask mask = random_mask(1 + static_cast<int>(rng.next_below(30)),
                                      1 + static_cast<int>(rng.next_below(30)), rng, 0.2);
        if (mask.true_count() == 0)
            continue;
        CHECK(tight_bbox(mask) == bbox_oracle(mask));
    }
}

TEST_CASE("color_histogram on constant and two-level images") {
    RasterU8 gray(4, 4, 3, 100);
    std::vector<std::size_t> all(16);
    std::iota(all.begin(), all.end(), std::size_t{0});

    auto hist = color_histogram(gray, all, 8);
    REQUIRE(hist.size() == 24);
    for (int c = 0; c < 3; ++c) {
        double block = 0;
        int nonzero = 0;
        for (int b = 0; b < 8; ++b) {
            block += hist[static_cast<std::size_t>(c * 8 + b)];
            nonzero += hist[static_cast<std::size_t>(c * 8 + b)] > 0;
        }
        CHECK(block == doctest::Approx(1.0));
        CHECK(nonzero == 1);
    }

    RasterU8 split(4, 2, 1);
    for (int x = 0; x < 4; ++x) {
        split.at(x, 0) = 0;
        split.at(x, 1) = 255;
    }
    std::vector<std::size_t> region(8);
    std::iota(region.begin(), region.end(), std::size_t{0});
    auto two = color_histogram(split, region, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == doctest::Approx(0.5));
    CHECK(two[1] == doctest::Approx(0.5));

    auto onehot = color_histogram(gray, {5}, 16);
    CHECK(std::count(onehot.begin(), onehot.end(), 1.0) == 3);

    CHECK_THROWS_AS(color_histogram(gray, {}, 8), ValidationError);
}

TEST_CASE("color_histogram invariant to permuting values within the region") {
    Rng rng(11);
    RasterU8 raster = random_raster(12, 9, 3, rng);
    std::vector<std::size_t> region(raster.pixel_count());
    std::iota(region.begin(), region.end(), std::size_t{0});
    auto before = color_histogram(raster, region, 16);

    // Swap whole pixels around; the histogram must not move.
    for (int s = 0; s < 200; ++s) {
        std::size_t a = rng.next_below(raster.pixel_count());
        std::size_t b = rng.next_below(raster.pixel_count());
        for (int c = 0; c < 3; ++c)
            std::swap(raster.data[a * 3 + static_cast<std::size_t>(c)],
                      raster.data[b * 3 + static_cast<std::size_t>(c)]);
    }
    CHECK(color_histogram(raster, region, 16) == before);
}

TEST_CASE("hog descriptor edge cases") {
    RasterU8 constant(16, 16, 1, 77);
    auto desc = hog_descriptor(constant, {2, 2, 12, 12}, 4, 9);
    REQUIRE(desc.size() == 4u * 4u * 9u);
    for (double v : desc)
        CHECK(v == 0.0);

    // Vertical step edge: all gradient is horizontal -> orientation bin 0.
    RasterU8 step(16, 16, 1, 0);
    for (int y = 0; y < 16; ++y)
        for (int x = 8; x < 16; ++x)
            step.at(x, y) = 200;
    auto edge = hog_descriptor(step, {2, 2, 12, 12}, 4, 9);
    double bin0 = 0.0, rest = 0.0;
    for (std::size_t i = 0; i < edge.size(); ++i)
        (i % 9 == 0 ? bin0 : rest) += edge[i];
    CHECK(bin0 > 0.0);
    CHECK(rest == 0.0);

    CHECK_THROWS_AS(hog_descriptor(constant, {0, 0, 3, 12}, 4, 9), ValidationError);
}

TEST_CASE("hog invariant to brightness offset, covariant with translation") {
    Rng rng(23);
    RasterU8 master = random_raster(40, 32, 1, rng);

    // Offset invariance (clamp-free offset).
    RasterU8 shifted_vals = master;
    for (auto& v : shifted_vals.data)
        v = static_cast<std::uint8_t>(std::min(255, v / 2 + 40));
    RasterU8 base_vals = master;
    for (auto& v : base_vals.data)
        v = static_cast<std::uint8_t>(v / 2);
    CHECK(hog_descriptor(base_vals, {4, 4, 16, 16}, 4, 9) ==
          hog_descriptor(shifted_vals, {4, 4, 16, 16}, 4, 9));

    // Translation covariance: crop two windows of one master image.
    auto crop = [&](int ox, int oy) {
        RasterU8 out(24, 24, 1);
        for (int y = 0; y < 24; ++y)
            for (int x = 0; x < 24; ++x)
                out.at(x, y) = master.at(x + ox, y + oy);
        return out;
    };
    RasterU8 a = crop(0, 0), b = crop(5, 3);
    CHECK(hog_descriptor(a, {8, 6, 12, 12}, 4, 9) == hog_descriptor(b, {3, 3, 12, 12}, 4, 9));
}

TEST_CASE("morphology textbook cases") {
    BinaryMask square(5, 5);
    for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x)
            square.set(x, y, true);
    BinaryMask eroded = erode(square, 3);
    CHECK(eroded.true_count() == 1);
    CHECK(eroded.at(2, 2));

    BinaryMask dot(3, 3);
    dot.set(1, 1, true);
    CHECK(dilate(dot, 3).true_count() == 9);

    CHECK_THROWS_AS(erode(square, 4), ValidationError);
    CHECK_THROWS_AS(dilate(square, 0), ValidationError);
}

TEST_CASE("morphology equals direct oracle and obeys lattice laws") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        int w = 2 + static_cast<int>(rng.next_below(20));
        int h = 2 + static_cast<int>(rng.next_below(20));
        int k = 1 + 2 * static_cast<int>(rng.next_below(3));
        BinaryMask x = random_mask(w, h, rng, 0.4 + 0.4 * rng.next_double());

        BinaryMask er = erode(x, k), di = dilate(x, k);
        CHECK(er.data == morph_oracle(x, k, true).data);
        CHECK(di.data == morph_oracle(x, k, false).data);
        CHECK(subset_of(er, x));
        CHECK(subset_of(x, di));

        // opening(X) <= X everywhere; X <= closing(X) away from the frame
        // border (the out-of-frame-is-background convention erodes border
        // pixels whose window leaves the frame).
        CHECK(subset_of(dilate(er, k), x));
        BinaryMask closing = erode(di, k);
        int r = k / 2;
        for (int y = r; y < h - r; ++y)
            for (int x2 = r; x2 < w - r; ++x2)
                if (x.at(x2, y))
                    CHECK(closing.at(x2, y));

        // Monotonicity: Y = X plus extra pixels.
        BinaryMask y = x;
        for (int extra = 0; extra < 5; ++extra)
            y.data[rng.next_below(y.data.size())] = 1;
        CHECK(subset_of(er, erode(y, k)));
        CHECK(subset_of(di, dilate(y, k)));
    }
}

TEST_CASE("downsample_mask area averages") {
    BinaryMask full(12, 12, true);
    ProbMap ones = downsample_mask(full, 5);
    for (double v : ones.data)
        CHECK(v == doctest::Approx(1.0));

    BinaryMask corner(2, 2);
    corner.set(0, 0, true);
    ProbMap quarter = downsample_mask(corner, 1);
    CHECK(quarter.at(0, 0) == doctest::Approx(0.25));

    Rng rng(5);
    BinaryMask same = random_mask(9, 9, rng);
    ProbMap identity = downsample_mask(same, 9);
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 9; ++x)
            CHECK(identity.at(x, y) == doctest::Approx(same.at(x, y) ? 1.0 : 0.0));
}

TEST_CASE("downsample_mask preserves foreground fraction when s divides dims") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        int s = 2 + static_cast<int>(rng.next_below(6));
        int mult = 1 + static_cast<int>(rng.next_below(4));
        BinaryMask mask = random_mask(s * mult, s * mult, rng);
        ProbMap down = downsample_mask(mask, s);
        double down_mean =
            std::accumulate(down.data.begin(), down.data.end(), 0.0) / down.data.size();
        double mask_mean = static_cast<double>(mask.true_count()) / mask.pixel_count();
        CHECK(down_mean == doctest::Approx(mask_mean).epsilon(1e-12));
    }
}

TEST_CASE("pnm round trips are bit exact") {
    testutil::TempDir tmp("pnm");
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        int channels = rng.coin() ? 1 : 3;
        RasterU8 raster = random_raster(1 + static_cast<int>(rng.next_below(40)),
                                        1 + static_cast<int>(rng.next_below(40)), channels, rng);
        std::string path = tmp.sub("img.pnm");
        write_pnm(path, raster);
        RasterU8 back = read_pnm(path);
        CHECK(back.width == raster.width);
        CHECK(back.height == raster.height);
        CHECK(back.channels == raster.channels);
        CHECK(back.data == raster.data);

        std::string again = tmp.sub("img2.pnm");
        write_pnm(again, back);
        CHECK(testutil::read_file_bytes(path) == testutil::read_file_bytes(again));
    }
}

TEST_CASE("mask and probability pgm encodings") {
    testutil::TempDir tmp("pgm");
    Rng rng(31);
    BinaryMask mask = random_mask(13, 7, rng);
    write_mask_pgm(tmp.sub("m.pgm"), mask);
    RasterU8 raw = read_pnm(tmp.sub("m.pgm"));
    for (std::size_t i = 0; i < raw.data.size(); ++i)
        CHECK((raw.data[i] == 0 || raw.data[i] == 255));
    CHECK(read_mask_pgm(tmp.sub("m.pgm")).data == mask.data);

    ProbMap prob(5, 4);
    for (std::size_t i = 0; i < prob.data.size(); ++i)
        prob.data[i] = static_cast<double>(i) / (prob.data.size() - 1);
    write_prob_pgm(tmp.sub("p.pgm"), prob);
    RasterU8 praw = read_pnm(tmp.sub("p.pgm"));
    for (std::size_t i = 0; i < prob.data.size(); ++i)
        CHECK(praw.data[i] == static_cast<std::uint8_t>(std::lround(255.0 * prob.data[i])));
}

TEST_CASE("probmap validation") {
    ProbMap bad(2, 2);
    bad.data[1] = 1.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}
