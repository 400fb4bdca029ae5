#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "moveseg/superpixel.hpp"
#include "moveseg/synth.hpp"
#include "test_util.hpp"

using namespace moveseg;

namespace {

// 4-connectivity by flood fill per region.
bool regions_connected(const SuperpixelLabeling& lab) {
    std::vector<char> visited(lab.labels.size(), 0);
    for (int r = 0; r < lab.region_count; ++r) {
        std::size_t start = lab.labels.size();
        for (std::size_t i = 0; i < lab.labels.size(); ++i)
            if (lab.labels[i] == r) {
                start = i;
                break;
            }
        if (start == lab.labels.size())
            return false;
        std::vector<std::size_t> stack{start};
        visited[start] = 1;
        std::size_t count = 0;
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            ++count;
            int x = static_cast<int>(i % static_cast<std::size_t>(lab.width));
            int y = static_cast<int>(i / static_cast<std::size_t>(lab.width));
            const int nx[4] = {x - 1, x + 1, x, x};
            const int ny[4] = {y, y, y - 1, y + 1};
            for (int n = 0; n < 4; ++n) {
                if (nx[n] < 0 || nx[n] >= lab.width || ny[n] < 0 || ny[n] >= lab.height)
                    continue;
                std::size_t j = static_cast<std::size_t>(ny[n]) * lab.width + nx[n];
                if (!visited[j] && lab.labels[j] == r) {
                    visited[j] = 1;
                    stack.push_back(j);
                }
            }
        }
        if (count != static_cast<std::size_t>(lab.sizes[static_cast<std::size_t>(r)]))
            return false;
    }
    return true;
}

} // namespace

// region-count helper so the invariant check can reach pixel totals
// without friending internals.
static std::size_t pixel_total(const SuperpixelLabeling& lab) {
    return static_cast<std::size_t>(lab.width) * static_cast<std::size_t>(lab.height);
}

TEST_CASE("uniform image splits into a near-even grid") {
    RasterU8 uniform(64, 64, 3, 120);
    SlicParams params;
    params.target_regions = 16;
    SuperpixelLabeling lab = slic(uniform, params);
    CHECK(lab.region_count == 16);
    for (int size : lab.sizes) {
        CHECK(size >= 192); // 256 +- 25%
        CHECK(size <= 320);
    }
    CHECK(regions_connected(lab));
}

TEST_CASE("flat color halves never share a region") {
    RasterU8 halves(64, 64, 3);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
            halves.at(x, y, 0) = x < 32 ? 220 : 30;
            halves.at(x, y, 1) = 40;
            halves.at(x, y, 2) = x < 32 ? 35 : 200;
        }
    SlicParams params;
    params.target_regions = 8;
    params.compactness = 1.0;
    SuperpixelLabeling lab = slic(halves, params);
    std::set<int> left_labels, right_labels;
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 32; ++x)
            left_labels.insert(lab.label_at(x, y));
        for (int x = 32; x < 64; ++x)
            right_labels.insert(lab.label_at(x, y));
    }
    for (int lbl : left_labels)
        CHECK(right_labels.count(lbl) == 0);
}

TEST_CASE("single target region covers the image") {
    RasterU8 image = textured_frame(20, 14, 3);
    SlicParams params;
    params.target_regions = 1;
    SuperpixelLabeling lab = slic(image, params);
    CHECK(lab.region_count == 1);
    CHECK(lab.sizes[0] == 20 * 14);
}

TEST_CASE("labeling invariants and determinism on textured input") {
    RasterU8 image = textured_frame(80, 60, 42);
    SlicParams params;
    params.target_regions = 40;
    SuperpixelLabeling lab = slic(image, params);

    REQUIRE(lab.region_count >= 20); // within [0.5, 2] x target
    REQUIRE(lab.region_count <= 80);
    std::vector<int> seen(static_cast<std::size_t>(lab.region_count), 0);
    long total = 0;
    for (int lbl : lab.labels) {
        REQUIRE(lbl >= 0);
        REQUIRE(lbl < lab.region_count);
        ++seen[static_cast<std::size_t>(lbl)];
    }
    for (int r = 0; r < lab.region_count; ++r) {
        CHECK(seen[static_cast<std::size_t>(r)] == lab.sizes[static_cast<std::size_t>(r)]);
        total += lab.sizes[static_cast<std::size_t>(r)];
    }
    CHECK(total == static_cast<long>(pixel_total(lab)));
    CHECK(regions_connected(lab));

    SuperpixelLabeling again = slic(image, params);
    CHECK(again.labels == lab.labels);
    CHECK(again.region_count == lab.region_count);
}

TEST_CASE("channel permutation equivariance under the rgb metric") {
    RasterU8 image = textured_frame(48, 48, 77);
    RasterU8 permuted(48, 48, 3);
    for (std::size_t i = 0; i < image.pixel_count(); ++i) {
        permuted.data[i * 3 + 0] = image.data[i * 3 + 2];
        permuted.data[i * 3 + 1] = image.data[i * 3 + 0];
        permuted.data[i * 3 + 2] = image.data[i * 3 + 1];
    }
    SlicParams params;
    params.target_regions = 30;
    params.colorspace = SlicColorSpace::rgb;
    SuperpixelLabeling a = slic(image, params);
    SuperpixelLabeling b = slic(permuted, params);
    CHECK(a.labels == b.labels);
}

TEST_CASE("region_means exact on hand built labelings") {
    RasterU8 image(4, 2, 3, 0);
    SlicParams one;
    one.target_regions = 1;
    SuperpixelLabeling lab = slic(image, one);

    RasterF64 values(4, 2);
    std::iota(values.data.begin(), values.data.end(), 0.0); // 0..7
    auto means = region_means(lab, values);
    REQUIRE(means.size() == 1);
    CHECK(means[0] == doctest::Approx(3.5));

    RasterF64 constant(4, 2, 2.5);
    CHECK(region_means(lab, constant)[0] == doctest::Approx(2.5));

    // Two hand-made regions: left half and right half.
    SuperpixelLabeling manual;
    manual.width = 4;
    manual.height = 2;
    manual.labels = {0, 0, 1, 1, 0, 0, 1, 1};
    manual.region_count = 2;
    manual.sizes = {4, 4};
    manual.centroids = {{0.5, 0.5}, {2.5, 0.5}};
    auto two = region_means(manual, values);
    CHECK(two[0] == doctest::Approx((0 + 1 + 4 + 5) / 4.0));
    CHECK(two[1] == doctest::Approx((2 + 3 + 6 + 7) / 4.0));

    RasterF64 mismatched(3, 2);
    CHECK_THROWS_AS(region_means(manual, mismatched), ValidationError);
}

TEST_CASE("slic parameter validation") {
    RasterU8 image(8, 8, 3, 0);
    SlicParams bad;
    bad.target_regions = 65;
    CHECK_THROWS_AS(slic(image, bad), ValidationError);
    bad.target_regions = 0;
    CHECK_THROWS_AS(slic(image, bad), ValidationError);
}

TEST_CASE("labeling serialization round trip") {
    testutil::TempDir tmp("sp");
    RasterU8 image = textured_frame(40, 30, 3);
    SlicParams params;
    params.target_regions = 12;
    SuperpixelLabeling lab = slic(image, params);
    write_labeling(tmp.sub("lab.bin"), lab);
    SuperpixelLabeling back = read_labeling(tmp.sub("lab.bin"));
    CHECK(back.width == lab.width);
    CHECK(back.height == lab.height);
    CHECK(back.region_count == lab.region_count);
    CHECK(back.labels == lab.labels);
    CHECK(back.sizes == lab.sizes);
    for (int r = 0; r < lab.region_count; ++r) {
        CHECK(back.centroids[static_cast<std::size_t>(r)].first ==
              doctest::Approx(lab.centroids[static_cast<std::size_t>(r)].first));
        CHECK(back.centroids[static_cast<std::size_t>(r)].second ==
              doctest::Approx(lab.centroids[static_cast<std::size_t>(r)].second));
    }
}
