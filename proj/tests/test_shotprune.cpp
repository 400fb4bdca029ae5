#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "moveseg/shots.hpp"
#include "moveseg/synth.hpp"
#include "test_util.hpp"

using namespace moveseg;

namespace {

RasterU8 solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    RasterU8 out(w, h, 3);
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        out.data[i * 3 + 0] = r;
        out.data[i * 3 + 1] = g;
        out.data[i * 3 + 2] = b;
    }
    return out;
}

// ProbMap with exactly `count` foreground pixels (value 1.0) filled row-major
// from an offset.
ProbMap with_fg_pixels(int w, int h, std::size_t count, std::size_t offset = 0) {
    ProbMap prob(w, h, 0.0);
    for (std::size_t i = 0; i < count; ++i)
        prob.data[offset + i] = 1.0;
    return prob;
}

} // namespace

TEST_CASE("detect_shots basic cases") {
    std::vector<RasterU8> constant(6, solid(16, 16, 80, 90, 100));
    auto one = detect_shots(constant, 16, 0.3);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == Shot{0, 5});

    std::vector<RasterU8> cut;
    for (int i = 0; i < 5; ++i)
        cut.push_back(solid(16, 16, 0, 0, 0));
    for (int i = 0; i < 5; ++i)
        cut.push_back(solid(16, 16, 255, 255, 255));
    auto two = detect_shots(cut, 16, 0.3);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == Shot{0, 4});
    CHECK(two[1] == Shot{5, 9});

    std::vector<RasterU8> single{solid(8, 8, 1, 2, 3)};
    auto lone = detect_shots(single, 16, 0.3);
    REQUIRE(lone.size() == 1);
    CHECK(lone[0] == Shot{0, 0});
}

TEST_CASE("detect_shots output partitions the frame range") {
    Rng rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        // Random runs of distinct solid colors.
        std::vector<RasterU8> frames;
        std::vector<int> expected_cuts;
        int segments = 1 + static_cast<int>(rng.next_below(5));
        for (int s = 0; s < segments; ++s) {
            std::uint8_t r = static_cast<std::uint8_t>(rng.next_below(256));
            std::uint8_t g = static_cast<std::uint8_t>(rng.next_below(256));
            std::uint8_t b = static_cast<std::uint8_t>(rng.next_below(256));
            int run = 1 + static_cast<int>(rng.next_below(6));
            for (int i = 0; i < run; ++i)
                frames.push_back(solid(12, 12, r, g, b));
        }
        auto shots = detect_shots(frames, 16, 0.3);
        REQUIRE(!shots.empty());
        CHECK(shots.front().start_frame == 0);
        CHECK(shots.back().end_frame == static_cast<int>(frames.size()) - 1);
        for (std::size_t i = 0; i < shots.size(); ++i) {
            CHECK(shots[i].start_frame <= shots[i].end_frame);
            if (i > 0)
                CHECK(shots[i].start_frame == shots[i - 1].end_frame + 1);
        }
    }
}

TEST_CASE("prune_frame threshold rules in order") {
    PruneParams params;
    const int n = 100 * 100;

    auto too_much = prune_frame(with_fg_pixels(100, 100, n * 85 / 100), params);
    CHECK(!too_much.keep);
    CHECK(too_much.reason == PruneReason::too_much_fg);

    auto too_little = prune_frame(with_fg_pixels(100, 100, n * 5 / 100), params);
    CHECK(!too_little.keep);
    CHECK(too_little.reason == PruneReason::too_little_fg);

    // 30% foreground as a centered block: border band stays clean.
    ProbMap centered(100, 100, 0.0);
    for (int y = 25; y < 80; ++y)
        for (int x = 25; x < 80; ++x)
            if ((y - 25) * 55 + (x - 25) < 3000)
                centered.at(x, y) = 1.0;
    auto keep = prune_frame(centered, params);
    CHECK(keep.keep);
    CHECK(keep.reason == PruneReason::ok);

    // Same 30% block, plus foreground on 12% of the border band.
    // Band: pixels within 5 of an edge; 100x100 -> band area 1900.
    ProbMap bordered = centered;
    int painted = 0;
    for (int x = 0; x < 100 && painted < 228; ++x)
        for (int y = 0; y < 5 && painted < 228; ++y) {
            bordered.at(x, y) = 1.0;
            ++painted;
        }
    auto border = prune_frame(bordered, params);
    CHECK(!border.keep);
    CHECK(border.reason == PruneReason::border_fg);
}

TEST_CASE("prune_frame boundary exactness and rule order") {
    PruneParams params;
    const int n = 100 * 100;

    // Exactly the max threshold is kept (strict inequality).
    auto exact_max = prune_frame(with_fg_pixels(100, 100, n * 80 / 100), params);
    CHECK(exact_max.keep == false); // 80% fails the border rule, not rule 1
    CHECK(exact_max.reason == PruneReason::border_fg);

    // Exactly max, concentrated away from the border.
    ProbMap centered(100, 100, 0.0);
    std::size_t count = 0;
    for (int y = 5; y < 95 && count < 8000; ++y)
        for (int x = 5; x < 95 && count < 8000; ++x) {
            centered.at(x, y) = 1.0;
            ++count;
        }
    auto exact_centered = prune_frame(centered, params);
    CHECK(exact_centered.keep);

    // One more pixel tips rule 1.
    ProbMap over = centered;
    bool added = false;
    for (int y = 5; y < 95 && !added; ++y)
        for (int x = 5; x < 95 && !added; ++x)
            if (over.at(x, y) == 0.0) {
                over.at(x, y) = 1.0;
                added = true;
            }
    REQUIRE(added);
    auto tipped = prune_frame(over, params);
    CHECK(!tipped.keep);
    CHECK(tipped.reason == PruneReason::too_much_fg);

    // 85% discards with too_much_fg even when the border is also violated.
    auto both = prune_frame(with_fg_pixels(100, 100, n * 85 / 100), params);
    CHECK(both.reason == PruneReason::too_much_fg);
}

TEST_CASE("prune_frame threshold monotonicity") {
    Rng rng(88);
    PruneParams base;
    for (int trial = 0; trial < 50; ++trial) {
        ProbMap prob(40, 40, 0.0);
        for (double& v : prob.data)
            v = rng.next_double();
        PruneParams relaxed = base;
        relaxed.max_fg_fraction = 0.95;
        auto before = prune_frame(prob, base);
        auto after = prune_frame(prob, relaxed);
        if (before.keep)
            CHECK(after.keep); // raising max_fg can only keep more frames
        if (!after.keep)
            CHECK(after.reason != PruneReason::too_much_fg);
    }
}

TEST_CASE("sample_frame_indices yields 5 to 10 when possible") {
    for (int len = 1; len <= 200; ++len) {
        auto idx = sample_frame_indices(len);
        REQUIRE(!idx.empty());
        CHECK(idx.front() == 0);
        CHECK(idx.back() < len);
        for (std::size_t i = 1; i < idx.size(); ++i)
            CHECK(idx[i] > idx[i - 1]);
        if (len >= 5) {
            CHECK(idx.size() >= 5);
            CHECK(idx.size() <= 10);
        } else {
            CHECK(idx.size() == static_cast<std::size_t>(len));
        }
    }
}

TEST_CASE("prune report round trip") {
    testutil::TempDir tmp("prune");
    std::vector<std::string> ids{"0", "1", "2"};
    std::vector<PruneDecision> decisions{{true, PruneReason::ok},
                                         {false, PruneReason::too_much_fg},
                                         {false, PruneReason::border_fg}};
    write_prune_report(tmp.sub("report.txt"), ids, decisions);
    auto back = read_prune_report(tmp.sub("report.txt"));
    REQUIRE(back.size() == 3);
    CHECK(back[0].first == "0");
    CHECK(back[0].second.keep);
    CHECK(back[1].second.reason == PruneReason::too_much_fg);
    CHECK(back[2].second.reason == PruneReason::border_fg);

    std::string text = testutil::read_file_bytes(tmp.sub("report.txt"));
    CHECK(text == "0 keep ok\n1 discard too_much_fg\n2 discard border_fg\n");
}

TEST_CASE("prune params validated") {
    PruneParams bad;
    bad.min_fg_fraction = 0.9;
    ProbMap prob(4, 4, 0.0);
    CHECK_THROWS_AS(prune_frame(prob, bad), ValidationError);
}
