#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "moveseg/metrics.hpp"
#include "test_util.hpp"

using namespace moveseg;
using testutil::random_mask;

namespace {

BinaryMask block(int w, int h, BBox box) {
    BinaryMask mask(w, h);
    for (int y = box.y; y < box.y + box.h; ++y)
        for (int x = box.x; x < box.x + box.w; ++x)
            mask.set(x, y, true);
    return mask;
}

} // namespace

TEST_CASE("iou basic cases") {
    BinaryMask a = block(10, 10, {2, 2, 4, 4});
    CHECK(iou(a, a) == doctest::Approx(1.0));

    BinaryMask b = block(10, 10, {7, 7, 2, 2});
    CHECK(iou(a, b) == doctest::Approx(0.0));

    BinaryMask left = block(10, 10, {0, 0, 5, 10});
    BinaryMask full(10, 10, true);
    CHECK(iou(left, full) == doctest::Approx(0.5));

    BinaryMask empty(10, 10);
    CHECK(iou(empty, empty) == doctest::Approx(1.0));

    BinaryMask other(9, 10);
    CHECK_THROWS_AS(iou(a, other), ValidationError);
}

TEST_CASE("precision and recall conventions") {
    BinaryMask inner = block(12, 12, {4, 4, 3, 3});
    BinaryMask outer = block(12, 12, {3, 3, 6, 6});

    auto [p_sub, r_sub] = precision_recall(inner, outer);
    CHECK(p_sub == doctest::Approx(1.0));
    CHECK(r_sub < 1.0);

    auto [p_super, r_super] = precision_recall(outer, inner);
    CHECK(r_super == doctest::Approx(1.0));
    CHECK(p_super < 1.0);

    // Two 2x2 blocks sharing a 1x2 column: 2 shared pixels.
    BinaryMask pa = block(8, 8, {2, 2, 2, 2});
    BinaryMask pb = block(8, 8, {3, 2, 2, 2});
    auto [p, r] = precision_recall(pa, pb);
    CHECK(p == doctest::Approx(0.5));
    CHECK(r == doctest::Approx(0.5));

    BinaryMask empty(8, 8);
    auto [p_empty, r_empty] = precision_recall(empty, pa);
    CHECK(p_empty == doctest::Approx(1.0));
    CHECK(r_empty == doctest::Approx(0.0));
}

TEST_CASE("metric identities on random mask pairs") {
    Rng rng(1001);
    for (int trial = 0; trial < 100; ++trial) {
        int w = 2 + static_cast<int>(rng.next_below(20));
        int h = 2 + static_cast<int>(rng.next_below(20));
        BinaryMask a = random_mask(w, h, rng, rng.next_double());
        BinaryMask b = random_mask(w, h, rng, rng.next_double());

        CHECK(iou(a, b) == doctest::Approx(iou(b, a)));
        auto [pab, rab] = precision_recall(a, b);
        auto [pba, rba] = precision_recall(b, a);
        CHECK(pab == doctest::Approx(rba));
        CHECK(rab == doctest::Approx(pba));
        CHECK(iou(a, b) <= std::min(pab, rab) + 1e-12);
    }
}

TEST_CASE("metrics invariant under simultaneous translation") {
    Rng rng(7);
    BinaryMask a = block(20, 20, {3, 4, 6, 5});
    BinaryMask b = block(20, 20, {5, 5, 6, 6});
    auto shift = [&](const BinaryMask& m, int dx, int dy) {
        BinaryMask out(m.width, m.height);
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x)
                if (m.at(x, y))
                    out.set(x + dx, y + dy, true);
        return out;
    };
    (void)rng;
    double before = iou(a, b);
    auto [p0, r0] = precision_recall(a, b);
    double after = iou(shift(a, 4, 3), shift(b, 4, 3));
    auto [p1, r1] = precision_recall(shift(a, 4, 3), shift(b, 4, 3));
    CHECK(before == doctest::Approx(after));
    CHECK(p0 == doctest::Approx(p1));
    CHECK(r0 == doctest::Approx(r1));
}

TEST_CASE("score_masks and compare_sources aggregate per item") {
    BinaryMask gt1 = block(10, 10, {1, 1, 4, 4});
    BinaryMask gt2 = block(10, 10, {5, 5, 3, 3});
    BinaryMask gt3 = block(10, 10, {0, 6, 4, 3});
    std::vector<BinaryMask> gt{gt1, gt2, gt3};

    // Source a: exact copies. Source b: complements.
    std::vector<BinaryMask> a = gt;
    std::vector<BinaryMask> b;
    for (const BinaryMask& m : gt) {
        BinaryMask inv(m.width, m.height);
        for (std::size_t i = 0; i < m.data.size(); ++i)
            inv.data[i] = m.data[i] ? 0 : 1;
        b.push_back(std::move(inv));
    }
    auto [score_a, score_b] = compare_sources(a, b, gt);
    CHECK(score_a.mean_iou == doctest::Approx(1.0));
    CHECK(score_a.precision == doctest::Approx(1.0));
    CHECK(score_a.recall == doctest::Approx(1.0));
    CHECK(score_b.mean_iou == doctest::Approx(0.0));

    auto [same_a, same_b] = compare_sources(a, a, gt);
    CHECK(same_a.mean_iou == doctest::Approx(same_b.mean_iou));
    CHECK(same_a.precision == doctest::Approx(same_b.precision));

    // Hand-computed means over three crafted pairs.
    BinaryMask p1 = block(10, 10, {1, 1, 4, 4});       // identical: iou 1
    BinaryMask p2 = block(10, 10, {5, 5, 3, 2});       // 6 of 9: iou 6/9, p 1, r 2/3
    BinaryMask p3 = block(10, 10, {0, 0, 1, 1});       // disjoint: iou 0
    SegScore s = score_masks({p1, p2, p3}, gt);
    CHECK(s.item_iou[0] == doctest::Approx(1.0));
    CHECK(s.item_iou[1] == doctest::Approx(6.0 / 9.0));
    CHECK(s.item_iou[2] == doctest::Approx(0.0));
    CHECK(s.mean_iou == doctest::Approx((1.0 + 6.0 / 9.0 + 0.0) / 3.0));
    CHECK(s.precision == doctest::Approx((1.0 + 1.0 + 0.0) / 3.0));
    CHECK(s.recall == doctest::Approx((1.0 + 6.0 / 9.0 + 0.0) / 3.0));

    CHECK_THROWS_AS(compare_sources(a, b, {gt1}), ValidationError);
}

TEST_CASE("score report formatting") {
    testutil::TempDir tmp("score");
    SegScore s;
    s.item_iou = {1.0, 0.5};
    s.item_precision = {1.0, 0.75};
    s.item_recall = {1.0, 0.6};
    s.mean_iou = 0.75;
    s.precision = 0.875;
    s.recall = 0.8;
    write_score_report(tmp.sub("r.tsv"), s);
    CHECK(testutil::read_file_bytes(tmp.sub("r.tsv")) ==
          "0\t1.0000\t1.0000\t1.0000\n"
          "1\t0.5000\t0.7500\t0.6000\n"
          "mean\t0.7500\t0.8750\t0.8000\n");
}
