#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "moveseg/metrics.hpp"
#include "moveseg/optflow.hpp"
#include "moveseg/synth.hpp"
#include "moveseg/unlc.hpp"
#include "test_util.hpp"

using namespace moveseg;

namespace {

constexpr double kPi = 3.14159265358979323846;

UnlcConfig small_video_config() {
    UnlcConfig cfg;
    cfg.slic.target_regions = 100;
    cfg.slic.compactness = 10.0;
    cfg.graph_k = 8;
    cfg.propagate_iterations = 10;
    cfg.propagate_damping = 0.5;
    return cfg;
}

std::vector<FlowField> true_flows(const SyntheticVideo& video, const FlowParams& params) {
    std::vector<FlowField> flows;
    for (std::size_t t = 0; t + 1 < video.frames.size(); ++t)
        flows.push_back(dense_flow(to_grayscale(video.frames[t]),
                                   to_grayscale(video.frames[t + 1]), params));
    return flows;
}

double mean_shot_iou(const ShotSegmentation& seg, const std::vector<BinaryMask>& gt) {
    double sum = 0.0;
    for (std::size_t t = 0; t < seg.frame_probs.size(); ++t)
        sum += iou(binarize(seg.frame_probs[t], 0.5), gt[t]);
    return sum / static_cast<double>(seg.frame_probs.size());
}

} // namespace

TEST_CASE("motion_saliency zero flow maps to zero") {
    FlowField zero(20, 20);
    ProbMap sal = motion_saliency(zero, SaliencyParams{});
    for (double v : sal.data)
        CHECK(v == 0.0);
}

TEST_CASE("motion_saliency highlights a moving block in a static frame") {
    FlowField flow(40, 40);
    // 8x8 block (4% of pixels, below the static-frame fraction) moves 4 px/frame.
    for (int y = 10; y < 18; ++y)
        for (int x = 20; x < 28; ++x)
            flow.u[static_cast<std::size_t>(y) * 40 + x] = 4.0;
    ProbMap sal = motion_saliency(flow, SaliencyParams{});
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 40; ++x) {
            bool in_block = y >= 10 && y < 18 && x >= 20 && x < 28;
            if (in_block)
                CHECK(sal.at(x, y) == doctest::Approx(1.0));
            else
                CHECK(sal.at(x, y) == doctest::Approx(0.0));
        }
}

TEST_CASE("motion_saliency scores deviation from the dominant direction") {
    FlowField flow(40, 40);
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 40; ++x) {
            std::size_t i = static_cast<std::size_t>(y) * 40 + x;
            bool in_block = y >= 4 && y < 12 && x >= 4 && x < 12;
            if (in_block)
                flow.v[i] = 1.0; // orthogonal mover
            else
                flow.u[i] = 1.0; // dominant motion
        }
    ProbMap sal = motion_saliency(flow, SaliencyParams{});
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 40; ++x) {
            bool in_block = y >= 4 && y < 12 && x >= 4 && x < 12;
            CHECK(sal.at(x, y) == doctest::Approx(in_block ? 0.5 : 0.0));
        }
}

TEST_CASE("motion_saliency output range is [0,1]") {
    Rng rng(13);
    FlowField flow(30, 30);
    for (std::size_t i = 0; i < flow.u.size(); ++i) {
        flow.u[i] = rng.uniform(-8, 8);
        flow.v[i] = rng.uniform(-8, 8);
    }
    ProbMap sal = motion_saliency(flow, SaliencyParams{});
    for (double v : sal.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("superpixel_features centroid, twins and degenerate frames") {
    RasterU8 image = textured_frame(32, 32, 3);
    SlicParams params;
    params.target_regions = 1;
    SuperpixelLabeling one = slic(image, params);
    auto feats = superpixel_features(image, one, 7);
    REQUIRE(feats.size() == 1);
    CHECK(feats[0].cx == doctest::Approx(15.5 / 32.0));
    CHECK(feats[0].cy == doctest::Approx(15.5 / 32.0));
    CHECK(feats[0].frame_index == 7);

    // Two identical texture patches at different positions.
    RasterU8 twins(32, 16, 3, 50);
    RasterU8 patch = textured_frame(8, 8, 99);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
            for (int c = 0; c < 3; ++c) {
                twins.at(2 + x, 4 + y, c) = patch.at(x, y, c);
                twins.at(20 + x, 4 + y, c) = patch.at(x, y, c);
            }
    SuperpixelLabeling manual;
    manual.width = 32;
    manual.height = 16;
    manual.labels.assign(32 * 16, 0);
    for (int y = 4; y < 12; ++y)
        for (int x = 20; x < 28; ++x)
            manual.labels[static_cast<std::size_t>(y) * 32 + x] = 1;
    // Relabel everything outside both patches as region 2 to keep patches pure.
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 32; ++x) {
            bool in_a = y >= 4 && y < 12 && x >= 2 && x < 10;
            bool in_b = y >= 4 && y < 12 && x >= 20 && x < 28;
            if (!in_a && !in_b)
                manual.labels[static_cast<std::size_t>(y) * 32 + x] = 2;
            else if (in_a)
                manual.labels[static_cast<std::size_t>(y) * 32 + x] = 0;
        }
    manual.region_count = 3;
    manual.sizes = {64, 64, 32 * 16 - 128};
    manual.centroids = {{5.5, 7.5}, {23.5, 7.5}, {0, 0}};
    auto twin_feats = superpixel_features(twins, manual, 0);
    CHECK(twin_feats[0].color_hist == twin_feats[1].color_hist);
    for (std::size_t i = 0; i < twin_feats[0].hog.size(); ++i)
        CHECK(twin_feats[0].hog[i] == doctest::Approx(twin_feats[1].hog[i]).epsilon(1e-9));
    CHECK(twin_feats[0].cx != twin_feats[1].cx);

    // Constant frame: all features finite.
    RasterU8 flat(16, 16, 3, 128);
    auto flat_feats = superpixel_features(flat, slic(flat, params), 0);
    for (const auto& f : flat_feats) {
        for (double v : f.color_hist)
            CHECK(std::isfinite(v));
        for (double v : f.hog)
            CHECK(std::isfinite(v));
    }
}

namespace {

// Independent all-pairs oracle with its own z-scoring, kept deliberately
// naive: store the full distance matrix, then sort rows.
std::vector<std::vector<std::pair<int, double>>>
knn_oracle(const std::vector<SuperpixelFeature>& feats, int k, const GraphWeights& w) {
    const int n = static_cast<int>(feats.size());
    auto raw = [&](int i, int j, int comp) {
        const SuperpixelFeature &a = feats[static_cast<std::size_t>(i)],
                                &b = feats[static_cast<std::size_t>(j)];
        if (comp == 0)
            return std::hypot(a.cx - b.cx, a.cy - b.cy);
        if (comp == 1) {
            double acc = 0.0;
            for (std::size_t m = 0; m < a.color_hist.size(); ++m) {
                double s = a.color_hist[m] + b.color_hist[m];
                if (s > 0)
                    acc += 0.5 * (a.color_hist[m] - b.color_hist[m]) *
                           (a.color_hist[m] - b.color_hist[m]) / s;
            }
            return acc / a.channels;
        }
        double acc = 0.0;
        for (std::size_t m = 0; m < a.hog.size(); ++m)
            acc += (a.hog[m] - b.hog[m]) * (a.hog[m] - b.hog[m]);
        return std::sqrt(acc);
    };
    double mean[3], sd[3];
    for (int comp = 0; comp < 3; ++comp) {
        std::vector<double> all;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                all.push_back(raw(i, j, comp));
        double s = 0;
        for (double v : all)
            s += v;
        mean[comp] = s / all.size();
        double var = 0;
        for (double v : all)
            var += (v - mean[comp]) * (v - mean[comp]);
        sd[comp] = std::sqrt(var / all.size());
    }
    auto zdist = [&](int i, int j) {
        double d = 0;
        const double weights[3] = {w.w_loc, w.w_color, w.w_hog};
        for (int comp = 0; comp < 3; ++comp)
            if (sd[comp] > 1e-12)
                d += weights[comp] * (raw(i, j, comp) - mean[comp]) / sd[comp];
        return d;
    };
    std::vector<std::vector<std::pair<int, double>>> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> row;
        for (int j = 0; j < n; ++j)
            if (j != i)
                row.emplace_back(zdist(i, j), j);
        std::sort(row.begin(), row.end());
        for (int m = 0; m < std::min(k, n - 1); ++m)
            out[static_cast<std::size_t>(i)].emplace_back(row[static_cast<std::size_t>(m)].second,
                                                          row[static_cast<std::size_t>(m)].first);
    }
    return out;
}

std::vector<SuperpixelFeature> random_features(int n, Rng& rng) {
    std::vector<SuperpixelFeature> feats(static_cast<std::size_t>(n));
    for (auto& f : feats) {
        f.cx = rng.next_double();
        f.cy = rng.next_double();
        f.channels = 3;
        f.color_hist.resize(12);
        double sum = 0;
        for (double& v : f.color_hist)
            sum += v = rng.next_double();
        for (double& v : f.color_hist)
            v /= sum / 3.0; // three unit channel blocks, roughly
        f.hog.resize(18);
        for (double& v : f.hog)
            v = rng.next_double();
    }
    return feats;
}

} // namespace

TEST_CASE("build_nn_graph geometry cases") {
    // Three collinear points with identical appearance: endpoints pick the middle.
    std::vector<SuperpixelFeature> feats(3);
    for (int i = 0; i < 3; ++i) {
        feats[static_cast<std::size_t>(i)].cx = 0.1 + 0.3 * i;
        feats[static_cast<std::size_t>(i)].cy = 0.5;
        feats[static_cast<std::size_t>(i)].channels = 3;
        feats[static_cast<std::size_t>(i)].color_hist = {1, 0, 1, 0, 1, 0};
        feats[static_cast<std::size_t>(i)].hog = {0.5, 0.5};
    }
    NNGraph g1 = build_nn_graph(feats, 1);
    CHECK(g1.neighbors[0][0].first == 1);
    CHECK(g1.neighbors[2][0].first == 1);

    // k >= n-1 yields the complete graph without self loops.
    NNGraph g2 = build_nn_graph(feats, 5);
    CHECK(g2.k == 2);
    for (int i = 0; i < 3; ++i) {
        REQUIRE(g2.neighbors[static_cast<std::size_t>(i)].size() == 2);
        for (const auto& [j, d] : g2.neighbors[static_cast<std::size_t>(i)])
            CHECK(j != i);
    }

    std::vector<SuperpixelFeature> lone(1);
    CHECK_THROWS_AS(build_nn_graph(lone, 1), ValidationError);
}

TEST_CASE("build_nn_graph equals the brute force oracle") {
    Rng rng(501);
    for (int n : {20, 137, 500}) {
        auto feats = random_features(n, rng);
        NNGraph graph = build_nn_graph(feats, 5);
        auto oracle = knn_oracle(feats, 5, GraphWeights{});
        REQUIRE(graph.neighbors.size() == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i) {
            REQUIRE(graph.neighbors[i].size() == oracle[i].size());
            for (std::size_t m = 0; m < oracle[i].size(); ++m) {
                CHECK(graph.neighbors[i][m].first == oracle[i][m].first);
                CHECK(graph.neighbors[i][m].second ==
                      doctest::Approx(oracle[i][m].second).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("propagate_saliency fixed points and hand iterations") {
    NNGraph pair;
    pair.k = 1;
    pair.neighbors = {{{1, 0.0}}, {{0, 0.0}}};

    auto constant = propagate_saliency(pair, {0.3, 0.3}, 9, 0.7);
    CHECK(constant[0] == doctest::Approx(0.3));
    CHECK(constant[1] == doctest::Approx(0.3));

    auto frozen = propagate_saliency(pair, {0.9, 0.1}, 5, 0.0);
    CHECK(frozen[0] == doctest::Approx(0.9));
    CHECK(frozen[1] == doctest::Approx(0.1));

    auto one = propagate_saliency(pair, {1.0, 0.0}, 1, 1.0);
    CHECK(one[0] == doctest::Approx(0.0));
    CHECK(one[1] == doctest::Approx(1.0));
    auto two = propagate_saliency(pair, {1.0, 0.0}, 2, 1.0);
    CHECK(two[0] == doctest::Approx(1.0));
    CHECK(two[1] == doctest::Approx(0.0));

    CHECK_THROWS_AS(propagate_saliency(pair, {0.5}, 1, 0.5), ValidationError);
    CHECK_THROWS_AS(propagate_saliency(pair, {0.5, 2.0}, 1, 0.5), ValidationError);
}

TEST_CASE("propagate_saliency stays in range and near the input") {
    Rng rng(77);
    auto feats = random_features(40, rng);
    NNGraph graph = build_nn_graph(feats, 4);
    std::vector<double> x0(40);
    for (double& v : x0)
        v = rng.next_double();
    double lo = *std::min_element(x0.begin(), x0.end());
    double hi = *std::max_element(x0.begin(), x0.end());

    for (double damping : {0.2, 0.5, 0.9}) {
        auto out = propagate_saliency(graph, x0, 12, damping);
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out[i] >= 0.0);
            CHECK(out[i] <= 1.0);
            // distance to x0 bounded by damping * spread of x0
            CHECK(std::fabs(out[i] - x0[i]) <= damping * (hi - lo) + 1e-12);
        }
    }
}

TEST_CASE("unlc_segment finds the moving square") {
    MovingSquareParams params;
    SyntheticVideo video = moving_square_video(params, 2024);
    std::vector<FlowField> flows = true_flows(video, FlowParams{});
    UnlcConfig cfg = small_video_config();
    ShotSegmentation seg = unlc_segment(video.frames, flows, cfg);
    REQUIRE(seg.frame_probs.size() == video.frames.size());
    double score = mean_shot_iou(seg, video.gt_masks);
    CHECK(score >= 0.5);

    // Determinism.
    ShotSegmentation again = unlc_segment(video.frames, flows, cfg);
    for (std::size_t t = 0; t < seg.frame_probs.size(); ++t)
        CHECK(again.frame_probs[t].data == seg.frame_probs[t].data);
}

TEST_CASE("unlc_segment stays quiet on a static video") {
    SyntheticVideo video = static_video(96, 96, 8, 55);
    std::vector<FlowField> flows = true_flows(video, FlowParams{});
    ShotSegmentation seg = unlc_segment(video.frames, flows, small_video_config());
    double fg = 0.0;
    for (const ProbMap& p : seg.frame_probs) {
        BinaryMask mask = binarize(p, 0.5);
        fg += static_cast<double>(mask.true_count()) / static_cast<double>(mask.pixel_count());
    }
    fg /= static_cast<double>(seg.frame_probs.size());
    CHECK(fg < 0.05);
}

TEST_CASE("unlc_segment is robust to per-frame color jitter") {
    MovingSquareParams params;
    SyntheticVideo video = moving_square_video(params, 31);
    UnlcConfig cfg = small_video_config();

    std::vector<FlowField> clean_flows = true_flows(video, FlowParams{});
    double clean = mean_shot_iou(unlc_segment(video.frames, clean_flows, cfg), video.gt_masks);

    SyntheticVideo jittered = video;
    jittered.frames = color_jitter(video.frames, 0.05, 7);
    std::vector<FlowField> jit_flows = true_flows(jittered, FlowParams{});
    double noisy = mean_shot_iou(unlc_segment(jittered.frames, jit_flows, cfg), video.gt_masks);

    CHECK(clean - noisy < 0.15);
}

TEST_CASE("unlc_segment validates inputs") {
    SyntheticVideo video = static_video(32, 32, 3, 1);
    std::vector<FlowField> flows = true_flows(video, FlowParams{});
    UnlcConfig cfg = small_video_config();
    cfg.slic.target_regions = 32;

    std::vector<RasterU8> one_frame{video.frames[0]};
    CHECK_THROWS_AS(unlc_segment(one_frame, {}, cfg), ValidationError);

    std::vector<FlowField> wrong = flows;
    wrong.pop_back();
    CHECK_THROWS_AS(unlc_segment(video.frames, wrong, cfg), ValidationError);
}

TEST_CASE("angular deviation oracle sanity") {
    // pi/2 deviation scaled by pi is exactly one half.
    CHECK(doctest::Approx(0.5) == (kPi / 2.0) / kPi);
}
