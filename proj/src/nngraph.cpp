#include "moveseg/nngraph.hpp"

#include <algorithm>
#include <cmath>

#include "moveseg/histogram.hpp"
#include "moveseg/hog.hpp"

namespace moveseg {

void FeatureParams::validate() const {
    if (hist_bins < 1 || hog_cell_grid < 1 || hog_orientation_bins < 1)
        throw ValidationError("FeatureParams: all fields must be >= 1");
}

std::vector<SuperpixelFeature> superpixel_features(const RasterU8& raster,
                                                   const SuperpixelLabeling& labeling,
                                                   int frame_index, const FeatureParams& params) {
    params.validate();
    if (raster.width != labeling.width || raster.height != labeling.height)
        throw ValidationError("superpixel_features: dimension mismatch");
    if (raster.width < params.hog_cell_grid || raster.height < params.hog_cell_grid)
        throw ValidationError("superpixel_features: frame smaller than the HOG cell grid");

    const RasterU8 gray = to_grayscale(raster);
    auto pixels = region_pixels(labeling);
    std::vector<SuperpixelFeature> features(pixels.size());
    for (int r = 0; r < labeling.region_count; ++r) {
        SuperpixelFeature& f = features[static_cast<std::size_t>(r)];
        auto [cx, cy] = labeling.centroids[static_cast<std::size_t>(r)];
        f.cx = cx / raster.width;
        f.cy = cy / raster.height;
        f.frame_index = frame_index;
        f.channels = raster.channels;
        f.color_hist =
            color_histogram(raster, pixels[static_cast<std::size_t>(r)], params.hist_bins);

        // Tight box of the region, grown to the cell grid minimum.
        int min_x = raster.width, min_y = raster.height, max_x = -1, max_y = -1;
        for (std::size_t idx : pixels[static_cast<std::size_t>(r)]) {
            int x = static_cast<int>(idx % static_cast<std::size_t>(raster.width));
            int y = static_cast<int>(idx / static_cast<std::size_t>(raster.width));
            min_x = std::min(min_x, x);
            min_y = std::min(min_y, y);
            max_x = std::max(max_x, x);
            max_y = std::max(max_y, y);
        }
        auto grow = [](int& lo, int& hi, int min_side, int limit) {
            while (hi - lo + 1 < min_side) {
                if (lo > 0)
                    --lo;
                if (hi - lo + 1 < min_side && hi < limit - 1)
                    ++hi;
            }
        };
        grow(min_x, max_x, params.hog_cell_grid, raster.width);
        grow(min_y, max_y, params.hog_cell_grid, raster.height);
        f.hog = hog_descriptor(gray, {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1},
                               params.hog_cell_grid, params.hog_orientation_bins);
    }
    return features;
}

namespace {

struct ComponentStats {
    double mean = 0.0, stddev = 0.0;
};

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

struct RawDistances {
    double loc, color, hog;
};

RawDistances raw_distances(const SuperpixelFeature& a, const SuperpixelFeature& b) {
    return {std::hypot(a.cx - b.cx, a.cy - b.cy),
            chi_square(a.color_hist, b.color_hist, a.channels), euclid(a.hog, b.hog)};
}

} // namespace

NNGraph build_nn_graph(const std::vector<SuperpixelFeature>& features, int k,
                       const GraphWeights& weights) {
    const std::size_t n = features.size();
    if (n < 2)
        throw ValidationError("build_nn_graph: need at least 2 nodes");
    if (k < 1)
        throw ValidationError("build_nn_graph: k must be >= 1");
    const int k_eff = std::min<int>(k, static_cast<int>(n) - 1);

    // Pass 1: moments of each distance component over all pairs.
    double sum_l = 0, sum_c = 0, sum_h = 0, sq_l = 0, sq_c = 0, sq_h = 0;
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            RawDistances d = raw_distances(features[i], features[j]);
            sum_l += d.loc;
            sum_c += d.color;
            sum_h += d.hog;
            sq_l += d.loc * d.loc;
            sq_c += d.color * d.color;
            sq_h += d.hog * d.hog;
        }
    }
    auto stats_of = [&](double sum, double sq) {
        ComponentStats s;
        s.mean = sum / pairs;
        double var = std::max(sq / pairs - s.mean * s.mean, 0.0);
        s.stddev = std::sqrt(var);
        return s;
    };
    ComponentStats sl = stats_of(sum_l, sq_l), sc = stats_of(sum_c, sq_c),
                   sh = stats_of(sum_h, sq_h);
    auto z = [](double v, const ComponentStats& s) {
        return s.stddev > 1e-12 ? (v - s.mean) / s.stddev : 0.0;
    };

    // Pass 2: exact k-NN per node under the mixed z-scored distance.
    NNGraph graph;
    graph.k = k_eff;
    graph.neighbors.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> cand;
        cand.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            RawDistances d = raw_distances(features[i], features[j]);
            double dist = weights.w_loc * z(d.loc, sl) + weights.w_color * z(d.color, sc) +
                          weights.w_hog * z(d.hog, sh);
            cand.emplace_back(dist, static_cast<int>(j));
        }
        std::partial_sort(cand.begin(), cand.begin() + k_eff, cand.end());
        graph.neighbors[i].reserve(static_cast<std::size_t>(k_eff));
        for (int m = 0; m < k_eff; ++m)
            graph.neighbors[i].emplace_back(cand[static_cast<std::size_t>(m)].second,
                                            cand[static_cast<std::size_t>(m)].first);
    }
    return graph;
}

std::vector<double> propagate_saliency(const NNGraph& graph, const std::vector<double>& initial,
                                       int iterations, double damping) {
    if (initial.size() != graph.neighbors.size())
        throw ValidationError("propagate_saliency: size mismatch between graph and saliency");
    if (!(damping >= 0.0 && damping <= 1.0))
        throw ValidationError("propagate_saliency: damping must be in [0, 1]");
    if (iterations < 0)
        throw ValidationError("propagate_saliency: iterations must be >= 0");
    for (double v : initial)
        if (!(v >= 0.0 && v <= 1.0))
            throw ValidationError("propagate_saliency: initial values must be in [0, 1]");

    std::vector<double> x = initial, next(initial.size());
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            double nbr_mean = 0.0;
            for (const auto& [j, dist] : graph.neighbors[i])
                nbr_mean += x[static_cast<std::size_t>(j)];
            nbr_mean /= static_cast<double>(graph.neighbors[i].size());
            next[i] = (1.0 - damping) * initial[i] + damping * nbr_mean;
        }
        x.swap(next);
    }
    for (double& v : x)
        v = std::clamp(v, 0.0, 1.0);
    return x;
}

} // namespace moveseg
