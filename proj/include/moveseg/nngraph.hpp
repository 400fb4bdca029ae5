#pragma once

#include <utility>
#include <vector>

#include "moveseg/raster.hpp"
#include "moveseg/superpixel.hpp"

namespace moveseg {

// Location + appearance descriptor of one superpixel.
struct SuperpixelFeature {
    double cx = 0.0, cy = 0.0;       // centroid normalized to [0, 1]^2
    std::vector<double> color_hist;  // per-channel concatenated histogram
    std::vector<double> hog;
    int frame_index = 0;
    int channels = 3;
};

struct FeatureParams {
    int hist_bins = 16;
    int hog_cell_grid = 4;
    int hog_orientation_bins = 9;

    void validate() const;
};

// One feature per region of the labeling. HOG is computed over each region's
// tight box, grown to at least the cell grid per side (frames must be at
// least hog_cell_grid pixels on each side).
std::vector<SuperpixelFeature> superpixel_features(const RasterU8& raster,
                                                   const SuperpixelLabeling& labeling,
                                                   int frame_index,
                                                   const FeatureParams& params = {});

// k-nearest-neighbor graph; neighbor lists hold (node id, distance) sorted
// by distance (ties by id), no self-edges, k identical across nodes.
struct NNGraph {
    int k = 0;
    std::vector<std::vector<std::pair<int, double>>> neighbors;

    int node_count() const { return static_cast<int>(neighbors.size()); }
};

struct GraphWeights {
    double w_loc = 1.0;
    double w_color = 1.0;
    double w_hog = 1.0;
};

// Exact k-NN over all superpixels of the shot (all frames pooled) under
//   d = w_loc * |dcentroid| + w_color * chi2(hists) + w_hog * |dhog|
// with each component z-score normalized over all node pairs before mixing.
NNGraph build_nn_graph(const std::vector<SuperpixelFeature>& features, int k,
                       const GraphWeights& weights = {});

// Synchronous voting iteration
//   x <- (1 - damping) * x0 + damping * (mean of neighbors' x)
// for a fixed iteration count; the result stays inside [min x0, max x0] and
// is clamped to [0, 1].
std::vector<double> propagate_saliency(const NNGraph& graph, const std::vector<double>& initial,
                                       int iterations, double damping);

} // namespace moveseg
