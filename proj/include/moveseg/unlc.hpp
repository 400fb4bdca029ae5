#pragma once

#include <vector>

#include "moveseg/nngraph.hpp"
#include "moveseg/optflow.hpp"
#include "moveseg/saliency.hpp"
#include "moveseg/superpixel.hpp"

namespace moveseg {

// Per-frame foreground probability for one shot.
struct ShotSegmentation {
    std::vector<ProbMap> frame_probs;
};

struct UnlcConfig {
    SaliencyParams saliency;
    SlicParams slic;
    FeatureParams features;
    int graph_k = 8;
    GraphWeights graph_weights;
    int propagate_iterations = 10;
    double propagate_damping = 0.5;

    void validate() const;
};

// The full per-shot chain: motion saliency per frame, averaged over
// superpixels, a nearest-neighbor graph pooled across the shot's frames,
// saliency voting over that graph, and the per-node result painted back to
// pixels. Frame t pairs with flow t -> t+1; the last frame reuses the final
// flow. Deterministic for fixed inputs and config.
ShotSegmentation unlc_segment(const std::vector<RasterU8>& frames,
                              const std::vector<FlowField>& flows, const UnlcConfig& config);

} // namespace moveseg
