#pragma once

#include <cstdint>
#include <string>

#include "moveseg/crops.hpp"
#include "moveseg/dataset.hpp"
#include "moveseg/learner.hpp"
#include "moveseg/nngraph.hpp"
#include "moveseg/optflow.hpp"
#include "moveseg/saliency.hpp"
#include "moveseg/shots.hpp"
#include "moveseg/superpixel.hpp"
#include "moveseg/trimap.hpp"
#include "moveseg/unlc.hpp"

namespace moveseg {

// Every pipeline parameter, file-configurable as flat `key = value` lines
// with dotted section prefixes. Unknown keys are rejected; '#' starts a
// comment.
struct PipelineConfig {
    std::uint64_t seed = 42;
    int workers = 1;

    FlowParams flow;
    SaliencyParams saliency;
    SlicParams slic;
    FeatureParams features;

    int graph_k = 8;
    GraphWeights graph_weights;
    int propagate_iterations = 10;
    double propagate_damping = 0.5;

    int shots_hist_bins = 16;
    double shots_cut_threshold = 0.3;
    PruneParams prune;

    JitterParams jitter;
    TrimapParams trimap;
    int crop_size = 64;
    int target_size = 16;
    bool crop_to_object = true;

    std::string net_arch = "conv:8:3:2,conv:16:3:2,conv:32:3:2";
    TrainConfig train;
    double eval_binarize_threshold = 0.5;

    UnlcConfig unlc_config() const;
    DatasetParams dataset_params() const;
    NetSpec net_spec() const;

    // Checks every invariant; a violation names the offending key.
    void validate() const;
};

// Throws ValidationError for unknown keys or unparseable values.
void apply_config_entry(PipelineConfig& config, const std::string& key,
                        const std::string& value);

PipelineConfig parse_config_text(const std::string& text, const std::string& origin);
PipelineConfig parse_config_file(const std::string& path);

// All keys with their default values, parseable back into a PipelineConfig.
std::string config_defaults_text();

} // namespace moveseg
