#include "moveseg/unlc.hpp"

#include <algorithm>

namespace moveseg {

void UnlcConfig::validate() const {
    saliency.validate();
    features.validate();
    if (graph_k < 1)
        throw ValidationError("UnlcConfig: graph_k must be >= 1");
    if (propagate_iterations < 0)
        throw ValidationError("UnlcConfig: propagate_iterations must be >= 0");
    if (!(propagate_damping >= 0.0 && propagate_damping <= 1.0))
        throw ValidationError("UnlcConfig: propagate_damping must be in [0, 1]");
}

ShotSegmentation unlc_segment(const std::vector<RasterU8>& frames,
                              const std::vector<FlowField>& flows, const UnlcConfig& config) {
    config.validate();
    if (frames.size() < 2)
        throw ValidationError("unlc_segment: need at least 2 frames");
    if (flows.size() != frames.size() - 1)
        throw ValidationError("unlc_segment: flows must align to consecutive frame pairs");
    for (std::size_t t = 0; t < flows.size(); ++t)
        if (flows[t].width != frames[t].width || flows[t].height != frames[t].height)
            throw ValidationError("unlc_segment: flow/frame dimension mismatch");

    const std::size_t n_frames = frames.size();
    std::vector<SuperpixelLabeling> labelings(n_frames);
    std::vector<SuperpixelFeature> nodes;
    std::vector<double> node_saliency;
    std::vector<std::size_t> node_offset(n_frames);

    for (std::size_t t = 0; t < n_frames; ++t) {
        const FlowField& flow = flows[std::min(t, flows.size() - 1)];
        ProbMap sal = motion_saliency(flow, config.saliency);

        labelings[t] = slic(frames[t], config.slic);
        RasterF64 sal_raster(sal.width, sal.height);
        sal_raster.data = sal.data;
        std::vector<double> means = region_means(labelings[t], sal_raster);

        std::vector<SuperpixelFeature> feats =
            superpixel_features(frames[t], labelings[t], static_cast<int>(t), config.features);
        node_offset[t] = nodes.size();
        nodes.insert(nodes.end(), std::make_move_iterator(feats.begin()),
                     std::make_move_iterator(feats.end()));
        for (double m : means)
            node_saliency.push_back(std::clamp(m, 0.0, 1.0));
    }

    NNGraph graph = build_nn_graph(nodes, config.graph_k, config.graph_weights);
    std::vector<double> propagated = propagate_saliency(graph, node_saliency,
                                                        config.propagate_iterations,
                                                        config.propagate_damping);

    ShotSegmentation seg;
    seg.frame_probs.reserve(n_frames);
    for (std::size_t t = 0; t < n_frames; ++t) {
        const SuperpixelLabeling& lab = labelings[t];
        ProbMap prob(lab.width, lab.height);
        for (std::size_t i = 0; i < prob.data.size(); ++i)
            prob.data[i] = propagated[node_offset[t] + static_cast<std::size_t>(lab.labels[i])];
        seg.frame_probs.push_back(std::move(prob));
    }
    return seg;
}

} // namespace moveseg
