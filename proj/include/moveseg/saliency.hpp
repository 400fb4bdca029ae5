#pragma once

#include "moveseg/optflow.hpp"
#include "moveseg/raster.hpp"

namespace moveseg {

struct SaliencyParams {
    // A pixel "moves" when its flow magnitude exceeds this.
    double static_motion_threshold = 0.5;
    // The frame is "mostly static" when fewer than this fraction of pixels move.
    double static_frame_fraction = 0.25;
    int angle_bins = 16;

    void validate() const;
};

// Per-pixel motion saliency in [0, 1].
//
// Mostly-static frame: saliency = magnitude / (99th-percentile magnitude),
// clamped. Frame with significant motion: saliency of each moving pixel is
// its angular deviation from the dominant direction divided by pi; pixels
// below the motion threshold get 0. Zero flow maps to zero in both branches.
ProbMap motion_saliency(const FlowField& flow, const SaliencyParams& params);

} // namespace moveseg
