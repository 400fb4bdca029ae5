#pragma once

#include <cstdint>
#include <utility>

#include "moveseg/raster.hpp"

namespace moveseg {

struct JitterParams {
    double scale_min = 0.8;
    double scale_max = 1.25;
    double translate_range = 0.15; // fraction of box size
    double context_pad = 0.25;     // fraction of box size, per side
    std::uint64_t rng_seed = 0;

    void validate() const;

    static JitterParams identity(std::uint64_t seed = 0) {
        return {1.0, 1.0, 0.0, 0.0, seed};
    }
};

// The jittered crop box: tight box of the binarized foreground, padded by
// context_pad per side, scaled about its center by a seeded factor in
// [scale_min, scale_max], shifted by seeded offsets up to translate_range
// times its size, then clamped to the frame. Exposed so the box arithmetic
// is testable on its own.
BBox compute_crop_box(const ProbMap& prob, const JitterParams& jitter, double fg_threshold,
                      int frame_width, int frame_height);

// Crop and resample to w x w: bilinear for the image, area-average for the
// probability map. Throws ValidationError when no pixel clears fg_threshold.
std::pair<RasterU8, ProbMap> sample_crop(const RasterU8& image, const ProbMap& prob,
                                         const JitterParams& jitter, int w,
                                         double fg_threshold);

} // namespace moveseg
