#pragma once

#include <cstdint>
#include <vector>

#include "moveseg/raster.hpp"

namespace moveseg {

// Per-channel histograms, concatenated. Each channel block is L1-normalized
// to 1, so the whole vector sums to the channel count. Bin of an 8-bit value
// v is v * bins / 256. `region` holds row-major pixel indices.
std::vector<double> color_histogram(const RasterU8& raster,
                                    const std::vector<std::size_t>& region,
                                    int bins_per_channel);

// Whole-frame variant.
std::vector<double> frame_histogram(const RasterU8& raster, int bins_per_channel);

// Chi-square distance between two concatenated per-channel histograms,
// averaged over channel blocks so the result lies in [0, 1]:
//   (1/C) * sum_c  0.5 * sum_b (p_b - q_b)^2 / (p_b + q_b)
// Terms with p_b + q_b = 0 contribute nothing.
double chi_square(const std::vector<double>& a, const std::vector<double>& b, int channels);

} // namespace moveseg
