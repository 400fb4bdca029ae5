#pragma once

#include <vector>

#include "moveseg/raster.hpp"

namespace moveseg {

// Histogram-of-oriented-gradients descriptor over a box region of a grayscale
// raster. The box is split into cell_grid x cell_grid cells; gradient
// magnitude votes into unsigned orientation bins (angles folded to [0, pi)).
// The concatenated vector is L2-normalized as one block with epsilon 1e-6,
// so an all-zero-gradient region yields the all-zeros descriptor.
//
// Descriptor length: cell_grid^2 * orientation_bins.
std::vector<double> hog_descriptor(const RasterU8& gray, const BBox& region_bbox,
                                   int cell_grid, int orientation_bins);

} // namespace moveseg
