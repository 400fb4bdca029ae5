#pragma once

#include "moveseg/raster.hpp"

namespace moveseg {

// Area-average (exact fractional pixel overlap) of the ground-truth mask
// onto an s x s grid. Each output cell is the mean of the input pixels it
// covers, so the foreground fraction is preserved exactly.
ProbMap downsample_mask(const BinaryMask& mask, int s);

// Area-average a box region of a probability map to out_w x out_h.
ProbMap area_resample(const ProbMap& prob, const BBox& box, int out_w, int out_h);

// Bilinear resize of a box region, per channel, half-pixel centers, samples
// clamped to the box.
RasterU8 bilinear_resample(const RasterU8& raster, const BBox& box, int out_w, int out_h);

} // namespace moveseg
