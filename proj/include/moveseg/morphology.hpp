#pragma once

#include "moveseg/raster.hpp"

namespace moveseg {

// Binary morphology with a square structuring element of odd side
// kernel_size. Out-of-frame pixels are background for both operations.
// Throws ValidationError on an even or non-positive kernel.

BinaryMask erode(const BinaryMask& mask, int kernel_size);
BinaryMask dilate(const BinaryMask& mask, int kernel_size);

} // namespace moveseg
