#pragma once

#include <cstdint>
#include <optional>

#include "moveseg/raster.hpp"

namespace moveseg {

enum class Side { left, right, top, bottom };

// Boundary noise: a seeded fair coin picks erosion or dilation with the
// given odd kernel.
BinaryMask degrade_boundary(const BinaryMask& mask, int kernel_size, std::uint64_t rng_seed);

// Truncation: inside the tight box, zero a full-height (left/right) or
// full-width (top/bottom) strip whose thickness is round(area_fraction *
// perpendicular box extent), anchored at `side`. When side is not given it
// is picked from rng_seed.
BinaryMask degrade_truncate(const BinaryMask& mask, double area_fraction,
                            std::optional<Side> side, std::uint64_t rng_seed = 0);

} // namespace moveseg
