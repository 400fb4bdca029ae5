#include "moveseg/degrade.hpp"

#include <cmath>

#include "moveseg/morphology.hpp"
#include "moveseg/rng.hpp"

namespace moveseg {

BinaryMask degrade_boundary(const BinaryMask& mask, int kernel_size, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    return rng.coin() ? dilate(mask, kernel_size) : erode(mask, kernel_size);
}

BinaryMask degrade_truncate(const BinaryMask& mask, double area_fraction,
                            std::optional<Side> side, std::uint64_t rng_seed) {
    if (!(area_fraction >= 0.0 && area_fraction < 1.0))
        throw ValidationError("degrade_truncate: area_fraction must be in [0, 1)");
    BBox box = tight_bbox(mask); // throws on an empty mask
    Side s = side ? *side : static_cast<Side>(Rng(rng_seed).next_below(4));

    BinaryMask out = mask;
    const bool vertical_strip = s == Side::left || s == Side::right;
    const int extent = vertical_strip ? box.w : box.h;
    const int thickness = static_cast<int>(std::lround(area_fraction * extent));
    if (thickness == 0)
        return out;

    int x0 = box.x, x1 = box.x + box.w; // exclusive
    int y0 = box.y, y1 = box.y + box.h;
    switch (s) {
    case Side::left: x1 = box.x + thickness; break;
    case Side::right: x0 = box.x + box.w - thickness; break;
    case Side::top: y1 = box.y + thickness; break;
    case Side::bottom: y0 = box.y + box.h - thickness; break;
    }
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
            out.set(x, y, false);
    return out;
}

} // namespace moveseg
