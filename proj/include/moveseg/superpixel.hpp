#pragma once

#include <string>
#include <utility>
#include <vector>

#include "moveseg/raster.hpp"

namespace moveseg {

// Dense superpixel labeling. Region ids are exactly 0..region_count-1 with
// no gaps, every pixel is labeled, every region is 4-connected, and sizes
// sum to width * height.
struct SuperpixelLabeling {
    int width = 0;
    int height = 0;
    std::vector<int> labels; // row-major region ids
    int region_count = 0;
    std::vector<std::pair<double, double>> centroids; // per-region (x, y)
    std::vector<int> sizes;                           // per-region pixel counts

    int label_at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

enum class SlicColorSpace {
    lab, // CIELAB from 8-bit sRGB; the default distance space
    rgb  // raw channel-symmetric distance, used where channel equivariance matters
};

struct SlicParams {
    int target_regions = 300;
    double compactness = 10.0;
    int iterations = 10;
    SlicColorSpace colorspace = SlicColorSpace::lab;

    void validate(std::size_t pixel_count) const;
};

// Grid-seeded k-means over (color, position) with spatial search windows,
// then a connectivity pass: components smaller than (pixels/target)/4 merge
// into the neighbor sharing the longest boundary; larger detached components
// become regions of their own. Deterministic.
SuperpixelLabeling slic(const RasterU8& rgb, const SlicParams& params);

// Exact arithmetic mean of `values` per region.
std::vector<double> region_means(const SuperpixelLabeling& labeling, const RasterF64& values);

// Row-major pixel indices per region.
std::vector<std::vector<std::size_t>> region_pixels(const SuperpixelLabeling& labeling);

// One-line text header "width height region_count\n" followed by the label
// grid as 16-bit big-endian values.
void write_labeling(const std::string& path, const SuperpixelLabeling& labeling);
SuperpixelLabeling read_labeling(const std::string& path);

} // namespace moveseg
