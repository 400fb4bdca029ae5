#pragma once

#include <cstdint>
#include <vector>

#include "moveseg/error.hpp"

namespace moveseg {

// 8-bit raster, row-major, interleaved channels (1 = gray, 3 = RGB).
struct RasterU8 {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;

    RasterU8() = default;
    RasterU8(int w, int h, int c, std::uint8_t fill = 0);

    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

// Real-valued raster, single channel. Carries flow magnitudes, saliency
// before normalization, and other intermediates with no range constraint.
struct RasterF64 {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    RasterF64() = default;
    RasterF64(int w, int h, double fill = 0.0);

    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

// Per-pixel probability map; every value must lie in [0, 1].
struct ProbMap {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    ProbMap() = default;
    ProbMap(int w, int h, double fill = 0.0);

    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    // Throws ValidationError if any value is outside [0, 1] or non-finite.
    void validate() const;
};

// Binary mask; stored as 0/1 bytes.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false);

    bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    std::size_t true_count() const;
};

// Axis-aligned box, top-left inclusive.
struct BBox {
    int x = 0;
    int y = 0;
    int w = 1;
    int h = 1;

    bool operator==(const BBox&) const = default;
};

// Smallest box containing every true pixel. Throws ValidationError on an
// all-false mask.
BBox tight_bbox(const BinaryMask& mask);

// Clamp a box to raster bounds, keeping w,h >= 1.
BBox clamp_bbox(const BBox& box, int width, int height);

// Rec. 601 luma, rounded. 1-channel input passes through.
RasterU8 to_grayscale(const RasterU8& raster);

// BinaryMask viewed as a {0,1} probability map, so degradations and trimaps
// share one code path with uNLC output.
ProbMap mask_to_prob(const BinaryMask& mask);

// Threshold with strict `>`: p > threshold becomes foreground.
BinaryMask binarize(const ProbMap& prob, double threshold);

} // namespace moveseg
