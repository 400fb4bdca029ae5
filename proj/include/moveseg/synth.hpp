#pragma once

#include <cstdint>
#include <vector>

#include "moveseg/raster.hpp"

namespace moveseg {

// Seeded synthetic fixtures used by tests, the acceptance suite and the
// `synth` command. All generators are deterministic in their seed.

// Band-limited RGB texture: smoothed noise stretched to full contrast.
RasterU8 textured_frame(int width, int height, std::uint64_t seed);

struct SyntheticVideo {
    std::vector<RasterU8> frames;
    std::vector<BinaryMask> gt_masks;
};

struct MovingSquareParams {
    int width = 96;
    int height = 96;
    int frame_count = 8;
    double square_area_fraction = 0.10; // square covers this share of pixels
    int speed = 4;                      // px/frame along a seeded axis direction
};

// A textured square translating over a static textured background. Ground
// truth is exact. The square stays fully inside the frame.
SyntheticVideo moving_square_video(const MovingSquareParams& params, std::uint64_t seed);

// The same textured background repeated; ground truth all-false.
SyntheticVideo static_video(int width, int height, int frame_count, std::uint64_t seed);

// Per-frame color jitter: each channel scaled by a seeded gain in
// [1-strength, 1+strength], clamped to 8 bits.
std::vector<RasterU8> color_jitter(const std::vector<RasterU8>& frames, double strength,
                                   std::uint64_t seed);

struct ShapesSample {
    RasterU8 image;      // solid-color ellipse or rectangle on a textured background
    BinaryMask gt_mask;  // clean ground truth
};

// One sample of the shapes benchmark: a random ellipse or axis-aligned
// rectangle with seeded position, size, aspect and color.
ShapesSample shapes_sample(int size, std::uint64_t seed);

} // namespace moveseg
