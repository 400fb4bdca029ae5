#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moveseg/raster.hpp"

namespace moveseg {

enum class TriLabel : std::uint8_t { negative = 0, dont_care = 1, positive = 2 };

// Three-way training target: the loss sees positives and negatives only.
struct Trimap {
    int width = 0;
    int height = 0;
    std::vector<TriLabel> data;

    Trimap() = default;
    Trimap(int w, int h, TriLabel fill = TriLabel::dont_care);

    TriLabel at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    TriLabel& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

struct TrimapParams {
    double neg_threshold = 0.4;
    double pos_threshold = 0.7;

    void validate() const;
};

// Strict thresholds: p < neg_threshold is negative, p > pos_threshold is
// positive, everything else (including exact threshold values) is don't-care.
Trimap to_trimap(const ProbMap& prob, const TrimapParams& params);

// P5 encoding: 0 = negative, 128 = dont_care, 255 = positive.
void write_trimap_pgm(const std::string& path, const Trimap& trimap);
Trimap read_trimap_pgm(const std::string& path);

} // namespace moveseg
