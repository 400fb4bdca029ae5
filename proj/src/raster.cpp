#include "moveseg/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace moveseg {

namespace {

void check_dims(int w, int h, const char* what) {
    if (w < 1 || h < 1)
        throw ValidationError(std::string(what) + ": dimensions must be >= 1");
}

} // namespace

RasterU8::RasterU8(int w, int h, int c, std::uint8_t fill)
    : width(w), height(h), channels(c),
      data(static_cast<std::size_t>(std::max(w, 0)) * std::max(h, 0) * std::max(c, 0), fill) {
    check_dims(w, h, "RasterU8");
    if (c != 1 && c != 3)
        throw ValidationError("RasterU8: channels must be 1 or 3");
}

RasterF64::RasterF64(int w, int h, double fill)
    : width(w), height(h), data(static_cast<std::size_t>(std::max(w, 0)) * std::max(h, 0), fill) {
    check_dims(w, h, "RasterF64");
}

ProbMap::ProbMap(int w, int h, double fill)
    : width(w), height(h), data(static_cast<std::size_t>(std::max(w, 0)) * std::max(h, 0), fill) {
    check_dims(w, h, "ProbMap");
}

void ProbMap::validate() const {
    for (double v : data)
        if (!(v >= 0.0 && v <= 1.0))
            throw ValidationError("ProbMap: value outside [0, 1]");
}

BinaryMask::BinaryMask(int w, int h, bool fill)
    : width(w), height(h),
      data(static_cast<std::size_t>(std::max(w, 0)) * std::max(h, 0), fill ? 1 : 0) {
    check_dims(w, h, "BinaryMask");
}

std::size_t BinaryMask::true_count() const {
    return static_cast<std::size_t>(std::count_if(data.begin(), data.end(),
                                                  [](std::uint8_t v) { return v != 0; }));
}

BBox tight_bbox(const BinaryMask& mask) {
    int min_x = mask.width, min_y = mask.height, max_x = -1, max_y = -1;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y))
                continue;
            min_x = std::min(min_x, x);
            min_y = std::min(min_y, y);
            max_x = std::max(max_x, x);
            max_y = std::max(max_y, y);
        }
    }
    if (max_x < 0)
        throw ValidationError("tight_bbox: mask has no true pixel");
    return {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

BBox clamp_bbox(const BBox& box, int width, int height) {
    int x0 = std::clamp(box.x, 0, width - 1);
    int y0 = std::clamp(box.y, 0, height - 1);
    int x1 = std::clamp(box.x + box.w, x0 + 1, width);
    int y1 = std::clamp(box.y + box.h, y0 + 1, height);
    return {x0, y0, x1 - x0, y1 - y0};
}

RasterU8 to_grayscale(const RasterU8& raster) {
    if (raster.channels == 1)
        return raster;
    RasterU8 out(raster.width, raster.height, 1);
    for (int y = 0; y < raster.height; ++y) {
        for (int x = 0; x < raster.width; ++x) {
            double l = 0.299 * raster.at(x, y, 0) + 0.587 * raster.at(x, y, 1) +
                       0.114 * raster.at(x, y, 2);
            out.at(x, y) = static_cast<std::uint8_t>(std::lround(l));
        }
    }
    return out;
}

ProbMap mask_to_prob(const BinaryMask& mask) {
    ProbMap out(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.data.size(); ++i)
        out.data[i] = mask.data[i] ? 1.0 : 0.0;
    return out;
}

BinaryMask binarize(const ProbMap& prob, double threshold) {
    BinaryMask out(prob.width, prob.height);
    for (std::size_t i = 0; i < prob.data.size(); ++i)
        out.data[i] = prob.data[i] > threshold ? 1 : 0;
    return out;
}

} // namespace moveseg
