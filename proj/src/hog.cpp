#include "moveseg/hog.hpp"

#include <algorithm>
#include <cmath>

namespace moveseg {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kNormEps = 1e-6;
} // namespace

std::vector<double> hog_descriptor(const RasterU8& gray, const BBox& box, int cell_grid,
                                   int orientation_bins) {
    if (gray.channels != 1)
        throw ValidationError("hog_descriptor: raster must be grayscale");
    if (cell_grid < 1 || orientation_bins < 1)
        throw ValidationError("hog_descriptor: cell_grid and orientation_bins must be >= 1");
    if (box.x < 0 || box.y < 0 || box.x + box.w > gray.width || box.y + box.h > gray.height)
        throw ValidationError("hog_descriptor: region_bbox outside raster");
    if (box.w < cell_grid || box.h < cell_grid)
        throw ValidationError("hog_descriptor: degenerate region (smaller than cell grid)");

    std::vector<double> desc(static_cast<std::size_t>(cell_grid) * cell_grid * orientation_bins,
                             0.0);
    for (int y = box.y; y < box.y + box.h; ++y) {
        int ym = std::max(y - 1, 0), yp = std::min(y + 1, gray.height - 1);
        for (int x = box.x; x < box.x + box.w; ++x) {
            int xm = std::max(x - 1, 0), xp = std::min(x + 1, gray.width - 1);
            double gx = (static_cast<double>(gray.at(xp, y)) - gray.at(xm, y)) * 0.5;
            double gy = (static_cast<double>(gray.at(x, yp)) - gray.at(x, ym)) * 0.5;
            double mag = std::hypot(gx, gy);
            if (mag == 0.0)
                continue;
            double angle = std::atan2(gy, gx);
            if (angle < 0.0)
                angle += kPi; // unsigned orientation
            if (angle >= kPi)
                angle -= kPi;
            int obin = std::min(orientation_bins - 1,
                                static_cast<int>(angle / kPi * orientation_bins));
            int cx = std::min(cell_grid - 1, (x - box.x) * cell_grid / box.w);
            int cy = std::min(cell_grid - 1, (y - box.y) * cell_grid / box.h);
            desc[(static_cast<std::size_t>(cy) * cell_grid + cx) * orientation_bins + obin] += mag;
        }
    }

    double sum_sq = 0.0;
    for (double v : desc)
        sum_sq += v * v;
    double inv_norm = 1.0 / std::sqrt(sum_sq + kNormEps * kNormEps);
    if (sum_sq == 0.0)
        return desc; // all-zeros stays all-zeros
    for (double& v : desc)
        v *= inv_norm;
    return desc;
}

} // namespace moveseg
