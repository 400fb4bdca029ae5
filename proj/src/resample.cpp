#include "moveseg/resample.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace moveseg {

namespace {

struct Overlap {
    int first;                   // first source index
    std::vector<double> weights; // per-source-cell overlap lengths
};

// Overlaps of output cell i (of `out` cells spanning `extent` source cells,
// offset by `origin`) with unit source cells.
std::vector<Overlap> overlaps_1d(int origin, int extent, int out) {
    std::vector<Overlap> table(out);
    const double step = static_cast<double>(extent) / out;
    for (int i = 0; i < out; ++i) {
        double lo = origin + i * step;
        double hi = origin + (i + 1) * step;
        int first = static_cast<int>(std::floor(lo));
        int last = static_cast<int>(std::ceil(hi)) - 1;
        last = std::max(last, first);
        Overlap ov;
        ov.first = first;
        ov.weights.resize(static_cast<std::size_t>(last - first + 1));
        for (int c = first; c <= last; ++c) {
            double w = std::min(hi, static_cast<double>(c + 1)) -
                       std::max(lo, static_cast<double>(c));
            ov.weights[static_cast<std::size_t>(c - first)] = std::max(w, 0.0);
        }
        table[i] = std::move(ov);
    }
    return table;
}

template <typename Fetch>
ProbMap area_resample_impl(const BBox& box, int out_w, int out_h, Fetch fetch) {
    if (out_w < 1 || out_h < 1)
        throw ValidationError("area_resample: output dimensions must be >= 1");
    auto cols = overlaps_1d(box.x, box.w, out_w);
    auto rows = overlaps_1d(box.y, box.h, out_h);
    const double cell_area =
        (static_cast<double>(box.w) / out_w) * (static_cast<double>(box.h) / out_h);
    ProbMap out(out_w, out_h);
    for (int oy = 0; oy < out_h; ++oy) {
        const Overlap& ry = rows[oy];
        for (int ox = 0; ox < out_w; ++ox) {
            const Overlap& rx = cols[ox];
            double acc = 0.0;
            for (std::size_t wy = 0; wy < ry.weights.size(); ++wy) {
                int y = ry.first + static_cast<int>(wy);
                double row_acc = 0.0;
                for (std::size_t wx = 0; wx < rx.weights.size(); ++wx)
                    row_acc += rx.weights[wx] * fetch(rx.first + static_cast<int>(wx), y);
                acc += ry.weights[wy] * row_acc;
            }
            out.at(ox, oy) = std::clamp(acc / cell_area, 0.0, 1.0);
        }
    }
    return out;
}

} // namespace

ProbMap downsample_mask(const BinaryMask& mask, int s) {
    if (s < 1)
        throw ValidationError("downsample_mask: s must be >= 1");
    BBox full{0, 0, mask.width, mask.height};
    return area_resample_impl(full, s, s,
                              [&](int x, int y) { return mask.at(x, y) ? 1.0 : 0.0; });
}

ProbMap area_resample(const ProbMap& prob, const BBox& box, int out_w, int out_h) {
    if (box.x < 0 || box.y < 0 || box.x + box.w > prob.width || box.y + box.h > prob.height)
        throw ValidationError("area_resample: box outside raster");
    return area_resample_impl(box, out_w, out_h, [&](int x, int y) { return prob.at(x, y); });
}

RasterU8 bilinear_resample(const RasterU8& raster, const BBox& box, int out_w, int out_h) {
    if (box.x < 0 || box.y < 0 || box.x + box.w > raster.width || box.y + box.h > raster.height)
        throw ValidationError("bilinear_resample: box outside raster");
    if (out_w < 1 || out_h < 1)
        throw ValidationError("bilinear_resample: output dimensions must be >= 1");
    RasterU8 out(out_w, out_h, raster.channels);
    const double sx = static_cast<double>(box.w) / out_w;
    const double sy = static_cast<double>(box.h) / out_h;
    for (int oy = 0; oy < out_h; ++oy) {
        double fy = box.y + (oy + 0.5) * sy - 0.5;
        fy = std::clamp(fy, static_cast<double>(box.y), static_cast<double>(box.y + box.h - 1));
        int y0 = static_cast<int>(std::floor(fy));
        int y1 = std::min(y0 + 1, box.y + box.h - 1);
        double ty = fy - y0;
        for (int ox = 0; ox < out_w; ++ox) {
            double fx = box.x + (ox + 0.5) * sx - 0.5;
            fx = std::clamp(fx, static_cast<double>(box.x),
                            static_cast<double>(box.x + box.w - 1));
            int x0 = static_cast<int>(std::floor(fx));
            int x1 = std::min(x0 + 1, box.x + box.w - 1);
            double tx = fx - x0;
            for (int c = 0; c < raster.channels; ++c) {
                double top = (1.0 - tx) * raster.at(x0, y0, c) + tx * raster.at(x1, y0, c);
                double bot = (1.0 - tx) * raster.at(x0, y1, c) + tx * raster.at(x1, y1, c);
                double v = (1.0 - ty) * top + ty * bot;
                out.at(ox, oy, c) = static_cast<std::uint8_t>(std::lround(v));
            }
        }
    }
    return out;
}

} // namespace moveseg
