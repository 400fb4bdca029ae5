#pragma once

#include <string>
#include <utility>

#include "moveseg/raster.hpp"

namespace moveseg {

// Dense per-pixel displacement from frame a to frame b, in pixels/frame.
struct FlowField {
    int width = 0;
    int height = 0;
    std::vector<double> u; // x displacement, row-major
    std::vector<double> v; // y displacement

    FlowField() = default;
    FlowField(int w, int h);

    double u_at(int x, int y) const { return u[static_cast<std::size_t>(y) * width + x]; }
    double v_at(int x, int y) const { return v[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

struct FlowParams {
    int pyramid_levels = 4;
    int iterations_per_level = 3;
    int window_radius = 4;

    void validate() const;
};

// Coarse-to-fine local least-squares flow with iterative warping.
// For a global integer translation of magnitude <= 2^(levels-1) * radius on
// textured input, the median flow recovers the shift within 0.5 px per
// component. Degenerate windows (no gradient structure) keep the estimate
// propagated from the coarser level. Deterministic.
FlowField dense_flow(const RasterU8& frame_a, const RasterU8& frame_b,
                     const FlowParams& params);

// Per-pixel sqrt(u^2 + v^2).
RasterF64 flow_magnitude(const FlowField& flow);

// Angle (bin center, radians in [0, 2pi)) of the most populated direction
// bin among pixels with magnitude >= magnitude_floor, and the fraction of
// those qualifying pixels falling in that bin. Bins have width 2pi/angle_bins
// and are centered on 0; ties break toward the smaller bin index. With no
// qualifying pixel, returns (0, 0).
std::pair<double, double> dominant_direction(const FlowField& flow, double magnitude_floor,
                                             int angle_bins);

// Componentwise median; the translation-recovery statistic.
std::pair<double, double> median_flow(const FlowField& flow);

// Dump as two P5 rasters (<base>.u.pgm, <base>.v.pgm) plus a sidecar
// <base>.flowmeta with the affine quantization (scale, offset per component).
void write_flow(const std::string& base_path, const FlowField& flow);
FlowField read_flow(const std::string& base_path);

} // namespace moveseg
