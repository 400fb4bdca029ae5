#include "moveseg/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace moveseg {

namespace {
constexpr double kPi = 3.14159265358979323846;

double circular_distance(double a, double b) {
    double d = std::fmod(std::fabs(a - b), 2.0 * kPi);
    return d > kPi ? 2.0 * kPi - d : d;
}
} // namespace

void SaliencyParams::validate() const {
    if (!(static_frame_fraction > 0.0 && static_frame_fraction < 1.0))
        throw ValidationError("SaliencyParams: static_frame_fraction must be in (0, 1)");
    if (!(static_motion_threshold > 0.0))
        throw ValidationError("SaliencyParams: static_motion_threshold must be > 0");
    if (angle_bins < 4)
        throw ValidationError("SaliencyParams: angle_bins must be >= 4");
}

ProbMap motion_saliency(const FlowField& flow, const SaliencyParams& params) {
    params.validate();
    const std::size_t n = flow.pixel_count();
    RasterF64 mag = flow_magnitude(flow);

    std::size_t moving = 0;
    for (double m : mag.data)
        if (m > params.static_motion_threshold)
            ++moving;
    const double moving_fraction = static_cast<double>(moving) / static_cast<double>(n);

    ProbMap out(flow.width, flow.height);
    if (moving_fraction < params.static_frame_fraction) {
        // Mostly static: normalize magnitudes by the 99th percentile.
        std::vector<double> sorted = mag.data;
        std::size_t rank = static_cast<std::size_t>(
            std::ceil(0.99 * static_cast<double>(n))); // nearest-rank percentile
        rank = std::clamp<std::size_t>(rank, 1, n);
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                         sorted.end());
        double p99 = sorted[rank - 1];
        if (p99 > 0.0)
            for (std::size_t i = 0; i < n; ++i)
                out.data[i] = std::clamp(mag.data[i] / p99, 0.0, 1.0);
        return out;
    }

    // Significant motion: deviation from the dominant direction, scaled by pi.
    auto [dominant_angle, fraction] = dominant_direction(flow, params.static_motion_threshold,
                                                         params.angle_bins);
    (void)fraction;
    for (std::size_t i = 0; i < n; ++i) {
        if (mag.data[i] <= params.static_motion_threshold)
            continue;
        double angle = std::atan2(flow.v[i], flow.u[i]);
        if (angle < 0.0)
            angle += 2.0 * kPi;
        out.data[i] = std::clamp(circular_distance(angle, dominant_angle) / kPi, 0.0, 1.0);
    }
    return out;
}

} // namespace moveseg
