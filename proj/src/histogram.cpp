#include "moveseg/histogram.hpp"

#include <numeric>

namespace moveseg {

std::vector<double> color_histogram(const RasterU8& raster,
                                    const std::vector<std::size_t>& region,
                                    int bins_per_channel) {
    if (region.empty())
        throw ValidationError("color_histogram: empty region");
    if (bins_per_channel < 1)
        throw ValidationError("color_histogram: bins_per_channel must be >= 1");
    const int channels = raster.channels;
    const int bins = bins_per_channel;
    std::vector<double> hist(static_cast<std::size_t>(channels) * bins, 0.0);
    for (std::size_t idx : region) {
        const std::uint8_t* px = &raster.data[idx * channels];
        for (int c = 0; c < channels; ++c) {
            int bin = static_cast<int>(px[c]) * bins / 256;
            hist[static_cast<std::size_t>(c) * bins + bin] += 1.0;
        }
    }
    const double inv = 1.0 / static_cast<double>(region.size());
    for (double& v : hist)
        v *= inv;
    return hist;
}

std::vector<double> frame_histogram(const RasterU8& raster, int bins_per_channel) {
    std::vector<std::size_t> all(raster.pixel_count());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return color_histogram(raster, all, bins_per_channel);
}

double chi_square(const std::vector<double>& a, const std::vector<double>& b, int channels) {
    if (a.size() != b.size() || channels < 1 || a.size() % channels != 0)
        throw ValidationError("chi_square: histogram size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double s = a[i] + b[i];
        if (s > 0.0) {
            double d = a[i] - b[i];
            total += 0.5 * d * d / s;
        }
    }
    return total / channels;
}

} // namespace moveseg
