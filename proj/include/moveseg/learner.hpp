#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moveseg/segnet.hpp"
#include "moveseg/trimap.hpp"

namespace moveseg {

struct TrainConfig {
    double learning_rate = 0.05;
    double momentum = 0.9;
    int batch_size = 16;
    int epochs = 20;
    std::uint64_t rng_seed = 0;
    int workers = 1; // per-sample gradients in parallel; summation order is fixed

    void validate() const;
};

struct PixelCounts {
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t dont_care = 0;
};

struct LossReport {
    std::vector<double> epoch_mean_loss;
    std::vector<std::size_t> epoch_positive_pixels;
    std::vector<std::size_t> epoch_negative_pixels;
};

struct TrainSample {
    RasterU8 image;
    Trimap target;
};

// Cross entropy summed over the s^2 grid, restricted to positive and
// negative pixels; don't-care pixels contribute nothing. Predictions are
// clamped to [eps, 1-eps], eps = 1e-7.
std::pair<double, PixelCounts> masked_loss(const ProbMap& pred, const Trimap& target);

// Analytic gradient of masked_loss with respect to every parameter, flat,
// in checkpoint declaration order. Optionally reports the loss.
std::vector<double> backward(const SegNet& net, const RasterU8& image, const Trimap& target,
                             double* loss_out = nullptr);

// Seeded-shuffle minibatch SGD with momentum. Deterministic given the seed,
// including under workers > 1 (per-sample gradients are summed in sample
// order).
LossReport train(SegNet& net, const std::vector<TrainSample>& dataset,
                 const TrainConfig& config);

// forward + strict threshold (p > threshold).
BinaryMask infer_mask(const SegNet& net, const RasterU8& image, double binarize_threshold);

// Loss report lines: "<epoch>\t<mean_loss>\t<positives>\t<negatives>".
void write_loss_report(const std::string& path, const LossReport& report);

} // namespace moveseg
