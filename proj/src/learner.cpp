#include "moveseg/learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numeric>

#include "moveseg/rng.hpp"

namespace moveseg {

namespace {

constexpr double kClampEps = 1e-7;

double clamp_p(double p) { return std::clamp(p, kClampEps, 1.0 - kClampEps); }

} // namespace

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0))
        throw ValidationError("TrainConfig: learning_rate must be >= 0");
    if (!(momentum >= 0.0 && momentum < 1.0))
        throw ValidationError("TrainConfig: momentum must be in [0, 1)");
    if (batch_size < 1 || epochs < 1)
        throw ValidationError("TrainConfig: batch_size and epochs must be >= 1");
    if (workers < 1)
        throw ValidationError("TrainConfig: workers must be >= 1");
}

std::pair<double, PixelCounts> masked_loss(const ProbMap& pred, const Trimap& target) {
    if (pred.width != target.width || pred.height != target.height)
        throw ValidationError("masked_loss: prediction/target shape mismatch");
    double loss = 0.0;
    PixelCounts counts;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        switch (target.data[i]) {
        case TriLabel::positive:
            ++counts.positive;
            loss -= std::log(clamp_p(pred.data[i]));
            break;
        case TriLabel::negative:
            ++counts.negative;
            loss -= std::log(1.0 - clamp_p(pred.data[i]));
            break;
        case TriLabel::dont_care:
            ++counts.dont_care;
            break;
        }
    }
    return {loss, counts};
}

std::vector<double> backward(const SegNet& net, const RasterU8& image, const Trimap& target,
                             double* loss_out) {
    ForwardCache cache;
    ProbMap pred = forward_cached(net, image, cache);
    auto [loss, counts] = masked_loss(pred, target);
    (void)counts;
    if (loss_out)
        *loss_out = loss;

    const int outputs = net.spec.output_side * net.spec.output_side;
    if (static_cast<std::size_t>(outputs) != target.pixel_count())
        throw ValidationError("backward: target shape mismatch");

    // d loss / d logit through clamp(sigmoid(z)). Inside the clamp range this
    // is the usual p - y; a clamped prediction contributes zero gradient.
    std::vector<double> dlogits(static_cast<std::size_t>(outputs), 0.0);
    for (int o = 0; o < outputs; ++o) {
        TriLabel label = target.data[static_cast<std::size_t>(o)];
        if (label == TriLabel::dont_care)
            continue;
        double p = pred.data[static_cast<std::size_t>(o)];
        if (p <= kClampEps || p >= 1.0 - kClampEps)
            continue;
        dlogits[static_cast<std::size_t>(o)] = p - (label == TriLabel::positive ? 1.0 : 0.0);
    }

    std::vector<double> grad(net.param_count(), 0.0);

    // Flat gradient regions in declaration order.
    std::vector<std::size_t> layer_w_off(net.layers.size()), layer_b_off(net.layers.size());
    std::size_t off = 0;
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        layer_w_off[li] = off;
        off += net.layers[li].weights.size();
        layer_b_off[li] = off;
        off += net.layers[li].bias.size();
    }
    const std::size_t fc_w_off = off;
    const std::size_t fc_b_off = off + net.fc_weights.size();

    // Head backward.
    const std::vector<double>& fc_in =
        net.layers.empty() ? cache.input : cache.outputs.back();
    std::vector<double> delta(fc_in.size(), 0.0);
    for (int o = 0; o < outputs; ++o) {
        double d = dlogits[static_cast<std::size_t>(o)];
        if (d == 0.0)
            continue;
        grad[fc_b_off + static_cast<std::size_t>(o)] += d;
        const double* wrow = &net.fc_weights[static_cast<std::size_t>(o) * net.fc_inputs];
        double* gw = &grad[fc_w_off + static_cast<std::size_t>(o) * net.fc_inputs];
        for (int i = 0; i < net.fc_inputs; ++i) {
            gw[i] += d * fc_in[static_cast<std::size_t>(i)];
            delta[static_cast<std::size_t>(i)] += d * wrow[i];
        }
    }

    // Layer backward, reverse order.
    for (int li = static_cast<int>(net.layers.size()) - 1; li >= 0; --li) {
        const SegNet::Layer& layer = net.layers[static_cast<std::size_t>(li)];
        const std::vector<double>& in_act =
            li == 0 ? cache.input : cache.outputs[static_cast<std::size_t>(li) - 1];
        const int is = layer.in_size, os = layer.out_size, ic = layer.in_channels;
        std::vector<double> din(in_act.size(), 0.0);

        if (layer.spec.kind == LayerKind::conv) {
            const std::vector<double>& out_act = cache.outputs[static_cast<std::size_t>(li)];
            const int oc = layer.spec.out_channels, k = layer.spec.kernel,
                      stride = layer.spec.stride, pad = (k - 1) / 2;
            double* gw_base = &grad[layer_w_off[static_cast<std::size_t>(li)]];
            double* gb_base = &grad[layer_b_off[static_cast<std::size_t>(li)]];
            for (int o = 0; o < oc; ++o) {
                const double* wbase = &layer.weights[static_cast<std::size_t>(o) * ic * k * k];
                double* gwbase = gw_base + static_cast<std::size_t>(o) * ic * k * k;
                for (int oy = 0; oy < os; ++oy) {
                    for (int ox = 0; ox < os; ++ox) {
                        std::size_t oidx = (static_cast<std::size_t>(o) * os + oy) * os + ox;
                        if (out_act[oidx] <= 0.0)
                            continue; // rectifier gate
                        double d = delta[oidx];
                        if (d == 0.0)
                            continue;
                        gb_base[o] += d;
                        for (int c = 0; c < ic; ++c) {
                            const double* iplane = &in_act[static_cast<std::size_t>(c) * is * is];
                            double* dplane = &din[static_cast<std::size_t>(c) * is * is];
                            const double* wplane = wbase + static_cast<std::size_t>(c) * k * k;
                            double* gwplane = gwbase + static_cast<std::size_t>(c) * k * k;
                            for (int ky = 0; ky < k; ++ky) {
                                int iy = oy * stride - pad + ky;
                                if (iy < 0 || iy >= is)
                                    continue;
                                for (int kx = 0; kx < k; ++kx) {
                                    int ix = ox * stride - pad + kx;
                                    if (ix < 0 || ix >= is)
                                        continue;
                                    std::size_t ii = static_cast<std::size_t>(iy) * is + ix;
                                    gwplane[static_cast<std::size_t>(ky) * k + kx] +=
                                        d * iplane[ii];
                                    dplane[ii] += d * wplane[static_cast<std::size_t>(ky) * k + kx];
                                }
                            }
                        }
                    }
                }
            }
        } else {
            const std::vector<int>& argmax = cache.pool_argmax[static_cast<std::size_t>(li)];
            for (std::size_t oidx = 0; oidx < argmax.size(); ++oidx)
                din[static_cast<std::size_t>(argmax[oidx])] += delta[oidx];
        }
        delta.swap(din);
    }
    return grad;
}

LossReport train(SegNet& net, const std::vector<TrainSample>& dataset,
                 const TrainConfig& config) {
    config.validate();
    if (dataset.empty())
        throw ValidationError("train: dataset is empty");

    const std::size_t n_params = net.param_count();
    std::vector<double> velocity(n_params, 0.0);
    std::vector<double*> params = param_ptrs(net);
    Rng shuffle_rng(config.rng_seed);
    LossReport report;

    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t epoch_pos = 0, epoch_neg = 0;

        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            std::size_t count = end - start;

            std::vector<std::vector<double>> grads(count);
            std::vector<double> losses(count, 0.0);
            auto run_one = [&](std::size_t b) {
                const TrainSample& s = dataset[order[start + b]];
                grads[b] = backward(net, s.image, s.target, &losses[b]);
            };
            if (config.workers == 1 || count == 1) {
                for (std::size_t b = 0; b < count; ++b)
                    run_one(b);
            } else {
                std::vector<std::future<void>> futs;
                futs.reserve(count);
                for (std::size_t b = 0; b < count; ++b)
                    futs.push_back(std::async(std::launch::async, run_one, b));
                for (auto& f : futs)
                    f.get();
            }

            // Fixed summation order keeps training bit-deterministic for any
            // worker count.
            std::vector<double> batch_grad(n_params, 0.0);
            for (std::size_t b = 0; b < count; ++b) {
                const std::vector<double>& g = grads[b];
                for (std::size_t i = 0; i < n_params; ++i)
                    batch_grad[i] += g[i];
                epoch_loss += losses[b];
                for (TriLabel t : dataset[order[start + b]].target.data) {
                    if (t == TriLabel::positive)
                        ++epoch_pos;
                    else if (t == TriLabel::negative)
                        ++epoch_neg;
                }
            }
            const double inv = 1.0 / static_cast<double>(count);
            for (std::size_t i = 0; i < n_params; ++i) {
                velocity[i] = config.momentum * velocity[i] -
                              config.learning_rate * batch_grad[i] * inv;
                *params[i] += velocity[i];
            }
        }
        report.epoch_mean_loss.push_back(epoch_loss / static_cast<double>(dataset.size()));
        report.epoch_positive_pixels.push_back(epoch_pos);
        report.epoch_negative_pixels.push_back(epoch_neg);
    }
    return report;
}

BinaryMask infer_mask(const SegNet& net, const RasterU8& image, double binarize_threshold) {
    return binarize(forward(net, image), binarize_threshold);
}

void write_loss_report(const std::string& path, const LossReport& report) {
    std::ofstream out(path);
    if (!out)
        throw IoError(path + ": cannot open for writing");
    char buf[64];
    for (std::size_t e = 0; e < report.epoch_mean_loss.size(); ++e) {
        std::snprintf(buf, sizeof(buf), "%.6f", report.epoch_mean_loss[e]);
        out << e << '\t' << buf << '\t' << report.epoch_positive_pixels[e] << '\t'
            << report.epoch_negative_pixels[e] << '\n';
    }
    if (!out)
        throw IoError(path + ": write failed");
}

} // namespace moveseg
