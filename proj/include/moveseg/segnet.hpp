#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moveseg/raster.hpp"

namespace moveseg {

enum class LayerKind { conv, pool };

// conv: out_channels filters of size kernel x kernel, given stride, same
// padding (kernel-1)/2, rectifier after. pool: max pooling with window and
// stride both `kernel`.
struct LayerSpec {
    LayerKind kind = LayerKind::conv;
    int out_channels = 0;
    int kernel = 3;
    int stride = 1;
};

struct NetSpec {
    int input_size = 64;   // w: side of the square input crop
    int input_channels = 3;
    int output_side = 16;  // s: predicted mask is s x s
    std::vector<LayerSpec> layers;

    void validate() const;
    std::string layers_string() const; // "conv:8:3:2,pool:2,..."
    static std::vector<LayerSpec> parse_layers(const std::string& text);

    // 3 conv layers (8, 16, 32 channels, 3x3, stride 2) + rectifiers, then
    // fully connected to s^2 + sigmoid. Small enough to train on one core.
    static NetSpec desk_default(int w = 64, int s = 16);
};

// Mask-prediction network: the conv/pool stack above a fully connected head
// with output_side^2 logits and an element-wise sigmoid. All parameters are
// 64-bit reals.
struct SegNet {
    struct Layer {
        LayerSpec spec;
        int in_channels = 0;
        int in_size = 0;
        int out_size = 0;
        std::vector<double> weights; // conv: [out_c][in_c][k][k]
        std::vector<double> bias;    // conv: [out_c]
    };

    NetSpec spec;
    std::vector<Layer> layers;
    std::vector<double> fc_weights; // [s^2][fc_inputs]
    std::vector<double> fc_bias;    // [s^2]
    int fc_inputs = 0;
    std::uint64_t init_seed = 0;

    std::size_t param_count() const;
};

// Seeded uniform fan-in initialization: weights U(-a, a), a = sqrt(1/fan_in),
// biases zero.
SegNet make_segnet(const NetSpec& spec, std::uint64_t seed);

// Zeroes the fully connected head, forcing sigmoid(0) = 0.5 everywhere.
void zero_final_layer(SegNet& net);

// Per-layer activations kept for backpropagation.
struct ForwardCache {
    std::vector<double> input;                 // normalized image, [c][h][w]
    std::vector<std::vector<double>> outputs;  // post-nonlinearity, per layer
    std::vector<std::vector<int>> pool_argmax; // flat input index per pooled cell
    std::vector<double> logits;                // s^2 pre-sigmoid values
};

// Deterministic inference; output values in (0, 1).
ProbMap forward(const SegNet& net, const RasterU8& image);
ProbMap forward_cached(const SegNet& net, const RasterU8& image, ForwardCache& cache);

// Pointers to every parameter in checkpoint declaration order
// (per layer: weights then bias; then fc weights, fc bias).
std::vector<double*> param_ptrs(SegNet& net);

// Text header (architecture, sizes, seed) + raw little-endian 64-bit
// parameter block in declaration order. Round-trips bit-exactly.
void save_checkpoint(const std::string& path, const SegNet& net);
SegNet load_checkpoint(const std::string& path);

} // namespace moveseg
