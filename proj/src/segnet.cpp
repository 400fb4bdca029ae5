#include "moveseg/segnet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "moveseg/rng.hpp"

namespace moveseg {

namespace {

int conv_out_size(int in, int kernel, int stride) {
    int pad = (kernel - 1) / 2;
    return (in + 2 * pad - kernel) / stride + 1;
}

double normalize_u8(std::uint8_t v) { return v / 255.0 - 0.5; }

} // namespace

void NetSpec::validate() const {
    if (input_size < 1 || output_side < 1)
        throw ValidationError("NetSpec: input_size and output_side must be >= 1");
    if (input_channels != 1 && input_channels != 3)
        throw ValidationError("NetSpec: input_channels must be 1 or 3");
    int size = input_size;
    for (const LayerSpec& l : layers) {
        if (l.kernel < 1 || l.stride < 1)
            throw ValidationError("NetSpec: kernel and stride must be >= 1");
        if (l.kind == LayerKind::conv) {
            if (l.out_channels < 1)
                throw ValidationError("NetSpec: conv out_channels must be >= 1");
            if (l.kernel % 2 == 0)
                throw ValidationError("NetSpec: conv kernel must be odd");
            size = conv_out_size(size, l.kernel, l.stride);
        } else {
            size = size / l.kernel;
        }
        if (size < 1)
            throw ValidationError("NetSpec: layer stack collapses below 1x1");
    }
}

std::string NetSpec::layers_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (i)
            out << ',';
        const LayerSpec& l = layers[i];
        if (l.kind == LayerKind::conv)
            out << "conv:" << l.out_channels << ':' << l.kernel << ':' << l.stride;
        else
            out << "pool:" << l.kernel;
    }
    return out.str();
}

std::vector<LayerSpec> NetSpec::parse_layers(const std::string& text) {
    std::vector<LayerSpec> layers;
    std::istringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty())
            continue;
        std::replace(item.begin(), item.end(), ':', ' ');
        std::istringstream ss(item);
        std::string kind;
        ss >> kind;
        LayerSpec l;
        if (kind == "conv") {
            l.kind = LayerKind::conv;
            if (!(ss >> l.out_channels >> l.kernel >> l.stride))
                throw ValidationError("NetSpec: malformed conv layer '" + item + "'");
        } else if (kind == "pool") {
            l.kind = LayerKind::pool;
            if (!(ss >> l.kernel))
                throw ValidationError("NetSpec: malformed pool layer '" + item + "'");
            l.stride = l.kernel;
        } else {
            throw ValidationError("NetSpec: unknown layer kind '" + kind + "'");
        }
        layers.push_back(l);
    }
    return layers;
}

NetSpec NetSpec::desk_default(int w, int s) {
    NetSpec spec;
    spec.input_size = w;
    spec.input_channels = 3;
    spec.output_side = s;
    spec.layers = {{LayerKind::conv, 8, 3, 2},
                   {LayerKind::conv, 16, 3, 2},
                   {LayerKind::conv, 32, 3, 2}};
    return spec;
}

std::size_t SegNet::param_count() const {
    std::size_t n = 0;
    for (const Layer& l : layers)
        n += l.weights.size() + l.bias.size();
    return n + fc_weights.size() + fc_bias.size();
}

SegNet make_segnet(const NetSpec& spec, std::uint64_t seed) {
    spec.validate();
    SegNet net;
    net.spec = spec;
    net.init_seed = seed;
    Rng rng(seed);

    int channels = spec.input_channels;
    int size = spec.input_size;
    for (const LayerSpec& ls : spec.layers) {
        SegNet::Layer layer;
        layer.spec = ls;
        layer.in_channels = channels;
        layer.in_size = size;
        if (ls.kind == LayerKind::conv) {
            layer.out_size = conv_out_size(size, ls.kernel, ls.stride);
            std::size_t fan_in =
                static_cast<std::size_t>(channels) * ls.kernel * ls.kernel;
            double a = std::sqrt(1.0 / static_cast<double>(fan_in));
            layer.weights.resize(static_cast<std::size_t>(ls.out_channels) * fan_in);
            for (double& w : layer.weights)
                w = rng.uniform(-a, a);
            layer.bias.assign(static_cast<std::size_t>(ls.out_channels), 0.0);
            channels = ls.out_channels;
        } else {
            layer.out_size = size / ls.kernel;
            layer.spec.out_channels = channels;
        }
        size = layer.out_size;
        net.layers.push_back(std::move(layer));
    }

    net.fc_inputs = channels * size * size;
    const int outputs = spec.output_side * spec.output_side;
    double a = std::sqrt(1.0 / static_cast<double>(net.fc_inputs));
    net.fc_weights.resize(static_cast<std::size_t>(outputs) * net.fc_inputs);
    for (double& w : net.fc_weights)
        w = rng.uniform(-a, a);
    net.fc_bias.assign(static_cast<std::size_t>(outputs), 0.0);
    return net;
}

void zero_final_layer(SegNet& net) {
    std::fill(net.fc_weights.begin(), net.fc_weights.end(), 0.0);
    std::fill(net.fc_bias.begin(), net.fc_bias.end(), 0.0);
}

ProbMap forward_cached(const SegNet& net, const RasterU8& image, ForwardCache& cache) {
    if (image.width != net.spec.input_size || image.height != net.spec.input_size ||
        image.channels != net.spec.input_channels)
        throw ValidationError("forward: image shape does not match the network input spec");

    const int in_size = net.spec.input_size;
    cache.input.resize(static_cast<std::size_t>(image.channels) * in_size * in_size);
    // Planar [c][y][x] layout.
    for (int c = 0; c < image.channels; ++c)
        for (int y = 0; y < in_size; ++y)
            for (int x = 0; x < in_size; ++x)
                cache.input[(static_cast<std::size_t>(c) * in_size + y) * in_size + x] =
                    normalize_u8(image.at(x, y, c));

    cache.outputs.assign(net.layers.size(), {});
    cache.pool_argmax.assign(net.layers.size(), {});

    const std::vector<double>* cur = &cache.input;
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        const SegNet::Layer& layer = net.layers[li];
        const int is = layer.in_size, os = layer.out_size, ic = layer.in_channels;
        std::vector<double>& out = cache.outputs[li];
        if (layer.spec.kind == LayerKind::conv) {
            const int oc = layer.spec.out_channels, k = layer.spec.kernel,
                      stride = layer.spec.stride, pad = (k - 1) / 2;
            out.assign(static_cast<std::size_t>(oc) * os * os, 0.0);
            for (int o = 0; o < oc; ++o) {
                const double* wbase =
                    &layer.weights[static_cast<std::size_t>(o) * ic * k * k];
                for (int oy = 0; oy < os; ++oy) {
                    for (int ox = 0; ox < os; ++ox) {
                        double acc = layer.bias[static_cast<std::size_t>(o)];
                        for (int c = 0; c < ic; ++c) {
                            const double* iplane =
                                &(*cur)[static_cast<std::size_t>(c) * is * is];
                            const double* wplane = wbase + static_cast<std::size_t>(c) * k * k;
                            for (int ky = 0; ky < k; ++ky) {
                                int iy = oy * stride - pad + ky;
                                if (iy < 0 || iy >= is)
                                    continue;
                                const double* irow = iplane + static_cast<std::size_t>(iy) * is;
                                const double* wrow = wplane + static_cast<std::size_t>(ky) * k;
                                for (int kx = 0; kx < k; ++kx) {
                                    int ix = ox * stride - pad + kx;
                                    if (ix < 0 || ix >= is)
                                        continue;
                                    acc += wrow[kx] * irow[ix];
                                }
                            }
                        }
                        // rectifier
                        out[(static_cast<std::size_t>(o) * os + oy) * os + ox] =
                            acc > 0.0 ? acc : 0.0;
                    }
                }
            }
        } else {
            const int k = layer.spec.kernel;
            out.assign(static_cast<std::size_t>(ic) * os * os, 0.0);
            cache.pool_argmax[li].assign(out.size(), 0);
            for (int c = 0; c < ic; ++c) {
                for (int oy = 0; oy < os; ++oy) {
                    for (int ox = 0; ox < os; ++ox) {
                        double best = -std::numeric_limits<double>::infinity();
                        int best_idx = 0;
                        for (int ky = 0; ky < k; ++ky) {
                            for (int kx = 0; kx < k; ++kx) {
                                int iy = oy * k + ky, ix = ox * k + kx;
                                int idx = (c * is + iy) * is + ix;
                                double v = (*cur)[static_cast<std::size_t>(idx)];
                                if (v > best) { // first max wins ties
                                    best = v;
                                    best_idx = idx;
                                }
                            }
                        }
                        std::size_t oidx = (static_cast<std::size_t>(c) * os + oy) * os + ox;
                        out[oidx] = best;
                        cache.pool_argmax[li][oidx] = best_idx;
                    }
                }
            }
        }
        cur = &out;
    }

    const int outputs = net.spec.output_side * net.spec.output_side;
    cache.logits.assign(static_cast<std::size_t>(outputs), 0.0);
    for (int o = 0; o < outputs; ++o) {
        const double* wrow = &net.fc_weights[static_cast<std::size_t>(o) * net.fc_inputs];
        double acc = net.fc_bias[static_cast<std::size_t>(o)];
        for (int i = 0; i < net.fc_inputs; ++i)
            acc += wrow[i] * (*cur)[static_cast<std::size_t>(i)];
        cache.logits[static_cast<std::size_t>(o)] = acc;
    }

    ProbMap prob(net.spec.output_side, net.spec.output_side);
    for (int o = 0; o < outputs; ++o)
        prob.data[static_cast<std::size_t>(o)] =
            1.0 / (1.0 + std::exp(-cache.logits[static_cast<std::size_t>(o)]));
    return prob;
}

ProbMap forward(const SegNet& net, const RasterU8& image) {
    ForwardCache cache;
    return forward_cached(net, image, cache);
}

std::vector<double*> param_ptrs(SegNet& net) {
    std::vector<double*> ptrs;
    ptrs.reserve(net.param_count());
    for (SegNet::Layer& l : net.layers) {
        for (double& w : l.weights)
            ptrs.push_back(&w);
        for (double& b : l.bias)
            ptrs.push_back(&b);
    }
    for (double& w : net.fc_weights)
        ptrs.push_back(&w);
    for (double& b : net.fc_bias)
        ptrs.push_back(&b);
    return ptrs;
}

void save_checkpoint(const std::string& path, const SegNet& net) {
    static_assert(std::endian::native == std::endian::little,
                  "checkpoint block assumes a little-endian host");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError(path + ": cannot open for writing");
    out << "SEGNET 1\n"
        << "input " << net.spec.input_size << ' ' << net.spec.input_channels << '\n'
        << "output " << net.spec.output_side << '\n'
        << "seed " << net.init_seed << '\n'
        << "layers " << net.spec.layers_string() << '\n'
        << "params " << net.param_count() << '\n';
    auto write_block = [&](const std::vector<double>& v) {
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    for (const SegNet::Layer& l : net.layers) {
        write_block(l.weights);
        write_block(l.bias);
    }
    write_block(net.fc_weights);
    write_block(net.fc_bias);
    if (!out)
        throw IoError(path + ": write failed");
}

SegNet load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(path + ": cannot open for reading");
    std::string magic, version;
    in >> magic >> version;
    if (magic != "SEGNET" || version != "1")
        throw IoError(path + ": not a SEGNET checkpoint");
    NetSpec spec;
    std::uint64_t seed = 0;
    std::size_t expected_params = 0;
    std::string key;
    while (in >> key) {
        if (key == "input")
            in >> spec.input_size >> spec.input_channels;
        else if (key == "output")
            in >> spec.output_side;
        else if (key == "seed")
            in >> seed;
        else if (key == "layers") {
            std::string text;
            in >> text;
            spec.layers = NetSpec::parse_layers(text);
        } else if (key == "params") {
            in >> expected_params;
            break;
        } else {
            throw IoError(path + ": unknown checkpoint key '" + key + "'");
        }
    }
    if (!in)
        throw IoError(path + ": truncated checkpoint header");
    in.get(); // newline before the parameter block

    SegNet net = make_segnet(spec, seed);
    if (net.param_count() != expected_params)
        throw IoError(path + ": parameter count does not match the architecture");
    auto read_block = [&](std::vector<double>& v) {
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    for (SegNet::Layer& l : net.layers) {
        read_block(l.weights);
        read_block(l.bias);
    }
    read_block(net.fc_weights);
    read_block(net.fc_bias);
    if (!in)
        throw IoError(path + ": truncated parameter block");
    return net;
}

} // namespace moveseg
