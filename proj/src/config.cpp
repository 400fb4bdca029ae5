#include "moveseg/config.hpp"

#include <fstream>
#include <sstream>

namespace moveseg {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw ValidationError("config key '" + key + "': cannot parse value '" + value + "'");
}

int to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(value, &pos);
        if (pos != value.size())
            bad_value(key, value);
        return v;
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        bad_value(key, value);
    }
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size())
            bad_value(key, value);
        return v;
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        bad_value(key, value);
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size())
            bad_value(key, value);
        return v;
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        bad_value(key, value);
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    bad_value(key, value);
}

} // namespace

UnlcConfig PipelineConfig::unlc_config() const {
    UnlcConfig cfg;
    cfg.saliency = saliency;
    cfg.slic = slic;
    cfg.features = features;
    cfg.graph_k = graph_k;
    cfg.graph_weights = graph_weights;
    cfg.propagate_iterations = propagate_iterations;
    cfg.propagate_damping = propagate_damping;
    return cfg;
}

DatasetParams PipelineConfig::dataset_params() const {
    DatasetParams p;
    p.crop_size = crop_size;
    p.target_size = target_size;
    p.jitter = jitter;
    p.trimap = trimap;
    p.seed = seed;
    p.crop_to_object = crop_to_object;
    return p;
}

NetSpec PipelineConfig::net_spec() const {
    NetSpec spec;
    spec.input_size = crop_size;
    spec.input_channels = 3;
    spec.output_side = target_size;
    spec.layers = NetSpec::parse_layers(net_arch);
    return spec;
}

void apply_config_entry(PipelineConfig& c, const std::string& key, const std::string& value) {
    if (key == "seed")
        c.seed = to_u64(key, value);
    else if (key == "workers")
        c.workers = to_int(key, value);
    else if (key == "flow.pyramid_levels")
        c.flow.pyramid_levels = to_int(key, value);
    else if (key == "flow.iterations_per_level")
        c.flow.iterations_per_level = to_int(key, value);
    else if (key == "flow.window_radius")
        c.flow.window_radius = to_int(key, value);
    else if (key == "saliency.static_motion_threshold")
        c.saliency.static_motion_threshold = to_double(key, value);
    else if (key == "saliency.static_frame_fraction")
        c.saliency.static_frame_fraction = to_double(key, value);
    else if (key == "saliency.angle_bins")
        c.saliency.angle_bins = to_int(key, value);
    else if (key == "superpixel.target_regions")
        c.slic.target_regions = to_int(key, value);
    else if (key == "superpixel.compactness")
        c.slic.compactness = to_double(key, value);
    else if (key == "superpixel.iterations")
        c.slic.iterations = to_int(key, value);
    else if (key == "superpixel.colorspace") {
        if (value == "lab")
            c.slic.colorspace = SlicColorSpace::lab;
        else if (value == "rgb")
            c.slic.colorspace = SlicColorSpace::rgb;
        else
            bad_value(key, value);
    } else if (key == "features.hist_bins")
        c.features.hist_bins = to_int(key, value);
    else if (key == "features.hog_cell_grid")
        c.features.hog_cell_grid = to_int(key, value);
    else if (key == "features.hog_orientation_bins")
        c.features.hog_orientation_bins = to_int(key, value);
    else if (key == "graph.k")
        c.graph_k = to_int(key, value);
    else if (key == "graph.w_loc")
        c.graph_weights.w_loc = to_double(key, value);
    else if (key == "graph.w_color")
        c.graph_weights.w_color = to_double(key, value);
    else if (key == "graph.w_hog")
        c.graph_weights.w_hog = to_double(key, value);
    else if (key == "propagate.iterations")
        c.propagate_iterations = to_int(key, value);
    else if (key == "propagate.damping")
        c.propagate_damping = to_double(key, value);
    else if (key == "shots.hist_bins")
        c.shots_hist_bins = to_int(key, value);
    else if (key == "shots.cut_threshold")
        c.shots_cut_threshold = to_double(key, value);
    else if (key == "prune.max_fg_fraction")
        c.prune.max_fg_fraction = to_double(key, value);
    else if (key == "prune.min_fg_fraction")
        c.prune.min_fg_fraction = to_double(key, value);
    else if (key == "prune.border_band_fraction")
        c.prune.border_band_fraction = to_double(key, value);
    else if (key == "prune.max_border_fg_fraction")
        c.prune.max_border_fg_fraction = to_double(key, value);
    else if (key == "prune.binarize_threshold")
        c.prune.binarize_threshold = to_double(key, value);
    else if (key == "jitter.scale_min")
        c.jitter.scale_min = to_double(key, value);
    else if (key == "jitter.scale_max")
        c.jitter.scale_max = to_double(key, value);
    else if (key == "jitter.translate_range")
        c.jitter.translate_range = to_double(key, value);
    else if (key == "jitter.context_pad")
        c.jitter.context_pad = to_double(key, value);
    else if (key == "trimap.neg_threshold")
        c.trimap.neg_threshold = to_double(key, value);
    else if (key == "trimap.pos_threshold")
        c.trimap.pos_threshold = to_double(key, value);
    else if (key == "dataset.crop_size")
        c.crop_size = to_int(key, value);
    else if (key == "dataset.target_size")
        c.target_size = to_int(key, value);
    else if (key == "dataset.crop_to_object")
        c.crop_to_object = to_bool(key, value);
    else if (key == "net.arch")
        c.net_arch = value;
    else if (key == "train.learning_rate")
        c.train.learning_rate = to_double(key, value);
    else if (key == "train.momentum")
        c.train.momentum = to_double(key, value);
    else if (key == "train.batch_size")
        c.train.batch_size = to_int(key, value);
    else if (key == "train.epochs")
        c.train.epochs = to_int(key, value);
    else if (key == "eval.binarize_threshold")
        c.eval_binarize_threshold = to_double(key, value);
    else
        throw ValidationError("config: unknown key '" + key + "'");
}

PipelineConfig parse_config_text(const std::string& text, const std::string& origin) {
    PipelineConfig config;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + line + "'");
        apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError(path + ": cannot open config");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void PipelineConfig::validate() const {
    auto fail = [](const std::string& key, const std::string& why) {
        throw ValidationError("config key '" + key + "': " + why);
    };
    if (workers < 1)
        fail("workers", "must be >= 1");
    if (flow.pyramid_levels < 1)
        fail("flow.pyramid_levels", "must be >= 1");
    if (flow.iterations_per_level < 1)
        fail("flow.iterations_per_level", "must be >= 1");
    if (flow.window_radius < 1)
        fail("flow.window_radius", "must be >= 1");
    if (!(saliency.static_motion_threshold > 0.0))
        fail("saliency.static_motion_threshold", "must be > 0");
    if (!(saliency.static_frame_fraction > 0.0 && saliency.static_frame_fraction < 1.0))
        fail("saliency.static_frame_fraction", "must be in (0, 1)");
    if (saliency.angle_bins < 4)
        fail("saliency.angle_bins", "must be >= 4");
    if (slic.target_regions < 1)
        fail("superpixel.target_regions", "must be >= 1");
    if (!(slic.compactness > 0.0))
        fail("superpixel.compactness", "must be > 0");
    if (slic.iterations < 1)
        fail("superpixel.iterations", "must be >= 1");
    if (features.hist_bins < 1)
        fail("features.hist_bins", "must be >= 1");
    if (features.hog_cell_grid < 1)
        fail("features.hog_cell_grid", "must be >= 1");
    if (features.hog_orientation_bins < 1)
        fail("features.hog_orientation_bins", "must be >= 1");
    if (graph_k < 1)
        fail("graph.k", "must be >= 1");
    if (propagate_iterations < 0)
        fail("propagate.iterations", "must be >= 0");
    if (!(propagate_damping >= 0.0 && propagate_damping <= 1.0))
        fail("propagate.damping", "must be in [0, 1]");
    if (shots_hist_bins < 1)
        fail("shots.hist_bins", "must be >= 1");
    if (!(shots_cut_threshold >= 0.0))
        fail("shots.cut_threshold", "must be >= 0");
    auto unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!unit(prune.max_fg_fraction))
        fail("prune.max_fg_fraction", "must be in (0, 1)");
    if (!unit(prune.min_fg_fraction))
        fail("prune.min_fg_fraction", "must be in (0, 1)");
    if (prune.min_fg_fraction >= prune.max_fg_fraction)
        fail("prune.min_fg_fraction", "must be < prune.max_fg_fraction");
    if (!unit(prune.border_band_fraction))
        fail("prune.border_band_fraction", "must be in (0, 1)");
    if (!unit(prune.max_border_fg_fraction))
        fail("prune.max_border_fg_fraction", "must be in (0, 1)");
    if (!unit(prune.binarize_threshold))
        fail("prune.binarize_threshold", "must be in (0, 1)");
    if (!(jitter.scale_min > 0.0 && jitter.scale_min <= jitter.scale_max))
        fail("jitter.scale_min", "need 0 < scale_min <= scale_max");
    if (jitter.translate_range < 0.0)
        fail("jitter.translate_range", "must be >= 0");
    if (jitter.context_pad < 0.0)
        fail("jitter.context_pad", "must be >= 0");
    if (!(0.0 < trimap.neg_threshold && trimap.neg_threshold < trimap.pos_threshold &&
          trimap.pos_threshold < 1.0))
        fail("trimap.pos_threshold", "need 0 < neg_threshold < pos_threshold < 1");
    if (crop_size < 1)
        fail("dataset.crop_size", "must be >= 1");
    if (target_size < 1)
        fail("dataset.target_size", "must be >= 1");
    try {
        net_spec().validate();
    } catch (const ValidationError& e) {
        fail("net.arch", e.what());
    }
    if (!(train.learning_rate >= 0.0))
        fail("train.learning_rate", "must be >= 0");
    if (!(train.momentum >= 0.0 && train.momentum < 1.0))
        fail("train.momentum", "must be in [0, 1)");
    if (train.batch_size < 1)
        fail("train.batch_size", "must be >= 1");
    if (train.epochs < 1)
        fail("train.epochs", "must be >= 1");
    if (!(eval_binarize_threshold >= 0.0 && eval_binarize_threshold <= 1.0))
        fail("eval.binarize_threshold", "must be in [0, 1]");
}

std::string config_defaults_text() {
    PipelineConfig d;
    std::ostringstream out;
    out << "seed = " << d.seed << '\n';
    out << "workers = " << d.workers << '\n';
    out << "flow.pyramid_levels = " << d.flow.pyramid_levels << '\n';
    out << "flow.iterations_per_level = " << d.flow.iterations_per_level << '\n';
    out << "flow.window_radius = " << d.flow.window_radius << '\n';
    out << "saliency.static_motion_threshold = " << d.saliency.static_motion_threshold << '\n';
    out << "saliency.static_frame_fraction = " << d.saliency.static_frame_fraction << '\n';
    out << "saliency.angle_bins = " << d.saliency.angle_bins << '\n';
    out << "superpixel.target_regions = " << d.slic.target_regions << '\n';
    out << "superpixel.compactness = " << d.slic.compactness << '\n';
    out << "superpixel.iterations = " << d.slic.iterations << '\n';
    out << "superpixel.colorspace = "
        << (d.slic.colorspace == SlicColorSpace::lab ? "lab" : "rgb") << '\n';
    out << "features.hist_bins = " << d.features.hist_bins << '\n';
    out << "features.hog_cell_grid = " << d.features.hog_cell_grid << '\n';
    out << "features.hog_orientation_bins = " << d.features.hog_orientation_bins << '\n';
    out << "graph.k = " << d.graph_k << '\n';
    out << "graph.w_loc = " << d.graph_weights.w_loc << '\n';
    out << "graph.w_color = " << d.graph_weights.w_color << '\n';
    out << "graph.w_hog = " << d.graph_weights.w_hog << '\n';
    out << "propagate.iterations = " << d.propagate_iterations << '\n';
    out << "propagate.damping = " << d.propagate_damping << '\n';
    out << "shots.hist_bins = " << d.shots_hist_bins << '\n';
    out << "shots.cut_threshold = " << d.shots_cut_threshold << '\n';
    out << "prune.max_fg_fraction = " << d.prune.max_fg_fraction << '\n';
    out << "prune.min_fg_fraction = " << d.prune.min_fg_fraction << '\n';
    out << "prune.border_band_fraction = " << d.prune.border_band_fraction << '\n';
    out << "prune.max_border_fg_fraction = " << d.prune.max_border_fg_fraction << '\n';
    out << "prune.binarize_threshold = " << d.prune.binarize_threshold << '\n';
    out << "jitter.scale_min = " << d.jitter.scale_min << '\n';
    out << "jitter.scale_max = " << d.jitter.scale_max << '\n';
    out << "jitter.translate_range = " << d.jitter.translate_range << '\n';
    out << "jitter.context_pad = " << d.jitter.context_pad << '\n';
    out << "trimap.neg_threshold = " << d.trimap.neg_threshold << '\n';
    out << "trimap.pos_threshold = " << d.trimap.pos_threshold << '\n';
    out << "dataset.crop_size = " << d.crop_size << '\n';
    out << "dataset.target_size = " << d.target_size << '\n';
    out << "dataset.crop_to_object = " << (d.crop_to_object ? "true" : "false") << '\n';
    out << "net.arch = " << d.net_arch << '\n';
    out << "train.learning_rate = " << d.train.learning_rate << '\n';
    out << "train.momentum = " << d.train.momentum << '\n';
    out << "train.batch_size = " << d.train.batch_size << '\n';
    out << "train.epochs = " << d.train.epochs << '\n';
    out << "eval.binarize_threshold = " << d.eval_binarize_threshold << '\n';
    return out.str();
}

} // namespace moveseg
