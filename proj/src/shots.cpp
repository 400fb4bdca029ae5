#include "moveseg/shots.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "moveseg/histogram.hpp"

namespace moveseg {

void PruneParams::validate() const {
    auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!in_unit(max_fg_fraction) || !in_unit(min_fg_fraction) ||
        !in_unit(border_band_fraction) || !in_unit(max_border_fg_fraction) ||
        !in_unit(binarize_threshold))
        throw ValidationError("PruneParams: fractions must lie in (0, 1)");
    if (min_fg_fraction >= max_fg_fraction)
        throw ValidationError("PruneParams: min_fg_fraction must be < max_fg_fraction");
}

const char* prune_reason_name(PruneReason reason) {
    switch (reason) {
    case PruneReason::ok: return "ok";
    case PruneReason::too_much_fg: return "too_much_fg";
    case PruneReason::too_little_fg: return "too_little_fg";
    case PruneReason::border_fg: return "border_fg";
    }
    return "?";
}

std::vector<Shot> detect_shots(const std::vector<RasterU8>& frames, int hist_bins,
                               double cut_threshold) {
    if (frames.empty())
        throw ValidationError("detect_shots: need at least one frame");
    std::vector<Shot> shots;
    int start = 0;
    std::vector<double> prev = frame_histogram(frames[0], hist_bins);
    for (std::size_t t = 1; t < frames.size(); ++t) {
        std::vector<double> cur = frame_histogram(frames[t], hist_bins);
        if (chi_square(prev, cur, frames[t].channels) > cut_threshold) {
            shots.push_back({start, static_cast<int>(t) - 1});
            start = static_cast<int>(t);
        }
        prev = std::move(cur);
    }
    shots.push_back({start, static_cast<int>(frames.size()) - 1});
    return shots;
}

PruneDecision prune_frame(const ProbMap& prob, const PruneParams& params) {
    params.validate();
    const BinaryMask fg = binarize(prob, params.binarize_threshold);
    const double total = static_cast<double>(fg.pixel_count());
    const double fg_fraction = static_cast<double>(fg.true_count()) / total;
    if (fg_fraction > params.max_fg_fraction)
        return {false, PruneReason::too_much_fg};
    if (fg_fraction < params.min_fg_fraction)
        return {false, PruneReason::too_little_fg};

    const double band = params.border_band_fraction * std::min(fg.width, fg.height);
    std::size_t band_pixels = 0, band_fg = 0;
    for (int y = 0; y < fg.height; ++y) {
        for (int x = 0; x < fg.width; ++x) {
            int edge_dist = std::min(std::min(x, y), std::min(fg.width - 1 - x, fg.height - 1 - y));
            if (static_cast<double>(edge_dist) < band) {
                ++band_pixels;
                if (fg.at(x, y))
                    ++band_fg;
            }
        }
    }
    if (band_pixels > 0 &&
        static_cast<double>(band_fg) / static_cast<double>(band_pixels) >
            params.max_border_fg_fraction)
        return {false, PruneReason::border_fg};
    return {true, PruneReason::ok};
}

std::vector<int> sample_frame_indices(int shot_length) {
    if (shot_length < 1)
        throw ValidationError("sample_frame_indices: shot_length must be >= 1");
    int stride = (shot_length + 9) / 10;
    std::vector<int> indices;
    for (int i = 0; i < shot_length; i += stride)
        indices.push_back(i);
    return indices;
}

void write_prune_report(const std::string& path, const std::vector<std::string>& frame_ids,
                        const std::vector<PruneDecision>& decisions) {
    if (frame_ids.size() != decisions.size())
        throw ValidationError("write_prune_report: id/decision count mismatch");
    std::ofstream out(path);
    if (!out)
        throw IoError(path + ": cannot open for writing");
    for (std::size_t i = 0; i < frame_ids.size(); ++i)
        out << frame_ids[i] << ' ' << (decisions[i].keep ? "keep" : "discard") << ' '
            << prune_reason_name(decisions[i].reason) << '\n';
    if (!out)
        throw IoError(path + ": write failed");
}

std::vector<std::pair<std::string, PruneDecision>> read_prune_report(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError(path + ": cannot open for reading");
    std::vector<std::pair<std::string, PruneDecision>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string id, verdict, reason;
        if (!(ss >> id >> verdict >> reason))
            throw IoError(path + ": malformed prune report line '" + line + "'");
        PruneDecision d;
        d.keep = verdict == "keep";
        if (reason == "ok")
            d.reason = PruneReason::ok;
        else if (reason == "too_much_fg")
            d.reason = PruneReason::too_much_fg;
        else if (reason == "too_little_fg")
            d.reason = PruneReason::too_little_fg;
        else if (reason == "border_fg")
            d.reason = PruneReason::border_fg;
        else
            throw IoError(path + ": unknown prune reason '" + reason + "'");
        out.emplace_back(id, d);
    }
    return out;
}

void write_shots(const std::string& path, const std::vector<Shot>& shots) {
    std::ofstream out(path);
    if (!out)
        throw IoError(path + ": cannot open for writing");
    for (const Shot& s : shots)
        out << s.start_frame << ' ' << s.end_frame << '\n';
    if (!out)
        throw IoError(path + ": write failed");
}

std::vector<Shot> read_shots(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError(path + ": cannot open for reading");
    std::vector<Shot> shots;
    int a, b;
    while (in >> a >> b)
        shots.push_back({a, b});
    return shots;
}

} // namespace moveseg
