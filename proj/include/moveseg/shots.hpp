#pragma once

#include <string>
#include <vector>

#include "moveseg/raster.hpp"

namespace moveseg {

// Maximal run of frames without an abrupt appearance change. Shots partition
// the frame range [0, n-1] without overlap.
struct Shot {
    int start_frame = 0; // inclusive
    int end_frame = 0;   // inclusive

    bool operator==(const Shot&) const = default;
};

struct PruneParams {
    double max_fg_fraction = 0.80;
    double min_fg_fraction = 0.10;
    double border_band_fraction = 0.05;
    double max_border_fg_fraction = 0.10;
    double binarize_threshold = 0.5;

    void validate() const;
};

enum class PruneReason { ok, too_much_fg, too_little_fg, border_fg };

struct PruneDecision {
    bool keep = true;
    PruneReason reason = PruneReason::ok;
};

const char* prune_reason_name(PruneReason reason);

// Cut between frames t and t+1 whenever the chi-square distance of their
// per-channel color histograms exceeds cut_threshold.
std::vector<Shot> detect_shots(const std::vector<RasterU8>& frames, int hist_bins,
                               double cut_threshold);

// Binarize at binarize_threshold, then apply the discard rules in order:
// foreground fraction > max, foreground fraction < min, and foreground
// fraction within the border band > max_border. The first failing rule is
// the reason. All comparisons are strict, so exact-threshold frames pass.
PruneDecision prune_frame(const ProbMap& prob, const PruneParams& params);

// Uniform-stride indices into a shot of the given length: stride
// ceil(len/10), which yields 5-10 frames whenever the shot has at least 5.
std::vector<int> sample_frame_indices(int shot_length);

// Report lines: "<frame-id> <keep|discard> <reason>".
void write_prune_report(const std::string& path, const std::vector<std::string>& frame_ids,
                        const std::vector<PruneDecision>& decisions);
std::vector<std::pair<std::string, PruneDecision>> read_prune_report(const std::string& path);

// Shot list as "<start> <end>" lines.
void write_shots(const std::string& path, const std::vector<Shot>& shots);
std::vector<Shot> read_shots(const std::string& path);

} // namespace moveseg
