#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "moveseg/config.hpp"
#include "moveseg/degrade.hpp"
#include "moveseg/metrics.hpp"

namespace moveseg {

// File-level command implementations behind the CLI. Every function is a
// pure map from (inputs, config, seed) to files; outputs are canonically
// ordered so worker parallelism never changes bytes.

// Sorted file paths with the given extension.
std::vector<std::string> list_files(const std::string& dir, const std::string& ext);

// Frames are numbered P6 files in a directory, sorted lexicographically.
std::vector<RasterU8> load_frames(const std::string& dir);

// Run fn(0..n-1) on a small pool; results must go to distinct slots/files.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

struct SynthArgs {
    std::string kind; // moving_square | static | shapes
    std::string out_dir;
    int count = 8; // frames (videos) or samples (shapes)
    int size = 96;
    std::uint64_t seed = 0;
    double square_area_fraction = 0.10;
    int speed = 4;
    double jitter = 0.0; // per-frame color jitter strength
};

void run_synth(const SynthArgs& args);

// Per consecutive pair t: <out>/flow_<t>.{u.pgm,v.pgm,flowmeta}.
void run_flow(const std::string& frames_dir, const std::string& out_dir,
              const PipelineConfig& config);

// Per frame t: <out>/sp_<t>.bin labelings.
void run_superpixel(const std::string& frames_dir, const std::string& out_dir,
                    const PipelineConfig& config);

void run_shots(const std::string& frames_dir, const std::string& out_path,
               const PipelineConfig& config);

// Shot detection + per-shot uNLC. Writes <out>/prob_<t>.pgm, <out>/shots.txt
// and <out>/manifest.tsv ("<file>\t<video>\t<frame>").
void run_segment(const std::string& frames_dir, const std::string& out_dir,
                 const std::string& video_name, const PipelineConfig& config);

// Prune report over <probs>/*.pgm in frame order; ids are frame indices.
void run_prune(const std::string& probs_dir, const std::string& out_path,
               const PipelineConfig& config);

struct VideoInputs {
    std::string name;
    std::string frames_dir;
    std::string labels_dir;   // probability maps, or binary masks when masks_are_binary
    std::string prune_report; // optional: empty keeps everything
    std::string shots_file;   // optional: empty means one shot
    bool masks_are_binary = false;
};

// Per-shot frame sampling + prune filter + crop/trimap export. With
// sample_per_shot false every frame is a candidate (for inputs that are
// image collections rather than videos).
std::vector<ManifestEntry> run_dataset(const std::vector<VideoInputs>& videos,
                                       const std::string& out_dir, const PipelineConfig& config,
                                       double subsample_fraction = 1.0,
                                       bool sample_per_shot = true);

void run_train(const std::string& dataset_dir, const std::string& checkpoint_path,
               const std::string& loss_report_path, const PipelineConfig& config,
               const std::string& manifest_override = "");

// <stem>.prob.pgm and <stem>.pred.pgm per input image.
void run_infer(const std::string& checkpoint_path, const std::string& images_dir,
               const std::string& out_dir, const PipelineConfig& config);

// Predictions may be probability maps or masks; they are binarized at
// eval.binarize_threshold. Ground truth is resampled to each prediction's
// resolution when they differ.
SegScore run_eval(const std::string& pred_dir, const std::string& gt_dir,
                  const std::string& report_path, const PipelineConfig& config);

// Foreground blended 50/50 with a fixed highlight color (red).
void run_overlay(const std::string& image_path, const std::string& mask_path,
                 const std::string& out_path);

struct DegradeArgs {
    std::string mode; // boundary | truncate
    int kernel_size = 5;
    double area_fraction = 0.25;
    std::optional<Side> side; // truncate side; random when unset
    std::uint64_t seed = 0;
};

void run_degrade(const std::string& masks_dir, const std::string& out_dir,
                 const DegradeArgs& args);

} // namespace moveseg
