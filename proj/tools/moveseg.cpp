// moveseg — unsupervised motion segmentation, dataset generation, and the
// mask-prediction learner, end to end on frame directories.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moveseg/pipeline.hpp"

namespace {

using namespace moveseg;

PipelineConfig load_config(const std::string& config_path, std::optional<std::uint64_t> seed,
                           std::optional<int> workers) {
    PipelineConfig config =
        config_path.empty() ? PipelineConfig{} : parse_config_file(config_path);
    if (seed)
        config.seed = *seed;
    if (workers)
        config.workers = *workers;
    config.validate();
    return config;
}

std::optional<Side> parse_side(const std::string& text) {
    if (text == "random" || text.empty())
        return std::nullopt;
    if (text == "left")
        return Side::left;
    if (text == "right")
        return Side::right;
    if (text == "top")
        return Side::top;
    if (text == "bottom")
        return Side::bottom;
    throw ValidationError("degrade: unknown side '" + text + "'");
}

// "--video name=frames,labels[,prune[,shots]]"
VideoInputs parse_video_spec(const std::string& spec, bool masks_are_binary) {
    VideoInputs v;
    v.masks_are_binary = masks_are_binary;
    std::size_t eq = spec.find('=');
    if (eq == std::string::npos)
        throw ValidationError("dataset: video spec must be name=frames_dir,labels_dir[,...]");
    v.name = spec.substr(0, eq);
    std::vector<std::string> parts;
    std::string rest = spec.substr(eq + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        std::size_t comma = rest.find(',', pos);
        if (comma == std::string::npos) {
            parts.push_back(rest.substr(pos));
            break;
        }
        parts.push_back(rest.substr(pos, comma - pos));
        pos = comma + 1;
    }
    if (parts.size() < 2)
        throw ValidationError("dataset: video spec needs at least frames_dir,labels_dir");
    v.frames_dir = parts[0];
    v.labels_dir = parts[1];
    if (parts.size() > 2)
        v.prune_report = parts[2];
    if (parts.size() > 3)
        v.shots_file = parts[3];
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"unsupervised motion segmentation pipeline"};
    app.require_subcommand(1);

    std::string config_path, in_dir, out_path, video_name = "video";
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    app.add_option("--config", config_path, "pipeline config file")->capture_default_str();
    app.add_option("--seed", seed, "override config seed");
    app.add_option("--workers", workers, "override worker count");

    auto* cmd_defaults = app.add_subcommand("defaults", "print every config key with defaults");

    SynthArgs synth_args;
    auto* cmd_synth = app.add_subcommand("synth", "generate synthetic fixtures");
    cmd_synth->add_option("--kind", synth_args.kind, "moving_square | static | shapes")
        ->required();
    cmd_synth->add_option("--out", synth_args.out_dir, "output directory")->required();
    cmd_synth->add_option("--count", synth_args.count, "frame or sample count");
    cmd_synth->add_option("--size", synth_args.size, "frame side in pixels");
    cmd_synth->add_option("--square-frac", synth_args.square_area_fraction,
                          "square share of frame pixels");
    cmd_synth->add_option("--speed", synth_args.speed, "translation in px/frame");
    cmd_synth->add_option("--color-jitter", synth_args.jitter, "per-frame gain jitter strength");

    auto* cmd_flow = app.add_subcommand("flow", "dense flow for consecutive frame pairs");
    cmd_flow->add_option("--in", in_dir, "frame directory")->required();
    cmd_flow->add_option("--out", out_path, "output directory")->required();

    auto* cmd_superpixel = app.add_subcommand("superpixel", "superpixel labelings per frame");
    cmd_superpixel->add_option("--in", in_dir, "frame directory")->required();
    cmd_superpixel->add_option("--out", out_path, "output directory")->required();

    auto* cmd_shots = app.add_subcommand("shots", "appearance-based shot detection");
    cmd_shots->add_option("--in", in_dir, "frame directory")->required();
    cmd_shots->add_option("--out", out_path, "shot list file")->required();

    auto* cmd_segment = app.add_subcommand("segment", "per-shot motion segmentation");
    cmd_segment->add_option("--in", in_dir, "frame directory")->required();
    cmd_segment->add_option("--out", out_path, "output directory")->required();
    cmd_segment->add_option("--video-name", video_name, "provenance name in the manifest");

    auto* cmd_prune = app.add_subcommand("prune", "frame quality heuristics");
    cmd_prune->add_option("--in", in_dir, "probability map directory")->required();
    cmd_prune->add_option("--out", out_path, "report file")->required();

    std::vector<std::string> video_specs;
    std::string frames_dir, labels_dir, prune_report, shots_file;
    bool masks_are_binary = false;
    bool all_frames = false;
    double subsample_fraction = 1.0;
    auto* cmd_dataset = app.add_subcommand("dataset", "build a training dataset");
    cmd_dataset->add_option("--video", video_specs,
                            "repeatable: name=frames_dir,labels_dir[,prune[,shots]]");
    cmd_dataset->add_option("--frames", frames_dir, "single-video frames directory");
    cmd_dataset->add_option("--labels", labels_dir, "single-video probability/mask directory");
    cmd_dataset->add_option("--prune-report", prune_report, "single-video prune report");
    cmd_dataset->add_option("--shots", shots_file, "single-video shot list");
    cmd_dataset->add_flag("--binary-masks", masks_are_binary,
                          "labels are binary masks, not probability maps");
    cmd_dataset->add_flag("--all-frames", all_frames,
                          "use every frame instead of sampling 5-10 per shot");
    cmd_dataset->add_option("--subsample-fraction", subsample_fraction,
                            "seeded manifest subsample in (0, 1]");
    cmd_dataset->add_option("--out", out_path, "dataset directory")->required();

    DegradeArgs degrade_args;
    std::string degrade_side = "random";
    auto* cmd_degrade = app.add_subcommand("degrade", "degrade binary masks");
    cmd_degrade->add_option("--in", in_dir, "mask directory")->required();
    cmd_degrade->add_option("--out", out_path, "output directory")->required();
    cmd_degrade->add_option("--mode", degrade_args.mode, "boundary | truncate")->required();
    cmd_degrade->add_option("--kernel", degrade_args.kernel_size, "boundary kernel size");
    cmd_degrade->add_option("--fraction", degrade_args.area_fraction, "truncation fraction");
    cmd_degrade->add_option("--side", degrade_side, "left|right|top|bottom|random");

    std::string checkpoint_path, loss_report_path, manifest_override;
    auto* cmd_train = app.add_subcommand("train", "train the mask predictor");
    cmd_train->add_option("--in", in_dir, "dataset directory")->required();
    cmd_train->add_option("--checkpoint", checkpoint_path, "output checkpoint")->required();
    cmd_train->add_option("--loss-report", loss_report_path, "output loss report")->required();
    cmd_train->add_option("--manifest", manifest_override, "manifest override");

    auto* cmd_infer = app.add_subcommand("infer", "predict masks for images");
    cmd_infer->add_option("--checkpoint", checkpoint_path, "model checkpoint")->required();
    cmd_infer->add_option("--in", in_dir, "image directory")->required();
    cmd_infer->add_option("--out", out_path, "output directory")->required();

    std::string pred_dir, pred_b_dir, gt_dir;
    auto* cmd_eval = app.add_subcommand("eval", "score predictions against ground truth");
    cmd_eval->add_option("--pred", pred_dir, "prediction directory")->required();
    cmd_eval->add_option("--pred-b", pred_b_dir, "second source to compare");
    cmd_eval->add_option("--gt", gt_dir, "ground truth mask directory")->required();
    cmd_eval->add_option("--out", out_path, "report file (compare mode appends .a/.b)")
        ->required();

    std::string image_path, mask_path;
    auto* cmd_overlay = app.add_subcommand("overlay", "blend a mask over an image");
    cmd_overlay->add_option("--image", image_path, "P6 input image")->required();
    cmd_overlay->add_option("--mask", mask_path, "P5 mask or probability map")->required();
    cmd_overlay->add_option("--out", out_path, "P6 overlay output")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_defaults->parsed()) {
            std::cout << config_defaults_text();
            return 0;
        }
        if (cmd_synth->parsed()) {
            synth_args.seed = seed.value_or(PipelineConfig{}.seed);
            run_synth(synth_args);
            return 0;
        }
        PipelineConfig config = load_config(config_path, seed, workers);
        if (cmd_flow->parsed())
            run_flow(in_dir, out_path, config);
        else if (cmd_superpixel->parsed())
            run_superpixel(in_dir, out_path, config);
        else if (cmd_shots->parsed())
            run_shots(in_dir, out_path, config);
        else if (cmd_segment->parsed())
            run_segment(in_dir, out_path, video_name, config);
        else if (cmd_prune->parsed())
            run_prune(in_dir, out_path, config);
        else if (cmd_dataset->parsed()) {
            std::vector<VideoInputs> videos;
            for (const std::string& spec : video_specs)
                videos.push_back(parse_video_spec(spec, masks_are_binary));
            if (!frames_dir.empty()) {
                VideoInputs v{video_name, frames_dir, labels_dir, prune_report, shots_file,
                              masks_are_binary};
                videos.push_back(std::move(v));
            }
            if (videos.empty())
                throw ValidationError("dataset: provide --video specs or --frames/--labels");
            run_dataset(videos, out_path, config, subsample_fraction, !all_frames);
        } else if (cmd_degrade->parsed()) {
            degrade_args.side = parse_side(degrade_side);
            degrade_args.seed = config.seed;
            run_degrade(in_dir, out_path, degrade_args);
        } else if (cmd_train->parsed())
            run_train(in_dir, checkpoint_path, loss_report_path, config, manifest_override);
        else if (cmd_infer->parsed())
            run_infer(checkpoint_path, in_dir, out_path, config);
        else if (cmd_eval->parsed()) {
            if (pred_b_dir.empty()) {
                run_eval(pred_dir, gt_dir, out_path, config);
            } else {
                run_eval(pred_dir, gt_dir, out_path + ".a", config);
                run_eval(pred_b_dir, gt_dir, out_path + ".b", config);
            }
        } else if (cmd_overlay->parsed())
            run_overlay(image_path, mask_path, out_path);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
