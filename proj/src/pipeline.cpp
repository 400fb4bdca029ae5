#include "moveseg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <thread>

#include "moveseg/pnm.hpp"
#include "moveseg/resample.hpp"
#include "moveseg/rng.hpp"
#include "moveseg/synth.hpp"

namespace fs = std::filesystem;

namespace moveseg {

namespace {

std::string indexed(const std::string& stem, int i, const std::string& ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%06d%s", stem.c_str(), i, ext.c_str());
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError(dir + ": cannot create directory");
}

} // namespace

std::vector<std::string> list_files(const std::string& dir, const std::string& ext) {
    if (!fs::is_directory(dir))
        throw IoError(dir + ": not a directory");
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ext)
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<RasterU8> load_frames(const std::string& dir) {
    std::vector<std::string> files = list_files(dir, ".ppm");
    if (files.empty())
        throw IoError(dir + ": no .ppm frames found");
    std::vector<RasterU8> frames;
    frames.reserve(files.size());
    for (const std::string& f : files)
        frames.push_back(read_pnm(f));
    return frames;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    int count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    for (int t = 0; t < count; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

void run_synth(const SynthArgs& args) {
    if (args.kind == "moving_square" || args.kind == "static") {
        ensure_dir(args.out_dir + "/frames");
        ensure_dir(args.out_dir + "/gt");
        SyntheticVideo video;
        if (args.kind == "moving_square") {
            MovingSquareParams p;
            p.width = args.size;
            p.height = args.size;
            p.frame_count = args.count;
            p.square_area_fraction = args.square_area_fraction;
            p.speed = args.speed;
            video = moving_square_video(p, args.seed);
        } else {
            video = static_video(args.size, args.size, args.count, args.seed);
        }
        if (args.jitter > 0.0)
            video.frames = color_jitter(video.frames, args.jitter, args.seed + 1);
        for (std::size_t t = 0; t < video.frames.size(); ++t) {
            write_pnm(args.out_dir + "/frames/" + indexed("frame", static_cast<int>(t), ".ppm"),
                      video.frames[t]);
            write_mask_pgm(args.out_dir + "/gt/" + indexed("mask", static_cast<int>(t), ".pgm"),
                           video.gt_masks[t]);
        }
    } else if (args.kind == "shapes") {
        ensure_dir(args.out_dir + "/images");
        ensure_dir(args.out_dir + "/masks");
        for (int i = 0; i < args.count; ++i) {
            ShapesSample s = shapes_sample(args.size, mix_seed(args.seed, 0x5a5a, i));
            write_pnm(args.out_dir + "/images/" + indexed("img", i, ".ppm"), s.image);
            write_mask_pgm(args.out_dir + "/masks/" + indexed("mask", i, ".pgm"), s.gt_mask);
        }
    } else {
        throw ValidationError("synth: unknown kind '" + args.kind + "'");
    }
}

void run_flow(const std::string& frames_dir, const std::string& out_dir,
              const PipelineConfig& config) {
    config.validate();
    std::vector<RasterU8> frames = load_frames(frames_dir);
    if (frames.size() < 2)
        throw ValidationError("flow: need at least 2 frames");
    ensure_dir(out_dir);
    parallel_for(frames.size() - 1, config.workers, [&](std::size_t t) {
        FlowField flow = dense_flow(to_grayscale(frames[t]), to_grayscale(frames[t + 1]),
                                    config.flow);
        write_flow(out_dir + "/" + indexed("flow", static_cast<int>(t), ""), flow);
    });
}

void run_superpixel(const std::string& frames_dir, const std::string& out_dir,
                    const PipelineConfig& config) {
    config.validate();
    std::vector<RasterU8> frames = load_frames(frames_dir);
    ensure_dir(out_dir);
    parallel_for(frames.size(), config.workers, [&](std::size_t t) {
        SuperpixelLabeling lab = slic(frames[t], config.slic);
        write_labeling(out_dir + "/" + indexed("sp", static_cast<int>(t), ".bin"), lab);
    });
}

void run_shots(const std::string& frames_dir, const std::string& out_path,
               const PipelineConfig& config) {
    config.validate();
    std::vector<RasterU8> frames = load_frames(frames_dir);
    write_shots(out_path,
                detect_shots(frames, config.shots_hist_bins, config.shots_cut_threshold));
}

void run_segment(const std::string& frames_dir, const std::string& out_dir,
                 const std::string& video_name, const PipelineConfig& config) {
    config.validate();
    std::vector<RasterU8> frames = load_frames(frames_dir);
    ensure_dir(out_dir);
    std::vector<Shot> shots =
        detect_shots(frames, config.shots_hist_bins, config.shots_cut_threshold);
    write_shots(out_dir + "/shots.txt", shots);

    std::vector<ProbMap> probs(frames.size());
    // Shots are independent units of work.
    parallel_for(shots.size(), config.workers, [&](std::size_t si) {
        const Shot& shot = shots[si];
        std::size_t begin = static_cast<std::size_t>(shot.start_frame);
        std::size_t end = static_cast<std::size_t>(shot.end_frame) + 1;
        if (end - begin < 2) {
            // A single-frame shot has no motion signal; emit all-zeros.
            probs[begin] = ProbMap(frames[begin].width, frames[begin].height, 0.0);
            return;
        }
        std::vector<RasterU8> shot_frames(frames.begin() + static_cast<std::ptrdiff_t>(begin),
                                          frames.begin() + static_cast<std::ptrdiff_t>(end));
        std::vector<FlowField> flows(end - begin - 1);
        for (std::size_t i = 0; i + 1 < shot_frames.size(); ++i)
            flows[i] = dense_flow(to_grayscale(shot_frames[i]), to_grayscale(shot_frames[i + 1]),
                                  config.flow);
        ShotSegmentation seg = unlc_segment(shot_frames, flows, config.unlc_config());
        for (std::size_t i = 0; i < seg.frame_probs.size(); ++i)
            probs[begin + i] = std::move(seg.frame_probs[i]);
    });

    std::ofstream manifest(out_dir + "/manifest.tsv");
    if (!manifest)
        throw IoError(out_dir + "/manifest.tsv: cannot open for writing");
    for (std::size_t t = 0; t < probs.size(); ++t) {
        std::string name = indexed("prob", static_cast<int>(t), ".pgm");
        write_prob_pgm(out_dir + "/" + name, probs[t]);
        manifest << name << '\t' << video_name << '\t' << t << '\n';
    }
}

void run_prune(const std::string& probs_dir, const std::string& out_path,
               const PipelineConfig& config) {
    config.validate();
    std::vector<std::string> files = list_files(probs_dir, ".pgm");
    if (files.empty())
        throw IoError(probs_dir + ": no .pgm probability maps found");
    std::vector<std::string> ids;
    std::vector<PruneDecision> decisions;
    for (std::size_t t = 0; t < files.size(); ++t) {
        ids.push_back(std::to_string(t));
        decisions.push_back(prune_frame(read_prob_pgm(files[t]), config.prune));
    }
    write_prune_report(out_path, ids, decisions);
}

std::vector<ManifestEntry> run_dataset(const std::vector<VideoInputs>& videos,
                                       const std::string& out_dir, const PipelineConfig& config,
                                       double subsample_fraction, bool sample_per_shot) {
    config.validate();
    std::vector<FrameRecord> records;
    for (const VideoInputs& video : videos) {
        std::vector<std::string> frame_files = list_files(video.frames_dir, ".ppm");
        std::vector<std::string> label_files = list_files(video.labels_dir, ".pgm");
        if (frame_files.size() != label_files.size())
            throw ValidationError("dataset: frame/label count mismatch for video '" +
                                  video.name + "'");
        const int n = static_cast<int>(frame_files.size());

        std::vector<bool> keep(static_cast<std::size_t>(n), true);
        if (!video.prune_report.empty())
            for (const auto& [id, decision] : read_prune_report(video.prune_report)) {
                int idx = std::stoi(id);
                if (idx >= 0 && idx < n)
                    keep[static_cast<std::size_t>(idx)] = decision.keep;
            }

        std::vector<Shot> shots = video.shots_file.empty()
                                      ? std::vector<Shot>{{0, n - 1}}
                                      : read_shots(video.shots_file);

        for (std::size_t si = 0; si < shots.size(); ++si) {
            const Shot& shot = shots[si];
            const int shot_len = shot.end_frame - shot.start_frame + 1;
            std::vector<int> offsets;
            if (sample_per_shot) {
                offsets = sample_frame_indices(shot_len);
            } else {
                offsets.resize(static_cast<std::size_t>(shot_len));
                std::iota(offsets.begin(), offsets.end(), 0);
            }
            for (int offset : offsets) {
                int t = shot.start_frame + offset;
                if (t < 0 || t >= n || !keep[static_cast<std::size_t>(t)])
                    continue;
                FrameRecord rec;
                rec.video = video.name;
                rec.shot = static_cast<int>(si);
                rec.frame = t;
                rec.image = read_pnm(frame_files[static_cast<std::size_t>(t)]);
                rec.prob = video.masks_are_binary
                               ? mask_to_prob(read_mask_pgm(label_files[static_cast<std::size_t>(t)]))
                               : read_prob_pgm(label_files[static_cast<std::size_t>(t)]);
                records.push_back(std::move(rec));
            }
        }
    }

    std::vector<ManifestEntry> manifest =
        build_dataset(records, config.dataset_params(), out_dir);
    if (subsample_fraction < 1.0) {
        manifest = subsample_dataset(manifest, subsample_fraction, config.seed);
        write_manifest(out_dir + "/manifest.tsv", manifest);
    }
    return manifest;
}

void run_train(const std::string& dataset_dir, const std::string& checkpoint_path,
               const std::string& loss_report_path, const PipelineConfig& config,
               const std::string& manifest_override) {
    config.validate();
    std::string manifest_path =
        manifest_override.empty() ? dataset_dir + "/manifest.tsv" : manifest_override;
    std::vector<ManifestEntry> manifest = read_manifest(manifest_path);
    if (manifest.empty())
        throw ValidationError("train: empty manifest " + manifest_path);

    std::vector<TrainSample> samples;
    samples.reserve(manifest.size());
    for (const ManifestEntry& e : manifest) {
        TrainSample s;
        s.image = read_pnm(dataset_dir + "/images/" + e.id + ".ppm");
        s.target = read_trimap_pgm(dataset_dir + "/targets/" + e.id + ".pgm");
        samples.push_back(std::move(s));
    }

    SegNet net = make_segnet(config.net_spec(), config.seed);
    TrainConfig tc = config.train;
    tc.rng_seed = config.seed;
    tc.workers = config.workers;
    LossReport report = train(net, samples, tc);
    save_checkpoint(checkpoint_path, net);
    write_loss_report(loss_report_path, report);
}

void run_infer(const std::string& checkpoint_path, const std::string& images_dir,
               const std::string& out_dir, const PipelineConfig& config) {
    config.validate();
    SegNet net = load_checkpoint(checkpoint_path);
    std::vector<std::string> files = list_files(images_dir, ".ppm");
    if (files.empty())
        throw IoError(images_dir + ": no .ppm images found");
    ensure_dir(out_dir);
    parallel_for(files.size(), config.workers, [&](std::size_t i) {
        RasterU8 image = read_pnm(files[i]);
        if (image.width != net.spec.input_size || image.height != net.spec.input_size)
            image = bilinear_resample(image, {0, 0, image.width, image.height},
                                      net.spec.input_size, net.spec.input_size);
        ProbMap prob = forward(net, image);
        std::string stem = fs::path(files[i]).stem().string();
        write_prob_pgm(out_dir + "/" + stem + ".prob.pgm", prob);
        write_mask_pgm(out_dir + "/" + stem + ".pred.pgm",
                       binarize(prob, config.eval_binarize_threshold));
    });
}

SegScore run_eval(const std::string& pred_dir, const std::string& gt_dir,
                  const std::string& report_path, const PipelineConfig& config) {
    config.validate();
    std::vector<std::string> pred_files = list_files(pred_dir, ".pgm");
    // Inference output holds probability and mask variants; prefer the masks.
    std::vector<std::string> pred_masks;
    for (const std::string& f : pred_files)
        if (f.ends_with(".pred.pgm"))
            pred_masks.push_back(f);
    if (!pred_masks.empty())
        pred_files = std::move(pred_masks);
    std::vector<std::string> gt_files = list_files(gt_dir, ".pgm");
    if (pred_files.size() != gt_files.size())
        throw ValidationError("eval: prediction/ground-truth count mismatch (" +
                              std::to_string(pred_files.size()) + " vs " +
                              std::to_string(gt_files.size()) + ")");

    std::vector<BinaryMask> pred, gt;
    for (std::size_t i = 0; i < pred_files.size(); ++i) {
        BinaryMask p = binarize(read_prob_pgm(pred_files[i]), config.eval_binarize_threshold);
        BinaryMask g = read_mask_pgm(gt_files[i]);
        if (g.width != p.width || g.height != p.height) {
            // Score at the prediction's resolution.
            ProbMap down = downsample_mask(g, p.width);
            g = binarize(down, 0.5);
        }
        pred.push_back(std::move(p));
        gt.push_back(std::move(g));
    }
    SegScore score = score_masks(pred, gt);
    write_score_report(report_path, score);
    return score;
}

void run_overlay(const std::string& image_path, const std::string& mask_path,
                 const std::string& out_path) {
    RasterU8 image = read_pnm(image_path);
    ProbMap prob = read_prob_pgm(mask_path);
    if (prob.width != image.width || prob.height != image.height)
        throw ValidationError("overlay: image/mask dimension mismatch");
    static constexpr int kHighlight[3] = {255, 0, 0};
    RasterU8 out(image.width, image.height, 3);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            bool fg = prob.at(x, y) > 0.5;
            for (int c = 0; c < 3; ++c) {
                int v = image.channels == 3 ? image.at(x, y, c) : image.at(x, y, 0);
                out.at(x, y, c) =
                    fg ? static_cast<std::uint8_t>((v + kHighlight[c] + 1) / 2)
                       : static_cast<std::uint8_t>(v);
            }
        }
    }
    write_pnm(out_path, out);
}

void run_degrade(const std::string& masks_dir, const std::string& out_dir,
                 const DegradeArgs& args) {
    std::vector<std::string> files = list_files(masks_dir, ".pgm");
    if (files.empty())
        throw IoError(masks_dir + ": no .pgm masks found");
    ensure_dir(out_dir);
    for (const std::string& f : files) {
        std::string name = fs::path(f).filename().string();
        BinaryMask mask = read_mask_pgm(f);
        std::uint64_t seed = mix_seed(args.seed, hash_str(name));
        BinaryMask out;
        if (args.mode == "boundary")
            out = degrade_boundary(mask, args.kernel_size, seed);
        else if (args.mode == "truncate")
            out = degrade_truncate(mask, args.area_fraction, args.side, seed);
        else
            throw ValidationError("degrade: unknown mode '" + args.mode + "'");
        write_mask_pgm(out_dir + "/" + name, out);
    }
}

} // namespace moveseg
