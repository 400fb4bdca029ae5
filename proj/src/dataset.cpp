#include "moveseg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "moveseg/pnm.hpp"
#include "moveseg/resample.hpp"
#include "moveseg/rng.hpp"

namespace fs = std::filesystem;

namespace moveseg {

void DatasetParams::validate() const {
    if (crop_size < 1 || target_size < 1)
        throw ValidationError("DatasetParams: crop_size and target_size must be >= 1");
    jitter.validate();
    trimap.validate();
}

namespace {

std::string sample_id(const std::string& video, int frame) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06d", frame);
    return video + "_" + buf;
}

} // namespace

std::vector<ManifestEntry> build_dataset(const std::vector<FrameRecord>& records,
                                         const DatasetParams& params,
                                         const std::string& out_dir) {
    params.validate();

    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "images", ec);
    fs::create_directories(fs::path(out_dir) / "targets", ec);
    if (ec)
        throw IoError(out_dir + ": cannot create dataset directories");

    // Canonical provenance order, independent of caller ordering.
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (records[a].video != records[b].video)
            return records[a].video < records[b].video;
        return records[a].frame < records[b].frame;
    });

    std::vector<ManifestEntry> manifest;
    manifest.reserve(records.size());
    for (std::size_t i : order) {
        const FrameRecord& rec = records[i];
        std::uint64_t seed =
            mix_seed(params.seed, hash_str(rec.video), static_cast<std::uint64_t>(rec.frame));

        JitterParams jitter = params.jitter;
        jitter.rng_seed = seed;
        RasterU8 crop_img;
        ProbMap crop_prob;
        if (params.crop_to_object) {
            auto [img, prob] = sample_crop(rec.image, rec.prob, jitter, params.crop_size,
                                           params.trimap.pos_threshold);
            crop_img = std::move(img);
            crop_prob = std::move(prob);
        } else {
            BBox full{0, 0, rec.image.width, rec.image.height};
            crop_img = bilinear_resample(rec.image, full, params.crop_size, params.crop_size);
            crop_prob = area_resample(rec.prob, full, params.crop_size, params.crop_size);
        }
        ProbMap target_prob = area_resample(crop_prob, {0, 0, crop_prob.width, crop_prob.height},
                                            params.target_size, params.target_size);
        Trimap target = to_trimap(target_prob, params.trimap);

        ManifestEntry entry{sample_id(rec.video, rec.frame), rec.video, rec.frame, rec.shot,
                            seed};
        write_pnm((fs::path(out_dir) / "images" / (entry.id + ".ppm")).string(), crop_img);
        write_trimap_pgm((fs::path(out_dir) / "targets" / (entry.id + ".pgm")).string(), target);
        manifest.push_back(std::move(entry));
    }

    if (manifest.empty())
        std::cerr << "warning: empty dataset (all frames pruned)\n";
    write_manifest((fs::path(out_dir) / "manifest.tsv").string(), manifest);
    return manifest;
}

std::vector<ManifestEntry> subsample_dataset(const std::vector<ManifestEntry>& manifest,
                                             double fraction, std::uint64_t rng_seed) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw ValidationError("subsample_dataset: fraction must be in (0, 1]");
    std::size_t n = manifest.size();
    std::size_t m = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    if (m >= n)
        return manifest;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(rng_seed);
    rng.shuffle(idx);
    idx.resize(m);
    std::sort(idx.begin(), idx.end());
    std::vector<ManifestEntry> out;
    out.reserve(m);
    for (std::size_t i : idx)
        out.push_back(manifest[i]);
    return out;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& manifest) {
    std::ofstream out(path);
    if (!out)
        throw IoError(path + ": cannot open for writing");
    for (const ManifestEntry& e : manifest)
        out << e.id << '\t' << e.video << '\t' << e.frame << '\t' << e.shot << '\t' << e.seed
            << '\n';
    if (!out)
        throw IoError(path + ": write failed");
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError(path + ": cannot open for reading");
    std::vector<ManifestEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        ManifestEntry e;
        if (!(ss >> e.id >> e.video >> e.frame >> e.shot >> e.seed))
            throw IoError(path + ": malformed manifest line '" + line + "'");
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace moveseg
