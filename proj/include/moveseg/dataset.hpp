#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moveseg/crops.hpp"
#include "moveseg/raster.hpp"
#include "moveseg/trimap.hpp"

namespace moveseg {

// One kept frame entering the dataset builder.
struct FrameRecord {
    std::string video;
    int shot = 0;
    int frame = 0;
    RasterU8 image;
    ProbMap prob; // uNLC output, or a {0,1} map from an external mask
};

struct ManifestEntry {
    std::string id;
    std::string video;
    int frame = 0;
    int shot = 0;
    std::uint64_t seed = 0;

    bool operator==(const ManifestEntry&) const = default;
};

struct DatasetParams {
    int crop_size = 64;   // w
    int target_size = 16; // s
    JitterParams jitter;
    TrimapParams trimap;
    std::uint64_t seed = 0;
    // When false, skip the tight-box crop and use the whole frame resized to
    // crop_size (for inputs that are already object-framed).
    bool crop_to_object = true;

    void validate() const;
};

// Writes <out>/images/<id>.ppm, <out>/targets/<id>.pgm and
// <out>/manifest.tsv (id, video, frame, shot, seed; sorted by provenance).
// Per-sample seeds derive from (seed, video, frame), so the output is
// byte-identical for identical inputs regardless of record order.
// Returns the manifest; empty input yields an empty manifest plus a warning
// on stderr.
std::vector<ManifestEntry> build_dataset(const std::vector<FrameRecord>& records,
                                         const DatasetParams& params,
                                         const std::string& out_dir);

// Seeded uniform subsample without replacement; size round(fraction * n).
// Survivors keep manifest order.
std::vector<ManifestEntry> subsample_dataset(const std::vector<ManifestEntry>& manifest,
                                             double fraction, std::uint64_t rng_seed);

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& manifest);
std::vector<ManifestEntry> read_manifest(const std::string& path);

} // namespace moveseg
