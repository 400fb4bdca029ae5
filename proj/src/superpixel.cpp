#include "moveseg/superpixel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>

namespace moveseg {

namespace {

struct Pixel3 {
    double c0, c1, c2;
};

double srgb_to_linear(double v) {
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    return t > delta * delta * delta ? std::cbrt(t)
                                     : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

Pixel3 rgb_to_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    double r = srgb_to_linear(r8 / 255.0);
    double g = srgb_to_linear(g8 / 255.0);
    double b = srgb_to_linear(b8 / 255.0);
    // sRGB D65
    double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    double fx = lab_f(x / 0.95047);
    double fy = lab_f(y / 1.0);
    double fz = lab_f(z / 1.08883);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::vector<Pixel3> convert_colors(const RasterU8& rgb, SlicColorSpace space) {
    std::vector<Pixel3> out(rgb.pixel_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::uint8_t* px = &rgb.data[i * rgb.channels];
        std::uint8_t r = px[0];
        std::uint8_t g = rgb.channels == 3 ? px[1] : px[0];
        std::uint8_t b = rgb.channels == 3 ? px[2] : px[0];
        if (space == SlicColorSpace::lab)
            out[i] = rgb_to_lab(r, g, b);
        else
            out[i] = {static_cast<double>(r), static_cast<double>(g), static_cast<double>(b)};
    }
    return out;
}

struct Center {
    double c0 = 0, c1 = 0, c2 = 0, x = 0, y = 0;
};

// Connected components (4-connectivity) of the raw assignment map.
struct Components {
    std::vector<int> comp;         // per-pixel component id
    std::vector<int> size;         // per-component pixel count
    std::vector<int> assign_label; // the k-means label each component carried
};

Components connected_components(const std::vector<int>& assign, int w, int h) {
    Components cc;
    cc.comp.assign(assign.size(), -1);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < assign.size(); ++start) {
        if (cc.comp[start] >= 0)
            continue;
        int id = static_cast<int>(cc.size.size());
        cc.size.push_back(0);
        cc.assign_label.push_back(assign[start]);
        stack.push_back(start);
        cc.comp[start] = id;
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            ++cc.size[static_cast<std::size_t>(id)];
            int x = static_cast<int>(i % static_cast<std::size_t>(w));
            int y = static_cast<int>(i / static_cast<std::size_t>(w));
            const int nx[4] = {x - 1, x + 1, x, x};
            const int ny[4] = {y, y, y - 1, y + 1};
            for (int n = 0; n < 4; ++n) {
                if (nx[n] < 0 || nx[n] >= w || ny[n] < 0 || ny[n] >= h)
                    continue;
                std::size_t j = static_cast<std::size_t>(ny[n]) * w + nx[n];
                if (cc.comp[j] < 0 && assign[j] == assign[i]) {
                    cc.comp[j] = id;
                    stack.push_back(j);
                }
            }
        }
    }
    return cc;
}

} // namespace

void SlicParams::validate(std::size_t pixel_count) const {
    if (target_regions < 1 || static_cast<std::size_t>(target_regions) > pixel_count)
        throw ValidationError("slic: target_regions out of range");
    if (iterations < 1)
        throw ValidationError("slic: iterations must be >= 1");
    if (compactness <= 0.0)
        throw ValidationError("slic: compactness must be > 0");
}

SuperpixelLabeling slic(const RasterU8& rgb, const SlicParams& params) {
    const int w = rgb.width, h = rgb.height;
    const std::size_t n = rgb.pixel_count();
    params.validate(n);

    std::vector<Pixel3> colors = convert_colors(rgb, params.colorspace);

    // Grid seeding.
    const double grid_interval = std::sqrt(static_cast<double>(n) / params.target_regions);
    int nx = std::max(1, static_cast<int>(std::lround(w / grid_interval)));
    int ny = std::max(1, static_cast<int>(std::lround(h / grid_interval)));
    std::vector<Center> centers;
    centers.reserve(static_cast<std::size_t>(nx) * ny);
    for (int gy = 0; gy < ny; ++gy) {
        for (int gx = 0; gx < nx; ++gx) {
            double cx = (gx + 0.5) * w / nx;
            double cy = (gy + 0.5) * h / ny;
            int px = std::min(w - 1, static_cast<int>(cx));
            int py = std::min(h - 1, static_cast<int>(cy));
            const Pixel3& col = colors[static_cast<std::size_t>(py) * w + px];
            centers.push_back({col.c0, col.c1, col.c2, cx, cy});
        }
    }

    const double spatial_weight = params.compactness / grid_interval;
    const int search = std::max(1, static_cast<int>(std::ceil(2.0 * grid_interval)));
    std::vector<int> assign(n, -1);
    std::vector<double> best(n);

    for (int iter = 0; iter < params.iterations; ++iter) {
        std::fill(best.begin(), best.end(), std::numeric_limits<double>::infinity());
        std::fill(assign.begin(), assign.end(), -1);
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const Center& ctr = centers[c];
            int x0 = std::max(0, static_cast<int>(ctr.x) - search);
            int x1 = std::min(w - 1, static_cast<int>(ctr.x) + search);
            int y0 = std::max(0, static_cast<int>(ctr.y) - search);
            int y1 = std::min(h - 1, static_cast<int>(ctr.y) + search);
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    std::size_t i = static_cast<std::size_t>(y) * w + x;
                    const Pixel3& col = colors[i];
                    double dc = std::sqrt((col.c0 - ctr.c0) * (col.c0 - ctr.c0) +
                                          (col.c1 - ctr.c1) * (col.c1 - ctr.c1) +
                                          (col.c2 - ctr.c2) * (col.c2 - ctr.c2));
                    double ds = std::hypot(x - ctr.x, y - ctr.y);
                    double d = dc + spatial_weight * ds;
                    if (d < best[i]) {
                        best[i] = d;
                        assign[i] = static_cast<int>(c);
                    }
                }
            }
        }
        // Pixels outside every search window fall back to the spatially
        // nearest center.
        for (std::size_t i = 0; i < n; ++i) {
            if (assign[i] >= 0)
                continue;
            int x = static_cast<int>(i % static_cast<std::size_t>(w));
            int y = static_cast<int>(i / static_cast<std::size_t>(w));
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < centers.size(); ++c) {
                double d = std::hypot(x - centers[c].x, y - centers[c].y);
                if (d < best_d) {
                    best_d = d;
                    assign[i] = static_cast<int>(c);
                }
            }
        }
        // Center update: mean color and position of members.
        std::vector<Center> acc(centers.size());
        std::vector<std::size_t> count(centers.size(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t c = static_cast<std::size_t>(assign[i]);
            const Pixel3& col = colors[i];
            acc[c].c0 += col.c0;
            acc[c].c1 += col.c1;
            acc[c].c2 += col.c2;
            acc[c].x += static_cast<double>(i % static_cast<std::size_t>(w));
            acc[c].y += static_cast<double>(i / static_cast<std::size_t>(w));
            ++count[c];
        }
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (count[c] == 0)
                continue; // empty cluster keeps its center
            double inv = 1.0 / static_cast<double>(count[c]);
            centers[c] = {acc[c].c0 * inv, acc[c].c1 * inv, acc[c].c2 * inv, acc[c].x * inv,
                          acc[c].y * inv};
        }
    }

    // Connectivity enforcement.
    Components cc = connected_components(assign, w, h);
    const double min_size = static_cast<double>(n) / params.target_regions / 4.0;
    int ncomp = static_cast<int>(cc.size.size());

    // Boundary lengths between component pairs.
    std::vector<std::map<int, int>> boundary(static_cast<std::size_t>(ncomp));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int a = cc.comp[static_cast<std::size_t>(y) * w + x];
            if (x + 1 < w) {
                int b = cc.comp[static_cast<std::size_t>(y) * w + x + 1];
                if (a != b) {
                    ++boundary[static_cast<std::size_t>(a)][b];
                    ++boundary[static_cast<std::size_t>(b)][a];
                }
            }
            if (y + 1 < h) {
                int b = cc.comp[(static_cast<std::size_t>(y) + 1) * w + x];
                if (a != b) {
                    ++boundary[static_cast<std::size_t>(a)][b];
                    ++boundary[static_cast<std::size_t>(b)][a];
                }
            }
        }
    }

    // Merge small components, smallest first, into the neighbor sharing the
    // longest boundary. merged_into chains resolve with find().
    std::vector<int> merged_into(static_cast<std::size_t>(ncomp), -1);
    auto find_root = [&](int c) {
        while (merged_into[static_cast<std::size_t>(c)] >= 0)
            c = merged_into[static_cast<std::size_t>(c)];
        return c;
    };
    std::vector<int> order(static_cast<std::size_t>(ncomp));
    for (int i = 0; i < ncomp; ++i)
        order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return cc.size[static_cast<std::size_t>(a)] < cc.size[static_cast<std::size_t>(b)];
    });
    for (int c : order) {
        if (static_cast<double>(cc.size[static_cast<std::size_t>(c)]) >= min_size)
            continue;
        // Collapse neighbor boundaries onto current roots.
        std::map<int, int> merged_boundary;
        for (const auto& [nbr, len] : boundary[static_cast<std::size_t>(c)]) {
            int root = find_root(nbr);
            if (root != c)
                merged_boundary[root] += len;
        }
        if (merged_boundary.empty())
            continue; // isolated (single-component image); keep as-is
        int target = -1, best_len = -1;
        for (const auto& [nbr, len] : merged_boundary) {
            if (len > best_len || (len == best_len && nbr < target)) {
                best_len = len;
                target = nbr;
            }
        }
        merged_into[static_cast<std::size_t>(c)] = target;
        cc.size[static_cast<std::size_t>(target)] += cc.size[static_cast<std::size_t>(c)];
        for (const auto& [nbr, len] : boundary[static_cast<std::size_t>(c)]) {
            int root = find_root(nbr);
            if (root != target) {
                boundary[static_cast<std::size_t>(target)][root] += len;
                boundary[static_cast<std::size_t>(root)][target] += len;
            }
        }
    }

    // Renumber surviving components in scan order of their first pixel.
    SuperpixelLabeling out;
    out.width = w;
    out.height = h;
    out.labels.assign(n, -1);
    std::vector<int> new_id(static_cast<std::size_t>(ncomp), -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        int root = find_root(cc.comp[i]);
        if (new_id[static_cast<std::size_t>(root)] < 0)
            new_id[static_cast<std::size_t>(root)] = next++;
        out.labels[i] = new_id[static_cast<std::size_t>(root)];
    }
    out.region_count = next;
    out.sizes.assign(static_cast<std::size_t>(next), 0);
    out.centroids.assign(static_cast<std::size_t>(next), {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        int lbl = out.labels[i];
        ++out.sizes[static_cast<std::size_t>(lbl)];
        out.centroids[static_cast<std::size_t>(lbl)].first +=
            static_cast<double>(i % static_cast<std::size_t>(w));
        out.centroids[static_cast<std::size_t>(lbl)].second +=
            static_cast<double>(i / static_cast<std::size_t>(w));
    }
    for (int r = 0; r < next; ++r) {
        double inv = 1.0 / out.sizes[static_cast<std::size_t>(r)];
        out.centroids[static_cast<std::size_t>(r)].first *= inv;
        out.centroids[static_cast<std::size_t>(r)].second *= inv;
    }
    return out;
}

std::vector<double> region_means(const SuperpixelLabeling& labeling, const RasterF64& values) {
    if (labeling.width != values.width || labeling.height != values.height)
        throw ValidationError("region_means: dimension mismatch");
    std::vector<double> sum(static_cast<std::size_t>(labeling.region_count), 0.0);
    for (std::size_t i = 0; i < values.data.size(); ++i)
        sum[static_cast<std::size_t>(labeling.labels[i])] += values.data[i];
    for (int r = 0; r < labeling.region_count; ++r)
        sum[static_cast<std::size_t>(r)] /= labeling.sizes[static_cast<std::size_t>(r)];
    return sum;
}

std::vector<std::vector<std::size_t>> region_pixels(const SuperpixelLabeling& labeling) {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(labeling.region_count));
    for (int r = 0; r < labeling.region_count; ++r)
        out[static_cast<std::size_t>(r)].reserve(
            static_cast<std::size_t>(labeling.sizes[static_cast<std::size_t>(r)]));
    for (std::size_t i = 0; i < labeling.labels.size(); ++i)
        out[static_cast<std::size_t>(labeling.labels[i])].push_back(i);
    return out;
}

void write_labeling(const std::string& path, const SuperpixelLabeling& labeling) {
    if (labeling.region_count > 65536)
        throw ValidationError("write_labeling: more than 65536 regions");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError(path + ": cannot open for writing");
    out << labeling.width << ' ' << labeling.height << ' ' << labeling.region_count << '\n';
    for (int lbl : labeling.labels) {
        out.put(static_cast<char>((lbl >> 8) & 0xff));
        out.put(static_cast<char>(lbl & 0xff));
    }
    if (!out)
        throw IoError(path + ": write failed");
}

SuperpixelLabeling read_labeling(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(path + ": cannot open for reading");
    SuperpixelLabeling lab;
    if (!(in >> lab.width >> lab.height >> lab.region_count))
        throw IoError(path + ": malformed labeling header");
    in.get();
    std::size_t n = static_cast<std::size_t>(lab.width) * lab.height;
    lab.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        int hi = in.get(), lo = in.get();
        if (hi < 0 || lo < 0)
            throw IoError(path + ": truncated labeling grid");
        lab.labels[i] = (hi << 8) | lo;
    }
    lab.sizes.assign(static_cast<std::size_t>(lab.region_count), 0);
    lab.centroids.assign(static_cast<std::size_t>(lab.region_count), {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        int lbl = lab.labels[i];
        if (lbl < 0 || lbl >= lab.region_count)
            throw IoError(path + ": label outside region_count");
        ++lab.sizes[static_cast<std::size_t>(lbl)];
        lab.centroids[static_cast<std::size_t>(lbl)].first +=
            static_cast<double>(i % static_cast<std::size_t>(lab.width));
        lab.centroids[static_cast<std::size_t>(lbl)].second +=
            static_cast<double>(i / static_cast<std::size_t>(lab.width));
    }
    for (int r = 0; r < lab.region_count; ++r) {
        if (lab.sizes[static_cast<std::size_t>(r)] == 0)
            throw IoError(path + ": empty region id");
        double inv = 1.0 / lab.sizes[static_cast<std::size_t>(r)];
        lab.centroids[static_cast<std::size_t>(r)].first *= inv;
        lab.centroids[static_cast<std::size_t>(r)].second *= inv;
    }
    return lab;
}

} // namespace moveseg
