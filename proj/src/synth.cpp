#include "moveseg/synth.hpp"

#include <algorithm>
#include <cmath>

#include "moveseg/rng.hpp"

namespace moveseg {

namespace {

// Smoothed unit-range noise field: white noise, two separable box-blur
// passes, then a full-range stretch.
std::vector<double> smooth_noise(int w, int h, Rng& rng, int radius = 2) {
    std::vector<double> a(static_cast<std::size_t>(w) * h);
    for (double& v : a)
        v = rng.next_double();
    std::vector<double> b(a.size());
    for (int pass = 0; pass < 2; ++pass) {
        // horizontal
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                int cnt = 0;
                for (int d = -radius; d <= radius; ++d) {
                    int xx = std::clamp(x + d, 0, w - 1);
                    acc += a[static_cast<std::size_t>(y) * w + xx];
                    ++cnt;
                }
                b[static_cast<std::size_t>(y) * w + x] = acc / cnt;
            }
        }
        // vertical
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                int cnt = 0;
                for (int d = -radius; d <= radius; ++d) {
                    int yy = std::clamp(y + d, 0, h - 1);
                    acc += b[static_cast<std::size_t>(yy) * w + x];
                    ++cnt;
                }
                a[static_cast<std::size_t>(y) * w + x] = acc / cnt;
            }
        }
    }
    auto [mn, mx] = std::minmax_element(a.begin(), a.end());
    double lo = *mn, span = std::max(*mx - *mn, 1e-9);
    for (double& v : a)
        v = (v - lo) / span;
    return a;
}

} // namespace

RasterU8 textured_frame(int width, int height, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> luma = smooth_noise(width, height, rng);
    RasterU8 out(width, height, 3);
    std::vector<double> tint[3];
    for (int c = 0; c < 3; ++c)
        tint[c] = smooth_noise(width, height, rng, 4);
    for (std::size_t i = 0; i < luma.size(); ++i) {
        double base = 30.0 + 225.0 * luma[i];
        for (int c = 0; c < 3; ++c) {
            double v = base * (0.75 + 0.25 * tint[c][i]);
            out.data[i * 3 + static_cast<std::size_t>(c)] =
                static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }
    }
    return out;
}

SyntheticVideo moving_square_video(const MovingSquareParams& params, std::uint64_t seed) {
    if (params.width < 8 || params.height < 8 || params.frame_count < 2)
        throw ValidationError("moving_square_video: degenerate parameters");
    Rng rng(seed);
    const int w = params.width, h = params.height;
    const int side = std::max(
        2, static_cast<int>(std::lround(std::sqrt(params.square_area_fraction * w * h))));

    RasterU8 background = textured_frame(w, h, rng.next_u64());
    RasterU8 square_tex = textured_frame(side, side, rng.next_u64());
    // Strong seeded tint keeps the square's appearance distinct from the
    // background for matching across frames.
    static constexpr int kTints[4][3] = {{230, 60, 50}, {60, 200, 80}, {70, 90, 230},
                                         {230, 200, 60}};
    const int* tint = kTints[rng.next_below(4)];
    for (std::size_t i = 0; i < square_tex.pixel_count(); ++i)
        for (int c = 0; c < 3; ++c) {
            double v = 0.45 * square_tex.data[i * 3 + static_cast<std::size_t>(c)] +
                       0.55 * tint[c];
            square_tex.data[i * 3 + static_cast<std::size_t>(c)] =
                static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }

    const int travel = params.speed * (params.frame_count - 1);
    const int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    // Pick a direction that fits; fall back across the list deterministically.
    int dir_pick = static_cast<int>(rng.next_below(4));
    int dx = 0, dy = 0;
    for (int attempt = 0; attempt < 4; ++attempt) {
        int cand = (dir_pick + attempt) % 4;
        int span_x = std::abs(dirs[cand][0]) * travel;
        int span_y = std::abs(dirs[cand][1]) * travel;
        if (side + span_x <= w && side + span_y <= h) {
            dx = dirs[cand][0] * params.speed;
            dy = dirs[cand][1] * params.speed;
            break;
        }
    }
    if (dx == 0 && dy == 0)
        throw ValidationError("moving_square_video: square cannot fit the requested travel");

    auto start_in = [&](int extent, int step_total) {
        int lo = step_total < 0 ? -step_total : 0;
        int hi = extent - side - (step_total > 0 ? step_total : 0);
        return lo + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    };
    const int x0 = start_in(w, dx * (params.frame_count - 1));
    const int y0 = start_in(h, dy * (params.frame_count - 1));

    SyntheticVideo video;
    for (int t = 0; t < params.frame_count; ++t) {
        RasterU8 frame = background;
        BinaryMask mask(w, h, false);
        int sx = x0 + t * dx, sy = y0 + t * dy;
        for (int y = 0; y < side; ++y) {
            for (int x = 0; x < side; ++x) {
                for (int c = 0; c < 3; ++c)
                    frame.at(sx + x, sy + y, c) = square_tex.at(x, y, c);
                mask.set(sx + x, sy + y, true);
            }
        }
        video.frames.push_back(std::move(frame));
        video.gt_masks.push_back(std::move(mask));
    }
    return video;
}

SyntheticVideo static_video(int width, int height, int frame_count, std::uint64_t seed) {
    RasterU8 frame = textured_frame(width, height, seed);
    SyntheticVideo video;
    for (int t = 0; t < frame_count; ++t) {
        video.frames.push_back(frame);
        video.gt_masks.emplace_back(width, height, false);
    }
    return video;
}

std::vector<RasterU8> color_jitter(const std::vector<RasterU8>& frames, double strength,
                                   std::uint64_t seed) {
    Rng rng(seed);
    std::vector<RasterU8> out;
    out.reserve(frames.size());
    for (const RasterU8& frame : frames) {
        double gain[3];
        for (double& g : gain)
            g = rng.uniform(1.0 - strength, 1.0 + strength);
        RasterU8 jittered = frame;
        for (std::size_t i = 0; i < frame.pixel_count(); ++i)
            for (int c = 0; c < frame.channels; ++c) {
                std::size_t idx = i * static_cast<std::size_t>(frame.channels) +
                                  static_cast<std::size_t>(c);
                jittered.data[idx] = static_cast<std::uint8_t>(
                    std::clamp(frame.data[idx] * gain[c], 0.0, 255.0));
            }
        out.push_back(std::move(jittered));
    }
    return out;
}

ShapesSample shapes_sample(int size, std::uint64_t seed) {
    if (size < 16)
        throw ValidationError("shapes_sample: size must be >= 16");
    Rng rng(seed);
    ShapesSample sample;
    sample.image = textured_frame(size, size, rng.next_u64());
    // Mute the background so the shape color band stays distinctive.
    for (std::uint8_t& v : sample.image.data)
        v = static_cast<std::uint8_t>(70 + v * 110 / 255);
    sample.gt_mask = BinaryMask(size, size, false);

    const bool ellipse = rng.coin();
    const double cx = rng.uniform(0.30, 0.70) * size;
    const double cy = rng.uniform(0.30, 0.70) * size;
    const double rx = rng.uniform(0.14, 0.34) * size;
    const double ry = rng.uniform(0.14, 0.34) * size;

    // Saturated color: one channel high, one low, one free.
    double color[3];
    int hi = static_cast<int>(rng.next_below(3));
    int lo = (hi + 1 + static_cast<int>(rng.next_below(2))) % 3;
    for (int c = 0; c < 3; ++c) {
        if (c == hi)
            color[c] = rng.uniform(190.0, 250.0);
        else if (c == lo)
            color[c] = rng.uniform(10.0, 60.0);
        else
            color[c] = rng.uniform(40.0, 220.0);
    }

    Rng noise(rng.next_u64());
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            double nx = (x + 0.5 - cx) / rx;
            double ny = (y + 0.5 - cy) / ry;
            bool inside = ellipse ? (nx * nx + ny * ny <= 1.0)
                                  : (std::fabs(nx) <= 1.0 && std::fabs(ny) <= 1.0);
            if (!inside)
                continue;
            sample.gt_mask.set(x, y, true);
            double shade = noise.uniform(-18.0, 18.0);
            for (int c = 0; c < 3; ++c)
                sample.image.at(x, y, c) =
                    static_cast<std::uint8_t>(std::clamp(color[c] + shade, 0.0, 255.0));
        }
    }
    // Degenerate draws (shape fully outside after rounding) retry with the
    // follow-on seed; bounds above make this effectively unreachable.
    if (sample.gt_mask.true_count() == 0)
        return shapes_sample(size, seed + 0x9e3779b97f4a7c15ULL);
    return sample;
}

} // namespace moveseg
