#include "moveseg/optflow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "moveseg/pnm.hpp"

namespace moveseg {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kStructureEps = 1e-4; // min acceptable normal-matrix determinant scale

struct Image {
    int width = 0, height = 0;
    std::vector<double> v;
    double at(int x, int y) const { return v[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return v[static_cast<std::size_t>(y) * width + x]; }
};

Image from_u8(const RasterU8& r) {
    Image img;
    img.width = r.width;
    img.height = r.height;
    img.v.resize(r.pixel_count());
    for (std::size_t i = 0; i < img.v.size(); ++i)
        img.v[i] = r.data[i];
    return img;
}

// 2x decimation with a 2x2 box filter; odd trailing row/col folds into the
// last output cell via clamping.
Image downsample_2x(const Image& in) {
    Image out;
    out.width = std::max(1, in.width / 2);
    out.height = std::max(1, in.height / 2);
    out.v.resize(static_cast<std::size_t>(out.width) * out.height);
    for (int y = 0; y < out.height; ++y) {
        int y0 = 2 * y, y1 = std::min(2 * y + 1, in.height - 1);
        for (int x = 0; x < out.width; ++x) {
            int x0 = 2 * x, x1 = std::min(2 * x + 1, in.width - 1);
            out.at(x, y) =
                0.25 * (in.at(x0, y0) + in.at(x1, y0) + in.at(x0, y1) + in.at(x1, y1));
        }
    }
    return out;
}

double sample_clamped(const Image& img, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    int x1 = std::min(x0 + 1, img.width - 1);
    int y1 = std::min(y0 + 1, img.height - 1);
    double tx = x - x0, ty = y - y0;
    double top = (1.0 - tx) * img.at(x0, y0) + tx * img.at(x1, y0);
    double bot = (1.0 - tx) * img.at(x0, y1) + tx * img.at(x1, y1);
    return (1.0 - ty) * top + ty * bot;
}

void gradients(const Image& img, Image& gx, Image& gy) {
    gx.width = gy.width = img.width;
    gx.height = gy.height = img.height;
    gx.v.assign(img.v.size(), 0.0);
    gy.v.assign(img.v.size(), 0.0);
    for (int y = 0; y < img.height; ++y) {
        int ym = std::max(y - 1, 0), yp = std::min(y + 1, img.height - 1);
        for (int x = 0; x < img.width; ++x) {
            int xm = std::max(x - 1, 0), xp = std::min(x + 1, img.width - 1);
            gx.at(x, y) = 0.5 * (img.at(xp, y) - img.at(xm, y));
            gy.at(x, y) = 0.5 * (img.at(x, yp) - img.at(x, ym));
        }
    }
}

// One warp-and-solve refinement sweep at a single pyramid level.
void refine_level(const Image& a, const Image& b, std::vector<double>& fu,
                  std::vector<double>& fv, int radius) {
    const int w = a.width, h = a.height;
    Image warped;
    warped.width = w;
    warped.height = h;
    warped.v.resize(a.v.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            warped.at(x, y) = sample_clamped(b, x + fu[static_cast<std::size_t>(y) * w + x],
                                             y + fv[static_cast<std::size_t>(y) * w + x]);
    Image gx, gy;
    gradients(warped, gx, gy);

    std::vector<double> du(fu.size(), 0.0), dv(fv.size(), 0.0);
    const double max_step = static_cast<double>(radius);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double axx = 0.0, axy = 0.0, ayy = 0.0, bxe = 0.0, bye = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                int yy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -radius; dx <= radius; ++dx) {
                    int xx = std::clamp(x + dx, 0, w - 1);
                    double px = gx.at(xx, yy), py = gy.at(xx, yy);
                    double e = warped.at(xx, yy) - a.at(xx, yy);
                    axx += px * px;
                    axy += px * py;
                    ayy += py * py;
                    bxe += px * e;
                    bye += py * e;
                }
            }
            double det = axx * ayy - axy * axy;
            double scale = axx + ayy;
            // Degenerate structure: keep the propagated estimate.
            if (det <= kStructureEps * scale * scale + kStructureEps)
                continue;
            double su = (-ayy * bxe + axy * bye) / det;
            double sv = (axy * bxe - axx * bye) / det;
            std::size_t i = static_cast<std::size_t>(y) * w + x;
            du[i] = std::clamp(su, -max_step, max_step);
            dv[i] = std::clamp(sv, -max_step, max_step);
        }
    }
    for (std::size_t i = 0; i < fu.size(); ++i) {
        fu[i] += du[i];
        fv[i] += dv[i];
    }
}

} // namespace

FlowField::FlowField(int w, int h) : width(w), height(h) {
    if (w < 1 || h < 1)
        throw ValidationError("FlowField: dimensions must be >= 1");
    u.assign(static_cast<std::size_t>(w) * h, 0.0);
    v.assign(static_cast<std::size_t>(w) * h, 0.0);
}

void FlowParams::validate() const {
    if (pyramid_levels < 1 || iterations_per_level < 1 || window_radius < 1)
        throw ValidationError("FlowParams: all fields must be >= 1");
}

FlowField dense_flow(const RasterU8& frame_a, const RasterU8& frame_b,
                     const FlowParams& params) {
    params.validate();
    if (frame_a.width != frame_b.width || frame_a.height != frame_b.height)
        throw ValidationError("dense_flow: frame dimensions differ");
    if (frame_a.channels != 1 || frame_b.channels != 1)
        throw ValidationError("dense_flow: frames must be grayscale");

    // Pyramids, coarsest last. Levels shrink until the frame no longer
    // supports the solve window.
    std::vector<Image> pa, pb;
    pa.push_back(from_u8(frame_a));
    pb.push_back(from_u8(frame_b));
    int min_side = 2 * params.window_radius + 1;
    for (int level = 1; level < params.pyramid_levels; ++level) {
        const Image& prev = pa.back();
        if (prev.width / 2 < min_side || prev.height / 2 < min_side)
            break;
        pa.push_back(downsample_2x(pa.back()));
        pb.push_back(downsample_2x(pb.back()));
    }

    std::vector<double> fu, fv;
    for (int level = static_cast<int>(pa.size()) - 1; level >= 0; --level) {
        const Image& a = pa[static_cast<std::size_t>(level)];
        const Image& b = pb[static_cast<std::size_t>(level)];
        if (level == static_cast<int>(pa.size()) - 1) {
            fu.assign(a.v.size(), 0.0);
            fv.assign(a.v.size(), 0.0);
        } else {
            // Upsample the coarser estimate: bilinear, doubled magnitude.
            const Image& coarse_a = pa[static_cast<std::size_t>(level) + 1];
            Image cu{coarse_a.width, coarse_a.height, fu};
            Image cv{coarse_a.width, coarse_a.height, fv};
            fu.assign(a.v.size(), 0.0);
            fv.assign(a.v.size(), 0.0);
            for (int y = 0; y < a.height; ++y) {
                for (int x = 0; x < a.width; ++x) {
                    double sx = (x + 0.5) * coarse_a.width / a.width - 0.5;
                    double sy = (y + 0.5) * coarse_a.height / a.height - 0.5;
                    std::size_t i = static_cast<std::size_t>(y) * a.width + x;
                    fu[i] = 2.0 * sample_clamped(cu, sx, sy);
                    fv[i] = 2.0 * sample_clamped(cv, sx, sy);
                }
            }
        }
        for (int it = 0; it < params.iterations_per_level; ++it)
            refine_level(a, b, fu, fv, params.window_radius);
    }

    FlowField flow(frame_a.width, frame_a.height);
    flow.u = std::move(fu);
    flow.v = std::move(fv);
    for (std::size_t i = 0; i < flow.u.size(); ++i)
        if (!std::isfinite(flow.u[i]) || !std::isfinite(flow.v[i]))
            throw ValidationError("dense_flow: non-finite flow value");
    return flow;
}

RasterF64 flow_magnitude(const FlowField& flow) {
    RasterF64 mag(flow.width, flow.height);
    for (std::size_t i = 0; i < flow.u.size(); ++i)
        mag.data[i] = std::hypot(flow.u[i], flow.v[i]);
    return mag;
}

std::pair<double, double> dominant_direction(const FlowField& flow, double magnitude_floor,
                                             int angle_bins) {
    if (angle_bins < 4)
        throw ValidationError("dominant_direction: angle_bins must be >= 4");
    std::vector<std::size_t> counts(static_cast<std::size_t>(angle_bins), 0);
    std::size_t qualifying = 0;
    const double bin_width = 2.0 * kPi / angle_bins;
    for (std::size_t i = 0; i < flow.u.size(); ++i) {
        double mag = std::hypot(flow.u[i], flow.v[i]);
        if (mag < magnitude_floor)
            continue;
        ++qualifying;
        double angle = std::atan2(flow.v[i], flow.u[i]);
        if (angle < 0.0)
            angle += 2.0 * kPi;
        // Bins centered on multiples of bin_width.
        int bin = static_cast<int>(std::floor((angle + 0.5 * bin_width) / bin_width)) % angle_bins;
        ++counts[static_cast<std::size_t>(bin)];
    }
    if (qualifying == 0)
        return {0.0, 0.0};
    std::size_t best = 0;
    for (std::size_t b = 1; b < counts.size(); ++b)
        if (counts[b] > counts[best])
            best = b; // strict > keeps the smaller index on ties
    return {static_cast<double>(best) * bin_width,
            static_cast<double>(counts[best]) / static_cast<double>(qualifying)};
}

std::pair<double, double> median_flow(const FlowField& flow) {
    auto median_of = [](std::vector<double> values) {
        std::size_t mid = values.size() / 2;
        std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                         values.end());
        return values[mid];
    };
    return {median_of(flow.u), median_of(flow.v)};
}

namespace {

void quantize_component(const std::vector<double>& vals, RasterU8& raster, double& scale,
                        double& offset) {
    auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
    offset = *mn;
    scale = (*mx - *mn) / 255.0;
    for (std::size_t i = 0; i < vals.size(); ++i)
        raster.data[i] = scale > 0.0
                             ? static_cast<std::uint8_t>(std::lround((vals[i] - offset) / scale))
                             : 0;
}

} // namespace

void write_flow(const std::string& base_path, const FlowField& flow) {
    RasterU8 ur(flow.width, flow.height, 1), vr(flow.width, flow.height, 1);
    double us, uo, vs, vo;
    quantize_component(flow.u, ur, us, uo);
    quantize_component(flow.v, vr, vs, vo);
    write_pnm(base_path + ".u.pgm", ur);
    write_pnm(base_path + ".v.pgm", vr);
    std::ofstream meta(base_path + ".flowmeta");
    if (!meta)
        throw IoError(base_path + ".flowmeta: cannot open for writing");
    meta.precision(17);
    meta << "u " << us << ' ' << uo << '\n' << "v " << vs << ' ' << vo << '\n';
}

FlowField read_flow(const std::string& base_path) {
    RasterU8 ur = read_pnm(base_path + ".u.pgm");
    RasterU8 vr = read_pnm(base_path + ".v.pgm");
    std::ifstream meta(base_path + ".flowmeta");
    if (!meta)
        throw IoError(base_path + ".flowmeta: cannot open for reading");
    double us, uo, vs, vo;
    std::string tag_u, tag_v;
    if (!(meta >> tag_u >> us >> uo >> tag_v >> vs >> vo) || tag_u != "u" || tag_v != "v")
        throw IoError(base_path + ".flowmeta: malformed sidecar");
    if (ur.width != vr.width || ur.height != vr.height)
        throw IoError(base_path + ": flow component dimensions differ");
    FlowField flow(ur.width, ur.height);
    for (std::size_t i = 0; i < flow.u.size(); ++i) {
        flow.u[i] = ur.data[i] * us + uo;
        flow.v[i] = vr.data[i] * vs + vo;
    }
    return flow;
}

} // namespace moveseg
