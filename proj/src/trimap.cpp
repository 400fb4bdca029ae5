#include "moveseg/trimap.hpp"

#include "moveseg/pnm.hpp"

namespace moveseg {

Trimap::Trimap(int w, int h, TriLabel fill)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1)
        throw ValidationError("Trimap: dimensions must be >= 1");
}

void TrimapParams::validate() const {
    if (!(0.0 < neg_threshold && neg_threshold < pos_threshold && pos_threshold < 1.0))
        throw ValidationError("TrimapParams: need 0 < neg_threshold < pos_threshold < 1");
}

Trimap to_trimap(const ProbMap& prob, const TrimapParams& params) {
    params.validate();
    Trimap out(prob.width, prob.height);
    for (std::size_t i = 0; i < prob.data.size(); ++i) {
        double p = prob.data[i];
        if (p < params.neg_threshold)
            out.data[i] = TriLabel::negative;
        else if (p > params.pos_threshold)
            out.data[i] = TriLabel::positive;
        else
            out.data[i] = TriLabel::dont_care;
    }
    return out;
}

void write_trimap_pgm(const std::string& path, const Trimap& trimap) {
    RasterU8 raster(trimap.width, trimap.height, 1);
    for (std::size_t i = 0; i < trimap.data.size(); ++i) {
        switch (trimap.data[i]) {
        case TriLabel::negative: raster.data[i] = 0; break;
        case TriLabel::dont_care: raster.data[i] = 128; break;
        case TriLabel::positive: raster.data[i] = 255; break;
        }
    }
    write_pnm(path, raster);
}

Trimap read_trimap_pgm(const std::string& path) {
    RasterU8 raster = read_pnm(path);
    if (raster.channels != 1)
        throw IoError(path + ": trimap must be a P5 graymap");
    Trimap out(raster.width, raster.height);
    for (std::size_t i = 0; i < raster.data.size(); ++i) {
        switch (raster.data[i]) {
        case 0: out.data[i] = TriLabel::negative; break;
        case 128: out.data[i] = TriLabel::dont_care; break;
        case 255: out.data[i] = TriLabel::positive; break;
        default: throw IoError(path + ": trimap sample not in {0, 128, 255}");
        }
    }
    return out;
}

} // namespace moveseg
