#include "moveseg/crops.hpp"

#include <cmath>

#include "moveseg/resample.hpp"
#include "moveseg/rng.hpp"

namespace moveseg {

void JitterParams::validate() const {
    if (!(scale_min > 0.0 && scale_min <= scale_max))
        throw ValidationError("JitterParams: need 0 < scale_min <= scale_max");
    if (translate_range < 0.0)
        throw ValidationError("JitterParams: translate_range must be >= 0");
    if (context_pad < 0.0)
        throw ValidationError("JitterParams: context_pad must be >= 0");
}

BBox compute_crop_box(const ProbMap& prob, const JitterParams& jitter, double fg_threshold,
                      int frame_width, int frame_height) {
    jitter.validate();
    BinaryMask fg = binarize(prob, fg_threshold);
    if (fg.true_count() == 0)
        throw ValidationError("sample_crop: no foreground pixel above threshold");
    BBox tight = tight_bbox(fg);

    double cx = tight.x + 0.5 * tight.w;
    double cy = tight.y + 0.5 * tight.h;
    double half_w = 0.5 * tight.w + jitter.context_pad * tight.w;
    double half_h = 0.5 * tight.h + jitter.context_pad * tight.h;

    Rng rng(jitter.rng_seed);
    double scale = rng.uniform(jitter.scale_min, jitter.scale_max);
    half_w *= scale;
    half_h *= scale;
    double dx = rng.uniform(-jitter.translate_range, jitter.translate_range) * 2.0 * half_w;
    double dy = rng.uniform(-jitter.translate_range, jitter.translate_range) * 2.0 * half_h;
    cx += dx;
    cy += dy;

    BBox box{static_cast<int>(std::lround(cx - half_w)), static_cast<int>(std::lround(cy - half_h)),
             static_cast<int>(std::lround(2.0 * half_w)),
             static_cast<int>(std::lround(2.0 * half_h))};
    box.w = std::max(box.w, 1);
    box.h = std::max(box.h, 1);
    return clamp_bbox(box, frame_width, frame_height);
}

std::pair<RasterU8, ProbMap> sample_crop(const RasterU8& image, const ProbMap& prob,
                                         const JitterParams& jitter, int w,
                                         double fg_threshold) {
    if (image.width != prob.width || image.height != prob.height)
        throw ValidationError("sample_crop: image/probability dimensions differ");
    if (w < 1)
        throw ValidationError("sample_crop: w must be >= 1");
    BBox box = compute_crop_box(prob, jitter, fg_threshold, image.width, image.height);
    return {bilinear_resample(image, box, w, w), area_resample(prob, box, w, w)};
}

} // namespace moveseg
