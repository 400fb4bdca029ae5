#include "moveseg/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>

namespace moveseg {

namespace {

struct Overlap {
    std::size_t inter = 0, pred = 0, gt = 0;
};

Overlap overlap(const BinaryMask& pred, const BinaryMask& gt) {
    if (pred.width != gt.width || pred.height != gt.height)
        throw ValidationError("metrics: mask dimension mismatch");
    Overlap o;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        bool p = pred.data[i] != 0, g = gt.data[i] != 0;
        o.pred += p;
        o.gt += g;
        o.inter += p && g;
    }
    return o;
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0
                     : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

double iou(const BinaryMask& pred, const BinaryMask& gt) {
    Overlap o = overlap(pred, gt);
    std::size_t uni = o.pred + o.gt - o.inter;
    if (uni == 0)
        return 1.0; // both empty
    return static_cast<double>(o.inter) / static_cast<double>(uni);
}

std::pair<double, double> precision_recall(const BinaryMask& pred, const BinaryMask& gt) {
    Overlap o = overlap(pred, gt);
    double p = o.pred == 0 ? 1.0 : static_cast<double>(o.inter) / static_cast<double>(o.pred);
    double r = o.gt == 0 ? 1.0 : static_cast<double>(o.inter) / static_cast<double>(o.gt);
    return {p, r};
}

SegScore score_masks(const std::vector<BinaryMask>& pred, const std::vector<BinaryMask>& gt) {
    if (pred.size() != gt.size())
        throw ValidationError("score_masks: sequence length mismatch");
    SegScore score;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        score.item_iou.push_back(iou(pred[i], gt[i]));
        auto [p, r] = precision_recall(pred[i], gt[i]);
        score.item_precision.push_back(p);
        score.item_recall.push_back(r);
    }
    score.mean_iou = mean_of(score.item_iou);
    score.precision = mean_of(score.item_precision);
    score.recall = mean_of(score.item_recall);
    return score;
}

std::pair<SegScore, SegScore> compare_sources(const std::vector<BinaryMask>& labels_a,
                                              const std::vector<BinaryMask>& labels_b,
                                              const std::vector<BinaryMask>& gt) {
    if (labels_a.size() != labels_b.size() || labels_a.size() != gt.size())
        throw ValidationError("compare_sources: sequence length mismatch");
    return {score_masks(labels_a, gt), score_masks(labels_b, gt)};
}

void write_score_report(const std::string& path, const SegScore& score) {
    std::ofstream out(path);
    if (!out)
        throw IoError(path + ": cannot open for writing");
    char buf[96];
    for (std::size_t i = 0; i < score.item_iou.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu\t%.4f\t%.4f\t%.4f", i, score.item_iou[i],
                      score.item_precision[i], score.item_recall[i]);
        out << buf << '\n';
    }
    std::snprintf(buf, sizeof(buf), "mean\t%.4f\t%.4f\t%.4f", score.mean_iou, score.precision,
                  score.recall);
    out << buf << '\n';
    if (!out)
        throw IoError(path + ": write failed");
}

} // namespace moveseg
