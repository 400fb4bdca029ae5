#pragma once

#include <string>
#include <utility>
#include <vector>

#include "moveseg/raster.hpp"

namespace moveseg {

// Macro-averaged segmentation scores over a mask sequence.
struct SegScore {
    double mean_iou = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    std::vector<double> item_iou;
    std::vector<double> item_precision;
    std::vector<double> item_recall;
};

// |pred AND gt| / |pred OR gt|; 1.0 when both masks are empty.
double iou(const BinaryMask& pred, const BinaryMask& gt);

// precision = |AND| / |pred| (1.0 for an empty pred),
// recall    = |AND| / |gt|   (1.0 for an empty gt).
std::pair<double, double> precision_recall(const BinaryMask& pred, const BinaryMask& gt);

SegScore score_masks(const std::vector<BinaryMask>& pred, const std::vector<BinaryMask>& gt);

// Paired scores of two label sources against shared ground truth.
std::pair<SegScore, SegScore> compare_sources(const std::vector<BinaryMask>& labels_a,
                                              const std::vector<BinaryMask>& labels_b,
                                              const std::vector<BinaryMask>& gt);

// Tab-separated rows "<item> <iou> <precision> <recall>", then a final
// "mean" row; fixed 4-decimal formatting.
void write_score_report(const std::string& path, const SegScore& score);

} // namespace moveseg
