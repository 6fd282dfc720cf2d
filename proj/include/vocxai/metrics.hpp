#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vocxai/masks.hpp"

namespace vocxai {

// Overlap metrics between a predicted and a ground-truth mask. Each returns 1
// when both masks (or, for fbound, both boundaries) are empty.
double iou(const BinaryMask& pred, const BinaryMask& gt);
double f1(const BinaryMask& pred, const BinaryMask& gt);

// Two-class generalized Dice with weights 1 / (|gt_l|^2 + 1e-8), l in
// {foreground, background}.
double gdice(const BinaryMask& pred, const BinaryMask& gt);

// Boundary pixels: mask pixels with a 4-neighbour outside the mask (off-grid
// counts as outside).
BinaryMask boundary(const BinaryMask& mask);

// Boundary F1 with a Chebyshev-distance matching tolerance.
double fbound(const BinaryMask& pred, const BinaryMask& gt, std::size_t tol = 2);

// Mean SSIM over 7x7 uniform windows (reflect borders, population
// statistics), C1 = 0.01^2, C2 = 0.03^2, dynamic range 1.
double ssim(const Raster& a, const Raster& b);

enum class SsimMode { heatmap_vs_mask, mask_vs_mask };

struct SegmentationConfig {
  double quantile = 0.95;
  std::size_t fbound_tol = 2;
  SsimMode ssim_mode = SsimMode::heatmap_vs_mask;
};

struct SegmentationRow {
  std::string id;
  double gdice = 0.0;
  double f1 = 0.0;
  double iou = 0.0;
  double fbound = 0.0;
  double ssim = 0.0;
  bool degenerate_prediction = false;  // constant heatmap before binarization
};

struct SegmentationReport {
  double gdice = 0.0;
  double f1 = 0.0;
  double iou = 0.0;
  double fbound = 0.0;
  double ssim = 0.0;
  std::vector<SegmentationRow> per_utterance;
  std::size_t n_items = 0;
};

// A soft heatmap is binarized at cfg.quantile before the overlap metrics; a
// binary mask is used as-is (and also stands in for the heatmap in SSIM).
using Prediction = std::variant<Heatmap, BinaryMask>;

SegmentationRow evaluate_item(const Heatmap& pred, const BinaryMask& gt,
                              const SegmentationConfig& cfg);
SegmentationRow evaluate_item(const BinaryMask& pred, const BinaryMask& gt,
                              const SegmentationConfig& cfg);

// Scores every prediction against its ground truth and averages in list
// order. `ids` may be empty (rows get indices).
SegmentationReport evaluate_dataset(std::span<const Prediction> preds, std::span<const BinaryMask> gts,
                                    const SegmentationConfig& cfg = {},
                                    std::span<const std::string> ids = {});

}  // namespace vocxai
