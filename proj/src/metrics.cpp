#include "vocxai/metrics.hpp"
#include "vocxai/errors.hpp"

#include <algorithm>
#include <cmath>

#include "border.hpp"
#include "vocxai/annotation.hpp"

namespace vocxai {

namespace {

struct Confusion {
  double tp = 0, fp = 0, fn = 0, tn = 0;
};

Confusion confusion(const BinaryMask& pred, const BinaryMask& gt, const char* what) {
  require_same_shape(pred.data, gt.data, what);
  Confusion c;
  auto p = pred.data.values();
  auto g = gt.data.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] && g[i]) {
      ++c.tp;
    } else if (p[i]) {
      ++c.fp;
    } else if (g[i]) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

// Fraction of `from` boundary pixels with a `to` boundary pixel within
// Chebyshev distance tol.
double matched_fraction(const BinaryMask& from, const BinaryMask& to, std::size_t tol) {
  const auto rows = static_cast<std::ptrdiff_t>(from.rows());
  const auto cols = static_cast<std::ptrdiff_t>(from.cols());
  const auto d = static_cast<std::ptrdiff_t>(tol);
  std::size_t total = 0;
  std::size_t matched = 0;
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      if (!from.data(r, c)) continue;
      ++total;
      bool hit = false;
      for (std::ptrdiff_t rr = std::max<std::ptrdiff_t>(0, r - d); !hit && rr <= std::min(rows - 1, r + d); ++rr) {
        for (std::ptrdiff_t cc = std::max<std::ptrdiff_t>(0, c - d); cc <= std::min(cols - 1, c + d); ++cc) {
          if (to.data(rr, cc)) {
            hit = true;
            break;
          }
        }
      }
      if (hit) ++matched;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(total);
}

Raster mask_to_raster(const BinaryMask& m) { return Heatmap::from_mask(m).data(); }

}  // namespace

double iou(const BinaryMask& pred, const BinaryMask& gt) {
  const Confusion c = confusion(pred, gt, "iou");
  const double uni = c.tp + c.fp + c.fn;
  return uni == 0 ? 1.0 : c.tp / uni;
}

double f1(const BinaryMask& pred, const BinaryMask& gt) {
  const Confusion c = confusion(pred, gt, "f1");
  const double den = 2 * c.tp + c.fp + c.fn;
  return den == 0 ? 1.0 : 2 * c.tp / den;
}

double gdice(const BinaryMask& pred, const BinaryMask& gt) {
  constexpr double eps = 1e-8;
  const Confusion c = confusion(pred, gt, "gdice");
  const double gt_fg = c.tp + c.fn;
  const double gt_bg = c.fp + c.tn;
  const double pred_fg = c.tp + c.fp;
  const double pred_bg = c.fn + c.tn;
  const double w_fg = 1.0 / (gt_fg * gt_fg + eps);
  const double w_bg = 1.0 / (gt_bg * gt_bg + eps);
  const double num = w_fg * 2.0 * c.tp + w_bg * 2.0 * c.tn;
  const double den = w_fg * (pred_fg + gt_fg) + w_bg * (pred_bg + gt_bg);
  return den == 0 ? 1.0 : num / den;
}

BinaryMask boundary(const BinaryMask& mask) {
  BinaryMask out{Grid<std::uint8_t>(mask.rows(), mask.cols(), 0), mask.origin};
  const std::size_t rows = mask.rows();
  const std::size_t cols = mask.cols();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (!mask.data(r, c)) continue;
      const bool interior = r > 0 && r + 1 < rows && c > 0 && c + 1 < cols &&
                            mask.data(r - 1, c) && mask.data(r + 1, c) &&
                            mask.data(r, c - 1) && mask.data(r, c + 1);
      out.data(r, c) = interior ? 0 : 1;
    }
  }
  return out;
}

double fbound(const BinaryMask& pred, const BinaryMask& gt, std::size_t tol) {
  require_same_shape(pred.data, gt.data, "fbound");
  const BinaryMask bp = boundary(pred);
  const BinaryMask bg = boundary(gt);
  const bool pred_empty = bp.count() == 0;
  const bool gt_empty = bg.count() == 0;
  if (pred_empty && gt_empty) return 1.0;
  if (pred_empty || gt_empty) return 0.0;
  const double precision = matched_fraction(bp, bg, tol);
  const double recall = matched_fraction(bg, bp, tol);
  return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

double ssim(const Raster& a, const Raster& b) {
  require_same_shape(a, b, "ssim");
  if (a.empty()) throw InvalidInput("ssim: empty raster");
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  constexpr std::ptrdiff_t half = 3;
  constexpr double count = 49.0;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
      for (std::ptrdiff_t dr = -half; dr <= half; ++dr) {
        const auto rr = detail::reflect_index(static_cast<std::ptrdiff_t>(r) + dr, rows);
        for (std::ptrdiff_t dc = -half; dc <= half; ++dc) {
          const auto cc = detail::reflect_index(static_cast<std::ptrdiff_t>(c) + dc, cols);
          const double x = a(rr, cc);
          const double y = b(rr, cc);
          sa += x;
          sb += y;
          saa += x * x;
          sbb += y * y;
          sab += x * y;
        }
      }
      const double mu_a = sa / count;
      const double mu_b = sb / count;
      const double var_a = saa / count - mu_a * mu_a;
      const double var_b = sbb / count - mu_b * mu_b;
      const double cov = sab / count - mu_a * mu_b;
      total += ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
               ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
    }
  }
  return total / static_cast<double>(rows * cols);
}

SegmentationRow evaluate_item(const Heatmap& pred, const BinaryMask& gt,
                              const SegmentationConfig& cfg) {
  require_same_shape(pred.data(), gt.data, "evaluate");
  const Binarization bin = binarize(pred, cfg.quantile);
  SegmentationRow row;
  row.gdice = gdice(bin.mask, gt);
  row.f1 = f1(bin.mask, gt);
  row.iou = iou(bin.mask, gt);
  row.fbound = fbound(bin.mask, gt, cfg.fbound_tol);
  const Raster gt_raster = mask_to_raster(gt);
  row.ssim = cfg.ssim_mode == SsimMode::heatmap_vs_mask ? ssim(pred.data(), gt_raster)
                                                        : ssim(mask_to_raster(bin.mask), gt_raster);
  row.degenerate_prediction = bin.degenerate;
  return row;
}

SegmentationRow evaluate_item(const BinaryMask& pred, const BinaryMask& gt,
                              const SegmentationConfig& cfg) {
  require_same_shape(pred.data, gt.data, "evaluate");
  SegmentationRow row;
  row.gdice = gdice(pred, gt);
  row.f1 = f1(pred, gt);
  row.iou = iou(pred, gt);
  row.fbound = fbound(pred, gt, cfg.fbound_tol);
  row.ssim = ssim(mask_to_raster(pred), mask_to_raster(gt));
  return row;
}

SegmentationReport evaluate_dataset(std::span<const Prediction> preds, std::span<const BinaryMask> gts,
                                    const SegmentationConfig& cfg, std::span<const std::string> ids) {
  if (preds.empty() || gts.empty()) throw InvalidArgument("evaluate_dataset: empty input");
  if (preds.size() != gts.size()) throw InvalidArgument("evaluate_dataset: list lengths differ");
  if (!ids.empty() && ids.size() != preds.size()) {
    throw InvalidArgument("evaluate_dataset: id list length differs");
  }
  SegmentationReport rep;
  rep.n_items = preds.size();
  for (std::size_t i = 0; i < preds.size(); ++i) {
    SegmentationRow row =
        std::visit([&](const auto& pred) { return evaluate_item(pred, gts[i], cfg); }, preds[i]);
    row.id = ids.empty() ? std::to_string(i) : ids[i];
    rep.gdice += row.gdice;
    rep.f1 += row.f1;
    rep.iou += row.iou;
    rep.fbound += row.fbound;
    rep.ssim += row.ssim;
    rep.per_utterance.push_back(std::move(row));
  }
  const double n = static_cast<double>(rep.n_items);
  rep.gdice /= n;
  rep.f1 /= n;
  rep.iou /= n;
  rep.fbound /= n;
  rep.ssim /= n;
  return rep;
}

}  // namespace vocxai
