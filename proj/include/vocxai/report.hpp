#pragma once

#include <string>

#include "vocxai/faithfulness.hpp"
#include "vocxai/metrics.hpp"

namespace vocxai {

// Fixed-point formatting without a "-0.00" artefact.
std::string format_fixed(double v, int decimals);

// One row per utterance plus a final "mean" row; metric columns are x100
// with two decimals:
//   utterance_id,gdice,f1,iou,fbound,ssim
std::string segmentation_csv(const SegmentationReport& rep);
std::string segmentation_json(const SegmentationReport& rep);

// Per-item columns are the per-item contributions to each aggregate, so the
// "mean" row equals the column means over items without errors:
//   utterance_id,base_score,masked_score,ai,ad,ag,fid_in,error
std::string faithfulness_csv(const FaithfulnessReport& rep);
std::string faithfulness_json(const FaithfulnessReport& rep);

}  // namespace vocxai
