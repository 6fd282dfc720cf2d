#include "vocxai/report.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace vocxai {

namespace {

using ordered_json = nlohmann::ordered_json;

double rounded(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double r = std::round(v * scale) / scale;
  return r == 0.0 ? 0.0 : r;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ordered_json seg_object(double gdice, double f1, double iou, double fbound, double ssim) {
  ordered_json j;
  j["gdice"] = rounded(100 * gdice, 2);
  j["f1"] = rounded(100 * f1, 2);
  j["iou"] = rounded(100 * iou, 2);
  j["fbound"] = rounded(100 * fbound, 2);
  j["ssim"] = rounded(100 * ssim, 2);
  return j;
}

std::string seg_line(const std::string& id, double gdice, double f1, double iou, double fbound,
                     double ssim) {
  return csv_field(id) + "," + format_fixed(100 * gdice, 2) + "," + format_fixed(100 * f1, 2) + "," +
         format_fixed(100 * iou, 2) + "," + format_fixed(100 * fbound, 2) + "," +
         format_fixed(100 * ssim, 2) + "\n";
}

}  // namespace

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string segmentation_csv(const SegmentationReport& rep) {
  std::string out = "utterance_id,gdice,f1,iou,fbound,ssim\n";
  for (const auto& r : rep.per_utterance) out += seg_line(r.id, r.gdice, r.f1, r.iou, r.fbound, r.ssim);
  out += seg_line("mean", rep.gdice, rep.f1, rep.iou, rep.fbound, rep.ssim);
  return out;
}

std::string segmentation_json(const SegmentationReport& rep) {
  ordered_json j;
  j["n_items"] = rep.n_items;
  j["scale"] = "x100";
  j["aggregate"] = seg_object(rep.gdice, rep.f1, rep.iou, rep.fbound, rep.ssim);
  ordered_json rows = ordered_json::array();
  for (const auto& r : rep.per_utterance) {
    ordered_json row;
    row["utterance_id"] = r.id;
    row.update(seg_object(r.gdice, r.f1, r.iou, r.fbound, r.ssim));
    row["degenerate_prediction"] = r.degenerate_prediction;
    rows.push_back(std::move(row));
  }
  j["per_utterance"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string faithfulness_csv(const FaithfulnessReport& rep) {
  std::string out = "utterance_id,base_score,masked_score,ai,ad,ag,fid_in,note\n";
  for (const auto& r : rep.per_utterance) {
    if (!r.error.empty()) {
      out += csv_field(r.id) + ",,,,,,," + csv_field(r.error) + "\n";
      continue;
    }
    out += csv_field(r.id) + "," + format_fixed(r.base_score, 6) + "," + format_fixed(r.masked_score, 6) +
           "," + format_fixed(r.increased ? 100.0 : 0.0, 2) + "," + format_fixed(100 * r.drop, 2) + "," +
           format_fixed(100 * r.gain, 2) + "," + format_fixed(r.decision_kept ? 1.0 : 0.0, 2) + "," +
           (r.base_zero_guarded ? "base_zero_guarded" : "") + "\n";
  }
  out += "mean,,," + format_fixed(rep.ai, 2) + "," + format_fixed(rep.ad, 2) + "," +
         format_fixed(rep.ag, 2) + "," + format_fixed(rep.fid_in, 2) + ",\n";
  return out;
}

std::string faithfulness_json(const FaithfulnessReport& rep) {
  ordered_json j;
  j["n_items"] = rep.n_items;
  j["n_failed"] = rep.n_failed;
  j["partial"] = rep.partial();
  ordered_json agg;
  agg["ai"] = rounded(rep.ai, 2);
  agg["ad"] = rounded(rep.ad, 2);
  agg["ag"] = rounded(rep.ag, 2);
  agg["fid_in"] = rounded(rep.fid_in, 2);
  j["aggregate"] = std::move(agg);
  ordered_json rows = ordered_json::array();
  for (const auto& r : rep.per_utterance) {
    ordered_json row;
    row["utterance_id"] = r.id;
    if (!r.error.empty()) {
      row["error"] = r.error;
    } else {
      row["base_score"] = r.base_score;
      row["masked_score"] = r.masked_score;
      row["ad"] = rounded(100 * r.drop, 2);
      row["ag"] = rounded(100 * r.gain, 2);
      row["increased"] = r.increased;
      row["decision_kept"] = r.decision_kept;
      row["base_zero_guarded"] = r.base_zero_guarded;
    }
    rows.push_back(std::move(row));
  }
  j["per_utterance"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace vocxai
