#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spikedet/types.hpp"

namespace spikedet {

struct MatchCounts {
  int64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct RocPoint {
  double threshold = 0.0;
  MatchCounts counts;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
};

struct RocCurve {
  std::vector<RocPoint> points;  // thresholds strictly increasing
  int optimal_index = -1;        // argmax of sensitivity + specificity
};

// 50 ms matching: marks claim, in time order, every unclaimed positive within
// tolerance (grouped, one TP per mark); unclaimed positives are FP; marks
// with no positive in reach are FN; negative-classified candidates clear of
// any mark are TN. Tolerance comparison is strict (< tol).
MatchCounts match_events(const DetectionList& detections, const AnnotationSet& annotations,
                         double tol_ms = 50.0,
                         const std::set<std::string>& known_channels = {});

std::optional<double> sensitivity(const MatchCounts& c);
std::optional<double> specificity(const MatchCounts& c);

struct RocOptions {
  double tol_ms = 50.0;
  bool postclass = true;
  std::set<std::string> enabled_rules = {"a", "b", "c", "d", "e"};
  double possible_floor = 0.5;
};

// Re-labels the scored events at each threshold (score >= t -> positive),
// reapplies post-classification, and matches. Optimal point maximizes
// sensitivity + specificity.
RocCurve roc_sweep(const std::vector<ClassifiedEvent>& scored_events,
                   const AnnotationSet& annotations, const std::vector<double>& thresholds,
                   const RocOptions& opts = {});

// CSV of the curve ("threshold,tp,fp,tn,fn,sensitivity,specificity") at
// csv_path and a deterministic SVG plot (percent axes, diagonal reference,
// crosshair on the optimal point) at svg_path.
void write_report(const RocCurve& curve, const std::string& csv_path,
                  const std::string& svg_path);

extern const std::vector<double> kDefaultRocThresholds;  // 0.2 .. 0.8

}  // namespace spikedet
