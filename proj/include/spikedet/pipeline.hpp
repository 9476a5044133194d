#pragma once

#include <string>
#include <vector>

#include "spikedet/config.hpp"
#include "spikedet/eval.hpp"
#include "spikedet/types.hpp"

namespace spikedet {

struct PipelineResult {
  std::vector<ClassifiedEvent> scored;  // per-candidate features + fuzzy score
  DetectionList detections;             // after thresholding + post-classification
};

// Candidate detection -> half-wave features -> fuzzy score -> threshold ->
// post-classification. Degenerate candidates (no usable half-wave pair) are
// dropped. Channels are distributed over `workers` threads; results are
// canonically ordered regardless of schedule.
PipelineResult run_detect(const Recording& rec, const PipelineConfig& cfg, int workers = 1,
                          bool apply_postclass = true);

RocCurve run_roc(const std::vector<ClassifiedEvent>& scored, const AnnotationSet& ann,
                 const PipelineConfig& cfg, bool apply_postclass);

// Feature dump CSV (one row per scored candidate) for offline tuning.
void write_feature_csv(const std::vector<ClassifiedEvent>& scored, const std::string& path);

}  // namespace spikedet
