#pragma once

#include <set>
#include <string>
#include <vector>

#include "spikedet/detector.hpp"

namespace spikedet {

// INI-style pipeline configuration; unknown sections or keys are rejected.
// Sections: [detector], [fuzzy], [postclass], [eval].
struct PipelineConfig {
  DetectorConfig detector;

  std::string rulebase_path;  // empty = built-in default
  double decision_threshold = 0.8;
  double possible_floor = 0.5;

  std::set<std::string> postclass_enable = {"a", "b", "c", "d", "e"};

  double tolerance_ms = 50.0;
  std::vector<double> roc_thresholds = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
};

PipelineConfig parse_config(const std::string& text, const std::string& origin = "<string>");
PipelineConfig load_config(const std::string& path);

}  // namespace spikedet
