#pragma once

#include <set>
#include <string>
#include <vector>

#include "spikedet/types.hpp"

namespace spikedet {

struct RejectionRule {
  std::string id;
  std::string target_label;
};

// The five rules, in evaluation order:
//   a  amp1 < 50 uV and amp2 < 50 uV   -> "alpha rhythm"
//   b  dur1 < 20 ms                    -> "EMG/alpha"
//   c  dur1 > 350 ms                   -> "K Complex"
//   d  durA > 150 ms or durB > 150 ms  -> "EOG"
//   e  positive < 100 ms after the previous surviving positive, per channel
const std::vector<RejectionRule>& rejection_rules();

// Downgrades epileptiform events whose first firing rule is recorded in
// rejected_by; scores are kept. Input must be sorted by (channel, time).
DetectionList apply_rejection_rules(const std::vector<ClassifiedEvent>& events,
                                    const std::set<std::string>& enabled = {"a", "b", "c",
                                                                            "d", "e"});

}  // namespace spikedet
