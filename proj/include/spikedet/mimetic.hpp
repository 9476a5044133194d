#pragma once

#include <cstdint>

#include "spikedet/types.hpp"

namespace spikedet {

struct HalfWavePair {
  int64_t start_sample = 0;
  int64_t peak_sample = 0;
  int64_t end_sample = 0;
  bool positive = true;
  bool clipped_context = false;  // event closer than 400 ms to a recording edge
};

// Snap the approximate (CWT) peak to the nearest raw local extremum within
// +/-25 ms, then walk outward to the nearest turning points on each side
// (first-difference sign change, zero counts as a turn). Search is capped at
// 400 ms per side, with virtual zero samples beyond the recording edges.
HalfWavePair decompose_halfwaves(const Eigen::Ref<const Eigen::VectorXd>& samples,
                                 double fs, int64_t approx_peak_sample);

// The nine interval-amplitude features. Baseline is a 10% trimmed mean over
// +/-500 ms around the peak, excluding [start, end].
FeatureVector extract_features(const HalfWavePair& pair,
                               const Eigen::Ref<const Eigen::VectorXd>& samples,
                               double fs);

}  // namespace spikedet
