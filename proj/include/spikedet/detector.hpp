#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spikedet/types.hpp"
#include "spikedet/wavelet.hpp"

namespace spikedet {

struct WindowSpec {
  double window_s = 10.0;
  double hop_s = 9.5;
};

struct WindowSlice {
  int64_t start = 0;
  int64_t length = 0;
};

struct DetectorConfig {
  std::string wavelet = "db2";
  int cascade_iterations = 10;
  std::vector<double> scales = {4, 10, 20, 30};  // reference menu at 200 Hz
  double k = 3.0;
  WindowSpec window;
  double min_separation_ms = 50.0;
};

// Sliding windows covering every sample: fixed-length windows at hop
// intervals plus a full-length tail window flush with the end. A recording
// shorter than one window yields a single whole-recording window when it is
// at least 2 s long.
std::vector<WindowSlice> segment_windows(int64_t n_samples, double fs, const WindowSpec& spec);

// k * population standard deviation of the segment; +inf for a constant
// segment (selects nothing).
double threshold_for(const CoefficientVector& coeffs,
                     const Eigen::Ref<const Eigen::VectorXd>& segment, double k);

// Local maxima of |coeffs| at or above threshold, outside the edge-affected
// region; within min_separation only the largest survives (ties keep the
// earliest index).
std::vector<int> detect_peaks(const CoefficientVector& coeffs, double threshold,
                              int min_separation_samples);

// Full candidate stage: windows x scales per channel, peaks merged within
// min_separation_ms keeping the largest response, sorted by (channel, time).
std::vector<CandidateEvent> collect_candidates(const Recording& rec,
                                               const DetectorConfig& cfg);
std::vector<CandidateEvent> collect_candidates_channel(const Recording& rec,
                                                       int channel_index,
                                                       const DetectorConfig& cfg);

}  // namespace spikedet
