#include "spikedet/mimetic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "spikedet/errors.hpp"

namespace spikedet {

namespace {

// Samples beyond the recording are read as zero.
inline double at(const Eigen::Ref<const Eigen::VectorXd>& x, int64_t i) {
  if (i < 0 || i >= x.size()) return 0.0;
  return x[i];
}

inline bool local_max(const Eigen::Ref<const Eigen::VectorXd>& x, int64_t i) {
  return at(x, i) >= at(x, i - 1) && at(x, i) >= at(x, i + 1);
}

inline bool local_min(const Eigen::Ref<const Eigen::VectorXd>& x, int64_t i) {
  return at(x, i) <= at(x, i - 1) && at(x, i) <= at(x, i + 1);
}

}  // namespace

HalfWavePair decompose_halfwaves(const Eigen::Ref<const Eigen::VectorXd>& samples,
                                 double fs, int64_t approx_peak_sample) {
  if (fs <= 0) throw RangeError("fs must be positive");
  const int64_t n = samples.size();
  if (approx_peak_sample < 0 || approx_peak_sample >= n)
    throw InputError("peak sample outside recording");

  const auto snap_radius = static_cast<int64_t>(std::llround(0.025 * fs));
  const auto walk_cap = static_cast<int64_t>(std::llround(0.400 * fs));

  // Nearest raw extremum to the CWT peak; ties resolve to the earlier sample.
  int64_t peak = -1;
  for (int64_t d = 0; d <= snap_radius; ++d) {
    for (int64_t cand : {approx_peak_sample - d, approx_peak_sample + d}) {
      if (cand < 0 || cand >= n) continue;
      if (local_max(samples, cand) || local_min(samples, cand)) {
        peak = cand;
        break;
      }
    }
    if (peak >= 0) break;
  }
  if (peak < 0) throw DegenerateEventError("no raw extremum within 25 ms of peak");

  const bool positive = local_max(samples, peak);

  // Walk outward while the signal keeps approaching the peak level; a zero
  // first difference counts as a turn.
  int64_t start = peak;
  while (peak - start < walk_cap) {
    double cur = at(samples, start);
    double prev = at(samples, start - 1);
    bool rising_toward_peak = positive ? (prev < cur) : (prev > cur);
    if (!rising_toward_peak) break;
    --start;
  }
  if (start == peak) throw DegenerateEventError("zero-length first half-wave");
  if (peak - start >= walk_cap)
    throw DegenerateEventError("no turning point within 400 ms before peak");

  int64_t end = peak;
  while (end - peak < walk_cap) {
    double cur = at(samples, end);
    double next = at(samples, end + 1);
    bool falling_from_peak = positive ? (next < cur) : (next > cur);
    if (!falling_from_peak) break;
    ++end;
  }
  if (end == peak) throw DegenerateEventError("zero-length second half-wave");
  if (end - peak >= walk_cap)
    throw DegenerateEventError("no turning point within 400 ms after peak");

  HalfWavePair pair;
  pair.start_sample = start;
  pair.peak_sample = peak;
  pair.end_sample = end;
  pair.positive = positive;
  pair.clipped_context =
      (peak - walk_cap < 0) || (peak + walk_cap >= n) || start < 0 || end >= n;
  return pair;
}

FeatureVector extract_features(const HalfWavePair& pair,
                               const Eigen::Ref<const Eigen::VectorXd>& samples,
                               double fs) {
  if (fs <= 0) throw RangeError("fs must be positive");
  const int64_t start = pair.start_sample;
  const int64_t peak = pair.peak_sample;
  const int64_t end = pair.end_sample;
  if (start >= peak || peak >= end) throw DegenerateEventError("zero-duration half-wave");

  const double ms_per_sample = 1000.0 / fs;

  FeatureVector f;
  f.amp1_uv = std::abs(at(samples, peak) - at(samples, start));
  f.amp2_uv = std::abs(at(samples, peak) - at(samples, end));
  f.dura_ms = static_cast<double>(peak - start) * ms_per_sample;
  f.durb_ms = static_cast<double>(end - peak) * ms_per_sample;
  f.dur1_ms = f.dura_ms + f.durb_ms;
  f.slope1 = f.amp1_uv / f.dura_ms;
  f.slope2 = f.amp2_uv / f.durb_ms;

  // Steepest-step sample of each half-wave, ties resolved away from the peak.
  int64_t i1 = start;
  double best1 = -1.0;
  for (int64_t i = start; i < peak; ++i) {
    double d = std::abs(at(samples, i + 1) - at(samples, i));
    if (d > best1) {
      best1 = d;
      i1 = i;
    }
  }
  int64_t i2 = peak;
  double best2 = -1.0;
  for (int64_t i = peak; i < end; ++i) {
    double d = std::abs(at(samples, i + 1) - at(samples, i));
    if (d >= best2) {
      best2 = d;
      i2 = i;
    }
  }
  f.dur2_ms = static_cast<double>(i2 - i1) * ms_per_sample;

  // Trimmed mean of the surrounding second, event samples excluded.
  const auto half_window = static_cast<int64_t>(std::llround(0.500 * fs));
  std::vector<double> context;
  for (int64_t i = std::max<int64_t>(0, peak - half_window);
       i <= std::min<int64_t>(samples.size() - 1, peak + half_window); ++i) {
    if (i >= start && i <= end) continue;
    context.push_back(samples[i]);
  }
  double baseline = 0.0;
  if (!context.empty()) {
    std::sort(context.begin(), context.end());
    auto trim = static_cast<size_t>(context.size() / 10);
    double sum = 0.0;
    size_t cnt = 0;
    for (size_t i = trim; i < context.size() - trim; ++i) {
      sum += context[i];
      ++cnt;
    }
    baseline = cnt ? sum / static_cast<double>(cnt) : 0.0;
  }
  f.amp_baseline_uv = std::abs(at(samples, peak) - baseline);
  return f;
}

}  // namespace spikedet
