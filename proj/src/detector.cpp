#include "spikedet/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spikedet/errors.hpp"

namespace spikedet {

std::vector<WindowSlice> segment_windows(int64_t n_samples, double fs, const WindowSpec& spec) {
  if (n_samples <= 0) throw InputError("empty channel");
  if (fs <= 0) throw RangeError("fs must be positive");
  if (!(spec.hop_s > 0) || spec.hop_s > spec.window_s)
    throw ConfigError("window spec requires 0 < hop_s <= window_s");

  const auto w = static_cast<int64_t>(std::llround(spec.window_s * fs));
  const auto min_tail = static_cast<int64_t>(std::llround(2.0 * fs));

  std::vector<WindowSlice> out;
  if (n_samples < w) {
    if (n_samples >= min_tail) out.push_back({0, n_samples});
    return out;
  }
  int64_t k = 0;
  int64_t last_start = -1;
  while (true) {
    auto start = static_cast<int64_t>(std::llround(static_cast<double>(k) * spec.hop_s * fs));
    if (start + w > n_samples) break;
    out.push_back({start, w});
    last_start = start;
    ++k;
  }
  if (out.empty() || out.back().start + w < n_samples) {
    int64_t tail = n_samples - w;
    if (tail != last_start) out.push_back({tail, w});
  }
  return out;
}

double threshold_for(const CoefficientVector&,
                     const Eigen::Ref<const Eigen::VectorXd>& segment, double k) {
  if (!(k > 0)) throw RangeError("threshold factor k must be positive");
  if (segment.size() == 0) throw InputError("empty segment");
  double mean = segment.mean();
  double var = (segment.array() - mean).square().sum() / static_cast<double>(segment.size());
  double sd = std::sqrt(var);
  if (sd <= 0.0) return std::numeric_limits<double>::infinity();
  return k * sd;
}

std::vector<int> detect_peaks(const CoefficientVector& coeffs, double threshold,
                              int min_separation_samples) {
  if (min_separation_samples < 1) throw RangeError("min separation must be >= 1 sample");
  const auto n = static_cast<int>(coeffs.coeffs.size());
  const int lo = std::max(1, coeffs.boundary);
  const int hi = std::min(n - 1, n - coeffs.boundary);

  std::vector<int> maxima;
  for (int i = lo; i < hi; ++i) {
    double v = std::abs(coeffs.coeffs[i]);
    if (v < threshold) continue;
    double prev = std::abs(coeffs.coeffs[i - 1]);
    double next = std::abs(coeffs.coeffs[i + 1]);
    if (v >= prev && v >= next) maxima.push_back(i);
  }

  std::sort(maxima.begin(), maxima.end(), [&](int a, int b) {
    double va = std::abs(coeffs.coeffs[a]);
    double vb = std::abs(coeffs.coeffs[b]);
    if (va != vb) return va > vb;
    return a < b;
  });

  std::vector<int> kept;
  for (int idx : maxima) {
    bool blocked = false;
    for (int j : kept)
      if (std::abs(idx - j) < min_separation_samples) {
        blocked = true;
        break;
      }
    if (!blocked) kept.push_back(idx);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

namespace {

// Candidates carry |coefficient| so dedup and thresholds compare magnitudes.
std::vector<CandidateEvent> merge_candidates(std::vector<CandidateEvent> cands,
                                             double min_separation_ms, double fs) {
  const double min_sep_samples = min_separation_ms * fs / 1000.0;
  std::sort(cands.begin(), cands.end(), [](const CandidateEvent& a, const CandidateEvent& b) {
    if (a.coefficient != b.coefficient) return a.coefficient > b.coefficient;
    return a.peak_sample < b.peak_sample;
  });
  std::vector<CandidateEvent> kept;
  for (const auto& c : cands) {
    bool blocked = false;
    for (const auto& k : kept)
      if (std::abs(static_cast<double>(c.peak_sample - k.peak_sample)) < min_sep_samples) {
        blocked = true;
        break;
      }
    if (!blocked) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(), [](const CandidateEvent& a, const CandidateEvent& b) {
    return a.peak_sample < b.peak_sample;
  });
  return kept;
}

}  // namespace

std::vector<CandidateEvent> collect_candidates_channel(const Recording& rec, int channel_index,
                                                       const DetectorConfig& cfg) {
  const Channel& ch = rec.channels.at(static_cast<size_t>(channel_index));
  const double fs = rec.fs;

  WaveletTable table = build_wavelet_table(cfg.wavelet, cfg.cascade_iterations);
  std::vector<ScaledKernel> kernels;
  for (double a : select_scales(fs, cfg.scales)) kernels.push_back(scale_kernel(table, a, fs));

  const int min_sep =
      std::max(1, static_cast<int>(std::llround(cfg.min_separation_ms * fs / 1000.0)));
  // Thresholds are stated in segment (µV) units; CWT coefficients carry an
  // extra 1/sqrt(fs) relative to those units, so the comparison happens in
  // coefficient units.
  const double unit_bridge = 1.0 / std::sqrt(fs);

  std::vector<CandidateEvent> all;
  for (const WindowSlice& w : segment_windows(ch.samples.size(), fs, cfg.window)) {
    auto segment = ch.samples.segment(w.start, w.length);
    for (const ScaledKernel& kernel : kernels) {
      CoefficientVector coeffs = cwt(segment, kernel);
      double thr_uv = threshold_for(coeffs, segment, cfg.k);
      if (std::isinf(thr_uv)) continue;
      double thr = thr_uv * unit_bridge;
      double sd = thr_uv / cfg.k;
      // side lobes of one response sit within the kernel's own span
      const int sep = std::max(min_sep, static_cast<int>(kernel.samples.size() / 2));
      for (int idx : detect_peaks(coeffs, thr, sep)) {
        CandidateEvent ev;
        ev.channel = ch.label;
        ev.channel_index = channel_index;
        ev.peak_sample = w.start + idx;
        ev.peak_time_s = static_cast<double>(ev.peak_sample) / fs;
        ev.scale_a = kernel.scale_a;
        ev.coefficient = std::abs(coeffs.coeffs[idx]);
        ev.segment_std_uv = sd;
        all.push_back(std::move(ev));
      }
    }
  }
  return merge_candidates(std::move(all), cfg.min_separation_ms, fs);
}

std::vector<CandidateEvent> collect_candidates(const Recording& rec, const DetectorConfig& cfg) {
  std::vector<CandidateEvent> all;
  for (int c = 0; c < static_cast<int>(rec.channels.size()); ++c) {
    auto part = collect_candidates_channel(rec, c, cfg);
    all.insert(all.end(), part.begin(), part.end());
  }
  std::sort(all.begin(), all.end(), [](const CandidateEvent& a, const CandidateEvent& b) {
    if (a.channel != b.channel) return a.channel < b.channel;
    return a.peak_sample < b.peak_sample;
  });
  return all;
}

}  // namespace spikedet
