#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <spikedet/detector.hpp>
#include <spikedet/errors.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace spikedet;

namespace {

CoefficientVector coeff_vec(std::vector<double> v, int boundary = 0) {
  CoefficientVector c;
  c.scale_a = 1.0;
  c.coeffs = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  c.boundary = boundary;
  return c;
}

Recording noise_recording(uint32_t seed, double fs, double seconds, int channels) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 10.0);
  Recording rec;
  rec.fs = fs;
  int n = static_cast<int>(fs * seconds);
  for (int c = 0; c < channels; ++c) {
    Channel ch;
    ch.label = "CH" + std::to_string(c);
    ch.samples.resize(n);
    for (int i = 0; i < n; ++i) ch.samples[i] = g(rng);
    rec.channels.push_back(std::move(ch));
  }
  return rec;
}

// add a triangular transient peaking at peak_s
void add_triangle(Recording& rec, int channel, double peak_s, double amp, double rise_ms,
                  double fall_ms) {
  Signal& x = rec.channels[channel].samples;
  const double fs = rec.fs;
  int peak = static_cast<int>(std::lround(peak_s * fs));
  int rise = static_cast<int>(std::lround(rise_ms / 1000.0 * fs));
  int fall = static_cast<int>(std::lround(fall_ms / 1000.0 * fs));
  for (int i = -rise; i <= fall; ++i) {
    int idx = peak + i;
    if (idx < 0 || idx >= x.size()) continue;
    double frac = i < 0 ? 1.0 + static_cast<double>(i) / rise : 1.0 - static_cast<double>(i) / fall;
    x[idx] += amp * frac;
  }
}

}  // namespace

TEST_CASE("sliding windows cover the recording") {
  WindowSpec spec;  // 10 s window, 9.5 s hop

  SUBCASE("30 s at 200 Hz gets three hops plus a tail") {
    auto w = segment_windows(6000, 200.0, spec);
    REQUIRE(w.size() == 4);
    CHECK(w[0].start == 0);
    CHECK(w[1].start == 1900);
    CHECK(w[2].start == 3800);
    CHECK(w[3].start == 4000);  // flush with the end
    for (const auto& s : w) CHECK(s.length == 2000);
  }
  SUBCASE("5 s recording becomes one short window") {
    auto w = segment_windows(1000, 200.0, spec);
    REQUIRE(w.size() == 1);
    CHECK(w[0].start == 0);
    CHECK(w[0].length == 1000);
  }
  SUBCASE("recordings under 2 s yield nothing") {
    CHECK(segment_windows(300, 200.0, spec).empty());
    CHECK_THROWS_AS(segment_windows(0, 200.0, spec), InputError);
  }
  SUBCASE("hop equal to window tiles without overlap") {
    WindowSpec tiling{10.0, 10.0};
    auto w = segment_windows(6000, 200.0, tiling);
    REQUIRE(w.size() == 3);
    CHECK(w[0].start == 0);
    CHECK(w[1].start == 2000);
    CHECK(w[2].start == 4000);
  }
  SUBCASE("every sample is covered") {
    for (int64_t n : {2000, 2500, 6000, 6100, 12345}) {
      auto w = segment_windows(n, 200.0, spec);
      REQUIRE(!w.empty());
      CHECK(w.front().start == 0);
      CHECK(w.back().start + w.back().length == n);
      for (size_t i = 1; i < w.size(); ++i) CHECK(w[i].start <= w[i - 1].start + w[i - 1].length);
    }
  }
}

TEST_CASE("threshold tracks the segment deviation") {
  // alternating 0/20 has population std exactly 10
  Eigen::VectorXd seg(6);
  seg << 0, 20, 0, 20, 0, 20;
  CoefficientVector c = coeff_vec({0, 0, 0, 0, 0, 0});

  CHECK(threshold_for(c, seg, 3.0) == doctest::Approx(30.0));
  CHECK(threshold_for(c, seg, 2.0) == doctest::Approx(20.0));
  CHECK(threshold_for(c, 2.5 * seg, 3.0) == doctest::Approx(75.0));

  Eigen::VectorXd flat = Eigen::VectorXd::Constant(100, 7.5);
  CHECK(std::isinf(threshold_for(c, flat, 3.0)));
}

TEST_CASE("peak picking") {
  SUBCASE("documented example") {
    CoefficientVector c = coeff_vec({0, 1, 3, 1, 0, 4, 2});
    auto peaks = detect_peaks(c, 2.5, 2);
    CHECK(peaks == std::vector<int>{2, 5});
  }
  SUBCASE("all below threshold") {
    CoefficientVector c = coeff_vec({0, 1, 3, 1, 0, 4, 2});
    CHECK(detect_peaks(c, 10.0, 2).empty());
  }
  SUBCASE("equal maxima a sample apart keep the earlier") {
    CoefficientVector c = coeff_vec({0, 3, 3, 0});
    CHECK(detect_peaks(c, 2.0, 2) == std::vector<int>{1});
  }
  SUBCASE("negative responses count by magnitude") {
    CoefficientVector c = coeff_vec({0, -5, 0, 3, 0});
    CHECK(detect_peaks(c, 2.5, 1) == std::vector<int>{1, 3});
  }
  SUBCASE("separation keeps the largest") {
    CoefficientVector c = coeff_vec({0, 3, 0, 4, 0, 3, 0});
    // all three are peaks; min separation 3 removes both neighbours of index 3
    CHECK(detect_peaks(c, 2.0, 3) == std::vector<int>{3});
  }
  SUBCASE("boundary samples are excluded") {
    CoefficientVector c = coeff_vec({0, 9, 0, 0, 4, 0, 0, 9, 0}, 3);
    CHECK(detect_peaks(c, 2.0, 1) == std::vector<int>{4});
  }
}

TEST_CASE("candidate collection") {
  DetectorConfig cfg;  // defaults: db2, scales 4/10/20/30, k=3

  SUBCASE("one clean spike yields one candidate at its peak") {
    Recording rec;
    rec.fs = 200.0;
    rec.channels.push_back({"C3", Eigen::VectorXd::Zero(2000)});
    add_triangle(rec, 0, 5.0, 120.0, 20.0, 40.0);
    auto cands = collect_candidates(rec, cfg);
    REQUIRE(!cands.empty());
    int within = 0;
    for (const auto& c : cands) {
      CHECK(c.channel == "C3");
      if (std::abs(c.peak_time_s - 5.0) < 0.05) ++within;
    }
    CHECK(within == 1);
  }

  SUBCASE("zero recording yields nothing") {
    Recording rec;
    rec.fs = 200.0;
    rec.channels.push_back({"Fp1", Eigen::VectorXd::Zero(4000)});
    CHECK(collect_candidates(rec, cfg).empty());
  }

  SUBCASE("amplitude scaling leaves the candidate set fixed") {
    Recording rec = noise_recording(17, 200.0, 20.0, 1);
    add_triangle(rec, 0, 7.25, 150.0, 20.0, 40.0);
    add_triangle(rec, 0, 13.0, 180.0, 25.0, 50.0);

    Recording scaled = rec;
    scaled.channels[0].samples *= 2.7;

    auto a = collect_candidates(rec, cfg);
    auto b = collect_candidates(scaled, cfg);
    REQUIRE(a.size() == b.size());
    REQUIRE(!a.empty());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].peak_sample == b[i].peak_sample);
      CHECK(a[i].scale_a == b[i].scale_a);
      CHECK(b[i].coefficient == doctest::Approx(2.7 * a[i].coefficient).epsilon(1e-12));
      CHECK(b[i].segment_std_uv == doctest::Approx(2.7 * a[i].segment_std_uv).epsilon(1e-12));
    }
  }

  SUBCASE("merged candidates stay separated and sorted") {
    Recording rec = noise_recording(23, 200.0, 30.0, 2);
    add_triangle(rec, 0, 4.0, 140.0, 20.0, 40.0);
    add_triangle(rec, 1, 9.0, 140.0, 20.0, 40.0);
    auto cands = collect_candidates(rec, cfg);
    REQUIRE(!cands.empty());
    const int64_t min_gap = 10;  // 50 ms at 200 Hz
    for (size_t i = 1; i < cands.size(); ++i) {
      bool same = cands[i].channel == cands[i - 1].channel;
      if (same) {
        CHECK(cands[i].peak_sample - cands[i - 1].peak_sample >= min_gap);
      } else {
        CHECK(cands[i].channel > cands[i - 1].channel);
      }
    }
    // candidate invariants
    for (const auto& c : cands) {
      CHECK(c.coefficient > 0.0);
      CHECK(c.peak_time_s >= 0.0);
      CHECK(c.peak_time_s <= rec.duration_s());
      CHECK(c.segment_std_uv > 0.0);
    }
  }

  SUBCASE("per-channel collection matches the full run") {
    Recording rec = noise_recording(31, 200.0, 15.0, 2);
    auto full = collect_candidates(rec, cfg);
    auto c0 = collect_candidates_channel(rec, 0, cfg);
    auto c1 = collect_candidates_channel(rec, 1, cfg);
    REQUIRE(full.size() == c0.size() + c1.size());
    for (size_t i = 0; i < c0.size(); ++i) CHECK(full[i].peak_sample == c0[i].peak_sample);
    for (size_t i = 0; i < c1.size(); ++i)
      CHECK(full[c0.size() + i].peak_sample == c1[i].peak_sample);
  }

  SUBCASE("constant channel is skipped without error") {
    Recording rec;
    rec.fs = 200.0;
    rec.channels.push_back({"A", Eigen::VectorXd::Constant(2000, 42.0)});
    CHECK(collect_candidates(rec, cfg).empty());
  }
}
