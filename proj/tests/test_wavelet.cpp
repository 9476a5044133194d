#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <spikedet/errors.hpp>
#include <spikedet/wavelet.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace spikedet;

namespace {

// independent O(N*M) reference for coefficient[tau] = sum_t x[t]*k[t-tau+center]/fs
Eigen::VectorXd reference_cwt(const Eigen::VectorXd& x, const ScaledKernel& k) {
  const Eigen::Index n = x.size();
  const Eigen::Index m = k.samples.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (Eigen::Index tau = 0; tau < n; ++tau) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const Eigen::Index t = tau + j - k.center;
      if (t >= 0 && t < n) acc += x[t] * k.samples[j];
    }
    out[tau] = acc / k.fs;
  }
  return out;
}

Eigen::VectorXd random_signal(uint32_t seed, int n) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

const std::vector<std::string> kNames = {"db2", "db4", "db5", "sym8", "coif4"};

}  // namespace

TEST_CASE("scaling filters satisfy the orthonormal identities") {
  for (const auto& name : kNames) {
    CAPTURE(name);
    const std::vector<double>& h = scaling_filter(name);
    double sum = 0.0, alt = 0.0;
    for (size_t i = 0; i < h.size(); ++i) {
      sum += h[i];
      alt += (i % 2 == 0 ? h[i] : -h[i]);
    }
    CHECK(sum == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(alt) < 1e-10);
  }
  CHECK_THROWS_AS(scaling_filter("db3"), ConfigError);
  CHECK_THROWS_AS(scaling_filter(""), ConfigError);
}

TEST_CASE("wavelet tables are zero-mean, unit-norm, finite-support") {
  for (const auto& name : kNames) {
    CAPTURE(name);
    WaveletTable t = build_wavelet_table(name, 10);
    CHECK(t.grid_step == doctest::Approx(1.0 / 1024.0));
    double mean = 0.0, l2 = 0.0;
    for (Eigen::Index i = 0; i < t.values.size(); ++i) {
      mean += t.values[i] * t.grid_step;
      l2 += t.values[i] * t.values[i] * t.grid_step;
    }
    CHECK(std::abs(mean) < 1e-6);
    CHECK(l2 == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(build_wavelet_table("nope", 10), ConfigError);
}

TEST_CASE("db2 table support spans [0, 3]") {
  WaveletTable t = build_wavelet_table("db2", 10);
  CHECK(t.support() == doctest::Approx(3.0));
}

TEST_CASE("cascade refinement has converged by 8-10 iterations") {
  for (const auto& name : kNames) {
    CAPTURE(name);
    WaveletTable coarse = build_wavelet_table(name, 8);
    WaveletTable fine = build_wavelet_table(name, 10);
    REQUIRE((fine.values.size() - 1) == 4 * (coarse.values.size() - 1));
    double sup = 0.0;
    for (Eigen::Index i = 0; i < coarse.values.size(); ++i)
      sup = std::max(sup, std::abs(coarse.values[i] - fine.values[4 * i]));
    CHECK(sup < 1e-3);
  }
}

TEST_CASE("scaled kernels dilate and keep their norm") {
  WaveletTable t = build_wavelet_table("db2", 10);

  ScaledKernel k10 = scale_kernel(t, 10.0, 200.0);
  ScaledKernel k20 = scale_kernel(t, 20.0, 200.0);
  CHECK(std::abs(2 * k10.samples.size() - k20.samples.size()) <= 2);

  const double expect = std::sqrt(200.0);
  for (double a : {4.0, 10.0, 20.0, 30.0}) {
    ScaledKernel k = scale_kernel(t, a, 200.0);
    CAPTURE(a);
    CHECK(k.samples.norm() == doctest::Approx(expect).epsilon(1e-9));
    CHECK(k.scale_a == a);
    REQUIRE(k.center >= 0);
    REQUIRE(k.center < k.samples.size());
    // center sits on the dominant tap
    double peak = k.samples.cwiseAbs().maxCoeff();
    CHECK(std::abs(k.samples[k.center]) == doctest::Approx(peak));
  }
  // norm is scale-invariant well within 1%
  ScaledKernel a4 = scale_kernel(t, 4.0, 200.0);
  ScaledKernel a30 = scale_kernel(t, 30.0, 200.0);
  CHECK(a4.samples.norm() / a30.samples.norm() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("oversized kernels are rejected") {
  WaveletTable t = build_wavelet_table("db2", 10);
  CHECK_THROWS_AS(scale_kernel(t, 400.0, 100.0), ScaleError);  // support 1200 > 10 s * 100 Hz
  CHECK_NOTHROW(scale_kernel(t, 300.0, 100.0));
}

TEST_CASE("cwt fundamentals") {
  WaveletTable t = build_wavelet_table("db2", 10);
  ScaledKernel k = scale_kernel(t, 10.0, 200.0);

  SUBCASE("zero in, zero out") {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(400);
    CoefficientVector c = cwt(z, k);
    REQUIRE(c.coeffs.size() == 400);
    CHECK(c.coeffs.cwiseAbs().maxCoeff() == 0.0);
    CHECK(c.scale_a == 10.0);
    CHECK(c.boundary == (k.samples.size() + 1) / 2);
  }

  SUBCASE("linearity") {
    for (uint32_t seed = 1; seed <= 5; ++seed) {
      Eigen::VectorXd x = random_signal(seed, 300);
      Eigen::VectorXd y = random_signal(seed + 100, 300);
      const double a = 1.7, b = -0.45;
      Eigen::VectorXd lhs = cwt(a * x + b * y, k).coeffs;
      Eigen::VectorXd rhs = a * cwt(x, k).coeffs + b * cwt(y, k).coeffs;
      double scale = rhs.cwiseAbs().maxCoeff();
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    }
  }

  SUBCASE("segment shorter than kernel") {
    Eigen::VectorXd x = random_signal(3, static_cast<int>(k.samples.size()) - 1);
    CHECK_THROWS_AS(cwt(x, k), InputError);
  }

  SUBCASE("kernel against itself peaks at its center") {
    CoefficientVector c = cwt(k.samples, k);
    Eigen::Index argmax = 0;
    c.coeffs.cwiseAbs().maxCoeff(&argmax);
    CHECK(argmax == k.center);
  }
}

TEST_CASE("cwt matches the direct-summation reference") {
  for (const auto& name : kNames) {
    WaveletTable t = build_wavelet_table(name, 10);
    for (double a : {4.0, 10.0}) {
      CAPTURE(name);
      CAPTURE(a);
      ScaledKernel k = scale_kernel(t, a, 200.0);
      for (uint32_t seed = 10; seed < 14; ++seed) {
        Eigen::VectorXd x = random_signal(seed, 256);
        if (k.samples.size() > x.size()) {
          CHECK_THROWS_AS(cwt(x, k), InputError);
          continue;
        }
        Eigen::VectorXd got = cwt(x, k).coeffs;
        Eigen::VectorXd want = reference_cwt(x, k);
        double scale = want.cwiseAbs().maxCoeff();
        CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-9 * scale);
      }
    }
  }
}

TEST_CASE("shifting the input shifts the response") {
  WaveletTable t = build_wavelet_table("db2", 10);
  ScaledKernel k = scale_kernel(t, 10.0, 200.0);
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> shift_dist(-20, 20);

  for (int trial = 0; trial < 10; ++trial) {
    const int n = 400;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    // a narrow bump well inside the interior
    int c0 = 180 + trial;
    for (int i = -6; i <= 6; ++i) x[c0 + i] = 50.0 * std::exp(-0.5 * i * i / 4.0);
    int delta = shift_dist(rng);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      int j = i - delta;
      if (j >= 0 && j < n) y[i] = x[j];
    }
    CoefficientVector cx = cwt(x, k);
    CoefficientVector cy = cwt(y, k);
    Eigen::Index ax = 0, ay = 0;
    cx.coeffs.cwiseAbs().maxCoeff(&ax);
    cy.coeffs.cwiseAbs().maxCoeff(&ay);
    CAPTURE(trial);
    CHECK(std::abs(static_cast<long>(ay - ax) - delta) <= 1);
  }
}

TEST_CASE("scale menus track the sampling rate") {
  CHECK(select_scales(200.0) == std::vector<double>{4, 10, 20, 30});
  CHECK(select_scales(100.0) == std::vector<double>{2, 5, 10, 15});
  CHECK(select_scales(400.0) == std::vector<double>{8, 20, 40, 60});
  CHECK(select_scales(256.0, {4}) == std::vector<double>{5});  // round(5.12)
}
