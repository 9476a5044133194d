#include "spikedet/wavelet.hpp"

#include <cmath>
#include <vector>

#include "spikedet/errors.hpp"

namespace spikedet {

WaveletTable build_wavelet_table(const std::string& name, int cascade_iterations) {
  if (cascade_iterations < 6)
    throw ConfigError("cascade_iterations must be >= 6, got " +
                      std::to_string(cascade_iterations));
  const std::vector<double>& h = scaling_filter(name);
  const auto L = static_cast<Eigen::Index>(h.size());
  const double sqrt2 = std::sqrt(2.0);

  // scaling-function values at the integers: the refinement relation
  // phi(m) = sqrt(2) sum_k h[k] phi(2m - k) pins them up to scale, and
  // sum_m phi(m) = 1 fixes the scale.  phi(0) = phi(L-1) = 0.
  const Eigen::Index ni = L - 2;
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(ni + 1, ni);
  for (Eigen::Index r = 0; r < ni; ++r) {
    for (Eigen::Index c = 0; c < ni; ++c) {
      Eigen::Index k = 2 * (r + 1) - (c + 1);
      if (k >= 0 && k < L) sys(r, c) = sqrt2 * h[static_cast<size_t>(k)];
      if (r == c) sys(r, c) -= 1.0;
    }
  }
  sys.row(ni).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni + 1);
  rhs[ni] = 1.0;
  Eigen::VectorXd interior = sys.colPivHouseholderQr().solve(rhs);

  // refine phi onto dyadic grids; existing grid points keep their values,
  // midpoints come from the same relation
  std::vector<double> phi(static_cast<size_t>(L), 0.0);
  for (Eigen::Index m = 1; m <= L - 2; ++m) phi[static_cast<size_t>(m)] = interior[m - 1];
  for (int j = 0; j < cascade_iterations - 1; ++j) {
    const Eigen::Index stride = Eigen::Index{1} << j;  // h tap spacing on the old grid
    const auto old_n = static_cast<Eigen::Index>(phi.size());
    std::vector<double> next(static_cast<size_t>(2 * (old_n - 1) + 1), 0.0);
    for (Eigen::Index m = 0; m < old_n; ++m) next[static_cast<size_t>(2 * m)] = phi[static_cast<size_t>(m)];
    for (Eigen::Index n = 1; n < 2 * (old_n - 1) + 1; n += 2) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < L; ++k) {
        Eigen::Index src = n - k * stride;  // phi(n 2^-(j+1) * 2 - k) on the old grid
        if (src >= 0 && src < old_n) acc += h[static_cast<size_t>(k)] * phi[static_cast<size_t>(src)];
      }
      next[static_cast<size_t>(n)] = sqrt2 * acc;
    }
    phi.swap(next);
  }

  // psi(n 2^-J) = sqrt(2) sum_k g[k] phi(n 2^-(J-1) - k), g[k] = (-1)^k h[L-1-k]
  const auto phi_n = static_cast<Eigen::Index>(phi.size());
  const Eigen::Index half = Eigen::Index{1} << (cascade_iterations - 1);
  std::vector<double> w(static_cast<size_t>(2 * (phi_n - 1) + 1), 0.0);
  for (Eigen::Index n = 0; n < static_cast<Eigen::Index>(w.size()); ++n) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < L; ++k) {
      double gk = ((k % 2) ? -1.0 : 1.0) * h[static_cast<size_t>(L - 1 - k)];
      Eigen::Index src = n - k * half;
      if (src >= 0 && src < phi_n) acc += gk * phi[static_cast<size_t>(src)];
    }
    w[static_cast<size_t>(n)] = sqrt2 * acc;
  }

  WaveletTable table;
  table.name = name;
  table.iterations = cascade_iterations;
  table.grid_step = std::ldexp(1.0, -cascade_iterations);
  table.values = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));

  double mean = table.values.mean();
  table.values.array() -= mean;
  double l2 = std::sqrt(table.values.squaredNorm() * table.grid_step);
  if (l2 <= 0) throw ConfigError("degenerate wavelet table for '" + name + "'");
  table.values /= l2;
  return table;
}

ScaledKernel scale_kernel(const WaveletTable& table, double scale_a, double fs) {
  if (scale_a <= 0) throw RangeError("scale must be positive");
  if (fs <= 0) throw RangeError("fs must be positive");

  const double support = table.support();
  const auto len = static_cast<Eigen::Index>(std::floor(support * scale_a)) + 1;
  if (static_cast<double>(len) > 10.0 * fs)
    throw ScaleError("kernel support " + std::to_string(len / fs) +
                     " s exceeds the 10 s window at scale " + std::to_string(scale_a));

  ScaledKernel k;
  k.scale_a = scale_a;
  k.fs = fs;
  k.samples.resize(len);

  // psi(i / a) by linear interpolation of the table grid
  const Eigen::Index n = table.values.size();
  for (Eigen::Index i = 0; i < len; ++i) {
    double pos = static_cast<double>(i) / scale_a / table.grid_step;
    auto i0 = static_cast<Eigen::Index>(std::floor(pos));
    double frac = pos - static_cast<double>(i0);
    double v0 = (i0 >= 0 && i0 < n) ? table.values[i0] : 0.0;
    double v1 = (i0 + 1 >= 0 && i0 + 1 < n) ? table.values[i0 + 1] : 0.0;
    k.samples[i] = v0 + frac * (v1 - v0);
  }

  // Exact L2 normalization to sqrt(fs): the continuous-time kernel
  // psi((t-tau)/a)/sqrt(a/fs) has unit L2 norm in seconds, which keeps
  // coefficients stable across resamplings of the same signal.
  double norm = k.samples.norm();
  if (norm <= 0) throw ScaleError("degenerate kernel at scale " + std::to_string(scale_a));
  k.samples *= std::sqrt(fs) / norm;

  Eigen::Index center = 0;
  k.samples.cwiseAbs().maxCoeff(&center);
  k.center = static_cast<int>(center);
  return k;
}

CoefficientVector cwt(const Eigen::Ref<const Eigen::VectorXd>& segment,
                      const ScaledKernel& kernel) {
  const Eigen::Index n = segment.size();
  const Eigen::Index m = kernel.samples.size();
  if (n < m)
    throw InputError("segment length " + std::to_string(n) + " shorter than kernel length " +
                     std::to_string(m));

  CoefficientVector out;
  out.scale_a = kernel.scale_a;
  out.boundary = static_cast<int>((m + 1) / 2);
  out.coeffs.setZero(n);

  const double inv_fs = 1.0 / kernel.fs;
  const Eigen::Index c = kernel.center;
  for (Eigen::Index tau = 0; tau < n; ++tau) {
    Eigen::Index lo = tau - c;              // segment index of kernel tap 0
    Eigen::Index k0 = lo < 0 ? -lo : 0;     // first in-range kernel tap
    Eigen::Index s0 = lo < 0 ? 0 : lo;
    Eigen::Index count = std::min(m - k0, n - s0);
    if (count <= 0) continue;
    out.coeffs[tau] = segment.segment(s0, count).dot(kernel.samples.segment(k0, count)) * inv_fs;
  }
  return out;
}

std::vector<double> select_scales(double fs) {
  return select_scales(fs, {4.0, 10.0, 20.0, 30.0});
}

std::vector<double> select_scales(double fs, const std::vector<double>& reference_menu) {
  if (fs <= 0) throw RangeError("fs must be positive");
  std::vector<double> out;
  out.reserve(reference_menu.size());
  for (double s : reference_menu) {
    double scaled = std::max(1.0, std::round(s * fs / 200.0));
    out.push_back(scaled);
  }
  return out;
}

}  // namespace spikedet
