#pragma once

#include <string>
#include <vector>

#include "spikedet/types.hpp"

namespace spikedet {

// Orthonormal scaling filter (synthesis low-pass, sum = sqrt(2)).
// Known names: db2, db4, db5, coif4, sym8.
const std::vector<double>& scaling_filter(const std::string& name);

struct WaveletTable {
  std::string name;
  int iterations = 0;   // refinement depth J
  double grid_step = 0; // 2^-J in natural wavelet time
  Eigen::VectorXd values;

  // support length in natural time units
  double support() const { return grid_step * static_cast<double>(values.size() - 1); }
};

struct ScaledKernel {
  double scale_a = 0.0;  // dilation in samples
  double fs = 0.0;
  Eigen::VectorXd samples;
  int center = 0;  // index of the dominant tap; coefficient[i] aligns here
};

struct CoefficientVector {
  double scale_a = 0.0;
  Eigen::VectorXd coeffs;  // same length as the input segment
  int boundary = 0;        // first/last `boundary` entries are edge-affected
};

// Iterated-refinement sampling of the mother wavelet on a dyadic grid,
// normalized to zero mean and unit L2 norm.
WaveletTable build_wavelet_table(const std::string& name, int cascade_iterations);

// psi((t - center)/a)/sqrt(a) sampled at the recording rate; scale_a is
// expressed in samples. Kernel L2 norm is fixed so that coefficients are
// invariant under resampling of the same continuous signal.
ScaledKernel scale_kernel(const WaveletTable& table, double scale_a, double fs);

// Riemann-sum transform: coefficient[tau] = sum_t x[t] k[t - tau + center] / fs,
// zero-padded at the edges; the edge-affected region is flagged.
CoefficientVector cwt(const Eigen::Ref<const Eigen::VectorXd>& segment,
                      const ScaledKernel& kernel);

// Default scale menu {4,10,20,30} defined at 200 Hz, rescaled by fs/200 and
// rounded to the integer sample grid.
std::vector<double> select_scales(double fs);
std::vector<double> select_scales(double fs, const std::vector<double>& reference_menu);

}  // namespace spikedet
