#pragma once

#include "fpukdv/spectral_core.hpp"

namespace fpukdv {

// Truncated Fourier series on the continuum torus, coefficients at index k + K.
struct ContinuumSpectrum {
  int cutoff = 0;
  Eigen::VectorXcd coeffs;

  ContinuumSpectrum() = default;
  explicit ContinuumSpectrum(int K) : cutoff(K), coeffs(Eigen::VectorXcd::Zero(2 * K + 1)) {}
  ContinuumSpectrum(int K, Eigen::VectorXcd c) : cutoff(K), coeffs(std::move(c)) {}

  Complex& operator()(int k) { return coeffs[k + cutoff]; }
  const Complex& operator()(int k) const { return coeffs[k + cutoff]; }
};

double l2_norm(const ContinuumSpectrum& F);
double hs_norm(const ContinuumSpectrum& F, double s);
// (2 pi)^{-1/2} sum_k F(k) e^{ikx}
double evaluate_series(const ContinuumSpectrum& F, double x);
// multiplies coefficient k by e^{ika}, i.e. translation by -a
ContinuumSpectrum shift_phase(const ContinuumSpectrum& F, double a);

// 4 sin^2(hk/2) / (h k)^2, equal to 1 at k = 0
double interpolation_multiplier(int k, double h);

double evaluate_piecewise(const Field& f, double x);
ContinuumSpectrum interpolate_coeffs(const Field& f, int K);
ContinuumSpectrum interpolate_spectrum(const Spectrum& F, int K);
double mean_of_interpolant(const Field& f);
double low_freq_discrepancy(const Field& f);
double tail_norm(const Field& f, int K);

}  // namespace fpukdv
