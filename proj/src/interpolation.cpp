#include "fpukdv/interpolation.hpp"

namespace fpukdv {

double l2_norm(const ContinuumSpectrum& F) { return F.coeffs.norm(); }

double hs_norm(const ContinuumSpectrum& F, double s) {
  double acc = 0;
  for (int k = -F.cutoff; k <= F.cutoff; ++k) acc += std::pow(japanese_bracket(double(k)), 2 * s) * std::norm(F(k));
  return std::sqrt(acc);
}

double evaluate_series(const ContinuumSpectrum& F, double x) {
  Complex acc = 0;
  for (int k = -F.cutoff; k <= F.cutoff; ++k) acc += F(k) * std::polar(1.0, k * x);
  return acc.real() * inv_sqrt_2pi<double>();
}

ContinuumSpectrum shift_phase(const ContinuumSpectrum& F, double a) {
  ContinuumSpectrum out(F.cutoff);
  for (int k = -F.cutoff; k <= F.cutoff; ++k) out(k) = F(k) * std::polar(1.0, k * a);
  return out;
}

double interpolation_multiplier(int k, double h) {
  if (k == 0) return 1.0;
  const double s = std::sin(h * k / 2);
  return 4 * s * s / (h * h * double(k) * double(k));
}

double evaluate_piecewise(const Field& f, double x) {
  const int m = f.grid.size();
  const double h = f.grid.h;
  const double c = std::floor(x / h);
  const double off = x - c * h;
  const int j = detail::wrap(static_cast<int>(c), m);
  const double a = f.values[j];
  const double b = f.values[(j + 1) % m];
  return a + (b - a) / h * off;
}

ContinuumSpectrum interpolate_spectrum(const Spectrum& F, int K) {
  if (K < 1) throw std::invalid_argument("interpolate: cutoff must be >= 1");
  const int n = F.grid.n;
  const int m = F.grid.size();
  ContinuumSpectrum out(K);
  for (int k = -K; k <= K; ++k) {
    // fold k into [-N, N-1]; the lattice spectrum is 2N-periodic
    const int folded = detail::wrap(k + n, m) - n;
    out(k) = interpolation_multiplier(k, F.grid.h) * F(folded);
  }
  return out;
}

ContinuumSpectrum interpolate_coeffs(const Field& f, int K) { return interpolate_spectrum(forward_dft(f), K); }

double mean_of_interpolant(const Field& f) {
  const int m = f.grid.size();
  double acc = 0;
  for (int j = 0; j < m; ++j) acc += f.values[(j + 1) % m] + f.values[j];
  return f.grid.h / 2 * acc;
}

double low_freq_discrepancy(const Field& f) {
  const Spectrum F = forward_dft(f);
  const int n = f.grid.n;
  double acc = 0;
  for (int k = -n; k <= n; ++k) {
    const Complex fk = F(k == n ? -n : k);
    acc += std::norm((interpolation_multiplier(k, f.grid.h) - 1.0) * fk);
  }
  return std::sqrt(acc);
}

double tail_norm(const Field& f, int K) {
  const int n = f.grid.n;
  if (K < n) throw std::invalid_argument("tail_norm: cutoff below pi/h");
  const ContinuumSpectrum L = interpolate_coeffs(f, K);
  double acc = 0;
  for (int k = n + 1; k <= K; ++k) acc += std::norm(L(k)) + std::norm(L(-k));
  return std::sqrt(acc);
}

}  // namespace fpukdv
