#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fpukdv {

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
inline Real inv_sqrt_2pi() {
  return Real(1) / std::sqrt(Real(2) * std::numbers::pi_v<Real>);
}

template <typename Real>
inline Real japanese_bracket(Real x) {
  return std::sqrt(Real(1) + x * x);
}

// Periodic lattice of 2N points x_j = h*j, h = pi/N, dual indices -N..N-1.
template <typename Real>
struct BasicLatticeGrid {
  int n = 0;
  Real h = 0;

  BasicLatticeGrid() = default;
  explicit BasicLatticeGrid(int n_) : n(n_), h(std::numbers::pi_v<Real> / Real(n_)) {
    if (n_ < 1) throw std::invalid_argument("lattice needs N >= 1");
  }

  int size() const { return 2 * n; }
  Real x(int j) const { return h * Real(j); }
  std::vector<int> modes() const {
    std::vector<int> m;
    m.reserve(size());
    for (int k = -n; k < n; ++k) m.push_back(k);
    return m;
  }
  bool operator==(const BasicLatticeGrid& o) const { return n == o.n; }
};

template <typename Real>
struct BasicField {
  BasicLatticeGrid<Real> grid;
  RealVector<Real> values;

  BasicField() = default;
  explicit BasicField(const BasicLatticeGrid<Real>& g) : grid(g), values(RealVector<Real>::Zero(g.size())) {}
  BasicField(const BasicLatticeGrid<Real>& g, RealVector<Real> v) : grid(g), values(std::move(v)) {
    if (values.size() != g.size()) throw std::invalid_argument("field length must be 2N");
  }

  template <typename F>
  static BasicField sample(const BasicLatticeGrid<Real>& g, F&& f) {
    BasicField out(g);
    for (int j = 0; j < g.size(); ++j) out.values[j] = f(g.x(j));
    return out;
  }
};

// Coefficients stored at index k + N.
template <typename Real>
struct BasicSpectrum {
  BasicLatticeGrid<Real> grid;
  ComplexVector<Real> coeffs;

  BasicSpectrum() = default;
  explicit BasicSpectrum(const BasicLatticeGrid<Real>& g) : grid(g), coeffs(ComplexVector<Real>::Zero(g.size())) {}

  std::complex<Real>& operator()(int k) { return coeffs[k + grid.n]; }
  const std::complex<Real>& operator()(int k) const { return coeffs[k + grid.n]; }
};

using LatticeGrid = BasicLatticeGrid<double>;
using Field = BasicField<double>;
using Spectrum = BasicSpectrum<double>;
using Complex = std::complex<double>;

enum class Symbol { nabla_h, abs_nabla_h, bracket_nabla_h, partial_h, laplace_h, nabla_h_inverse, bracket_k_power };

struct SymbolKind {
  Symbol tag = Symbol::nabla_h;
  double s = 0.0;
};

enum class ProductMode { exact_circular, dealiased };

// sigma(k) = (2/h) sin(hk/2); nabla_h has symbol i*sigma.
template <typename Real>
inline Real sigma_h(int k, Real h) {
  return Real(2) / h * std::sin(h * Real(k) / Real(2));
}

template <typename Real>
std::complex<Real> symbol_value(const SymbolKind& kind, int k, Real h) {
  const Real sg = sigma_h(k, h);
  switch (kind.tag) {
    case Symbol::nabla_h: return {Real(0), sg};
    case Symbol::abs_nabla_h: return {std::abs(sg), Real(0)};
    case Symbol::bracket_nabla_h: return {japanese_bracket(sg), Real(0)};
    case Symbol::partial_h: return {Real(0), Real(k)};
    case Symbol::laplace_h: return {-sg * sg, Real(0)};
    case Symbol::nabla_h_inverse:
      if (k == 0) return {Real(0), Real(0)};
      return {Real(0), -Real(1) / sg};
    case Symbol::bracket_k_power: return {std::pow(japanese_bracket(Real(k)), Real(kind.s)), Real(0)};
  }
  return {};
}

namespace detail {

template <typename Real>
Eigen::FFT<Real>& fft_engine() {
  thread_local Eigen::FFT<Real> engine = [] {
    Eigen::FFT<Real> e;
    e.SetFlag(Eigen::FFT<Real>::Unscaled);
    return e;
  }();
  return engine;
}

inline int wrap(int k, int m) {
  int r = k % m;
  return r < 0 ? r + m : r;
}

// smallest 2^a 3^b 5^c >= n
inline int smooth_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace detail

template <typename Real>
BasicSpectrum<Real> forward_dft(const BasicField<Real>& f) {
  const auto& g = f.grid;
  const int m = g.size();
  ComplexVector<Real> in = f.values.template cast<std::complex<Real>>();
  ComplexVector<Real> out(m);
  detail::fft_engine<Real>().fwd(out, in);
  BasicSpectrum<Real> F(g);
  const Real scale = g.h * inv_sqrt_2pi<Real>();
  for (int k = -g.n; k < g.n; ++k) F(k) = scale * out[detail::wrap(k, m)];
  return F;
}

template <typename Real>
Real hermitian_defect(const BasicSpectrum<Real>& F) {
  const int n = F.grid.n;
  Real d = std::abs(F(-n).imag());
  for (int k = 1; k < n; ++k) d = std::max(d, std::abs(F(-k) - std::conj(F(k))));
  d = std::max(d, std::abs(F(0).imag()));
  return d;
}

template <typename Real>
BasicField<Real> inverse_dft(const BasicSpectrum<Real>& F) {
  const auto& g = F.grid;
  const int m = g.size();
  const Real scale = std::max(Real(1), F.coeffs.cwiseAbs().maxCoeff());
  if (hermitian_defect(F) > Real(1e-11) * scale)
    throw std::domain_error("inverse_dft: spectrum is not Hermitian symmetric");
  ComplexVector<Real> in(m), out(m);
  for (int k = -g.n; k < g.n; ++k) in[detail::wrap(k, m)] = F(k);
  detail::fft_engine<Real>().inv(out, in);
  return BasicField<Real>(g, (out.real() * inv_sqrt_2pi<Real>()).eval());
}

template <typename Real>
BasicSpectrum<Real> apply_symbol(const BasicSpectrum<Real>& F, const SymbolKind& kind) {
  if (kind.tag == Symbol::nabla_h_inverse && std::abs(F(0)) != Real(0))
    throw std::domain_error("nabla_h_inverse: nonzero mean");
  BasicSpectrum<Real> out(F.grid);
  for (int k = -F.grid.n; k < F.grid.n; ++k) out(k) = symbol_value(kind, k, F.grid.h) * F(k);
  return out;
}

template <typename Real>
BasicField<Real> forward_difference(const BasicField<Real>& f) {
  const int m = f.grid.size();
  BasicField<Real> g(f.grid);
  for (int j = 0; j < m; ++j) g.values[j] = (f.values[(j + 1) % m] - f.values[j]) / f.grid.h;
  return g;
}

template <typename Real>
Real lp_norm(const BasicField<Real>& f, Real p) {
  if (!(p >= Real(1))) throw std::domain_error("lp_norm: p must be >= 1");
  if (std::isinf(p)) return f.values.cwiseAbs().maxCoeff();
  Real acc = 0;
  for (Real v : f.values) acc += std::pow(std::abs(v), p);
  return std::pow(f.grid.h * acc, Real(1) / p);
}

template <typename Real>
Real hs_norm(const BasicSpectrum<Real>& F, Real s) {
  Real acc = 0;
  for (int k = -F.grid.n; k < F.grid.n; ++k)
    acc += std::pow(japanese_bracket(Real(k)), Real(2) * s) * std::norm(F(k));
  return std::sqrt(acc);
}

// Variant with <nabla_h>^s in place of <k>^s; only used to probe norm equivalence.
template <typename Real>
Real hs_norm_nabla(const BasicSpectrum<Real>& F, Real s) {
  Real acc = 0;
  for (int k = -F.grid.n; k < F.grid.n; ++k)
    acc += std::pow(japanese_bracket(sigma_h(k, F.grid.h)), Real(2) * s) * std::norm(F(k));
  return std::sqrt(acc);
}

template <typename Real>
Real l2_norm(const BasicSpectrum<Real>& F) {
  return F.coeffs.norm();
}

template <typename Real>
BasicSpectrum<Real> project_nyquist(BasicSpectrum<Real> F) {
  F(-F.grid.n) = 0;
  return F;
}

// c(k) = (2 pi)^{-1/2} sum_{k1+k2=k} a(k1) b(k2) over |k1|,|k2|,|k| <= L,
// vectors stored at index k + L. Zero-padded FFT of length >= 3L+1, so no
// aliased sum can land inside the band.
template <typename Real>
ComplexVector<Real> truncated_convolution(const ComplexVector<Real>& a, const ComplexVector<Real>& b, int L) {
  if (a.size() != 2 * L + 1 || b.size() != 2 * L + 1)
    throw std::invalid_argument("truncated_convolution: size mismatch");
  const int m = detail::smooth_size(3 * L + 1);
  auto& fft = detail::fft_engine<Real>();
  ComplexVector<Real> pa = ComplexVector<Real>::Zero(m), pb = ComplexVector<Real>::Zero(m);
  for (int k = -L; k <= L; ++k) {
    pa[detail::wrap(k, m)] = a[k + L];
    pb[detail::wrap(k, m)] = b[k + L];
  }
  ComplexVector<Real> xa(m), xb(m), out(m);
  fft.inv(xa, pa);
  fft.inv(xb, pb);
  xa.array() *= xb.array();
  fft.fwd(out, xa);
  const Real scale = inv_sqrt_2pi<Real>() / Real(m);
  ComplexVector<Real> c(2 * L + 1);
  for (int k = -L; k <= L; ++k) c[k + L] = scale * out[detail::wrap(k, m)];
  return c;
}

template <typename Real>
ComplexVector<Real> truncated_square(const ComplexVector<Real>& a, int L) {
  if (a.size() != 2 * L + 1) throw std::invalid_argument("truncated_square: size mismatch");
  const int m = detail::smooth_size(3 * L + 1);
  auto& fft = detail::fft_engine<Real>();
  ComplexVector<Real> pa = ComplexVector<Real>::Zero(m);
  for (int k = -L; k <= L; ++k) pa[detail::wrap(k, m)] = a[k + L];
  ComplexVector<Real> xa(m), out(m);
  fft.inv(xa, pa);
  xa.array() = xa.array().square();
  fft.fwd(out, xa);
  const Real scale = inv_sqrt_2pi<Real>() / Real(m);
  ComplexVector<Real> c(2 * L + 1);
  for (int k = -L; k <= L; ++k) c[k + L] = scale * out[detail::wrap(k, m)];
  return c;
}

// Lattice coefficients without the Nyquist entry, as a band |k| <= N-1.
template <typename Real>
ComplexVector<Real> band_of(const BasicSpectrum<Real>& F) {
  return F.coeffs.segment(1, 2 * F.grid.n - 1);
}

template <typename Real>
BasicSpectrum<Real> from_band(const BasicLatticeGrid<Real>& g, const ComplexVector<Real>& band) {
  BasicSpectrum<Real> F(g);
  F.coeffs.segment(1, 2 * g.n - 1) = band;
  return F;
}

template <typename Real>
BasicSpectrum<Real> spectral_product(const BasicSpectrum<Real>& F, const BasicSpectrum<Real>& G,
                                     ProductMode mode = ProductMode::exact_circular) {
  if (!(F.grid == G.grid)) throw std::invalid_argument("spectral_product: grid mismatch");
  const auto& g = F.grid;
  if (mode == ProductMode::dealiased) {
    if (g.n == 1) return BasicSpectrum<Real>(g);
    return from_band(g, truncated_convolution(band_of(F), band_of(G), g.n - 1));
  }
  const int m = g.size();
  auto& fft = detail::fft_engine<Real>();
  ComplexVector<Real> pf(m), pg(m), xf(m), xg(m), out(m);
  for (int k = -g.n; k < g.n; ++k) {
    pf[detail::wrap(k, m)] = F(k);
    pg[detail::wrap(k, m)] = G(k);
  }
  fft.inv(xf, pf);
  fft.inv(xg, pg);
  xf.array() *= xg.array();
  fft.fwd(out, xf);
  BasicSpectrum<Real> P(g);
  const Real scale = inv_sqrt_2pi<Real>() / Real(m);
  for (int k = -g.n; k < g.n; ++k) P(k) = scale * out[detail::wrap(k, m)];
  return P;
}

}  // namespace fpukdv
