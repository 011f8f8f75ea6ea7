#include "fpukdv/normal_form.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace fpukdv {

namespace {

using Band = Eigen::VectorXcd;
constexpr Complex I(0.0, 1.0);

struct FpuTraits {
  int L;
  double h;
  double c = inv_sqrt_2pi<double>();
  std::vector<double> sin4, cos4, sigma;  // sin(hk/4), cos(hk/4) for |k| <= 4L; sigma for |k| <= 2L

  FpuTraits(int L_, double h_) : L(L_), h(h_), sin4(8 * L_ + 1), cos4(8 * L_ + 1), sigma(4 * L_ + 1) {
    for (int k = -4 * L; k <= 4 * L; ++k) {
      sin4[k + 4 * L] = std::sin(h * k / 4);
      cos4[k + 4 * L] = std::cos(h * k / 4);
    }
    for (int k = -2 * L; k <= 2 * L; ++k) sigma[k + 2 * L] = sigma_h(k, h);
  }
  double S(int k) const { return sin4[k + 4 * L]; }
  double C(int k) const { return cos4[k + 4 * L]; }
  double res2(int k, int k1, int k2) const { return -8.0 / (h * h * h) * S(k1) * S(k2) * S(k); }
  double res3(int, int k1, int k2, int k3) const {
    return -8.0 / (h * h * h) * S(k1 + k2) * S(k2 + k3) * S(k1 + k3);
  }
  Complex deriv(int k) const { return {0.0, sigma[k + 2 * L]}; }
  // B2 multiplier: deriv(k) / (i res2)
  double b2(int k, int k1, int k2) const { return sigma[k + 2 * L] / res2(k, k1, k2); }
};

struct KdvTraits {
  int L;
  double c = inv_sqrt_2pi<double>();
  explicit KdvTraits(int L_) : L(L_) {}
  double res2(int k, int k1, int k2) const { return psi2(k, k1, k2); }
  double res3(int k, int k1, int k2, int k3) const { return psi3(k, k1, k2, k3); }
  Complex deriv(int k) const { return {0.0, double(k)}; }
  double b2(int k, int k1, int k2) const { return double(k) / psi2(k, k1, k2); }
};

inline Complex osc(double t, int e, double phase) { return std::polar(1.0, e * t * phase); }

template <typename Tr>
bool in_band(const Tr& tr, int k) {
  return k >= -tr.L && k <= tr.L;
}

template <typename Tr>
Band form_b1(const Tr& tr, const Band& V, double t, int e) {
  const int L = tr.L;
  Band out = Band::Zero(2 * L + 1);
  for (int k = -L; k <= L; ++k) {
    if (k == 0) continue;
    Complex acc = 0;
    for (int k1 = -L; k1 <= L; ++k1) {
      const int k2 = k - k1;
      if (k1 == 0 || k2 == 0 || !in_band(tr, k2)) continue;
      acc += osc(t, e, tr.res2(k, k1, k2)) * V[k1 + L] * V[k2 + L];
    }
    out[k + L] = (-0.25 * e * tr.c) * tr.deriv(k) * acc;
  }
  return out;
}

template <typename Tr>
Band form_b2(const Tr& tr, const Band& f, const Band& g, double t, int e) {
  const int L = tr.L;
  Band out = Band::Zero(2 * L + 1);
  for (int k = -L; k <= L; ++k) {
    if (k == 0) continue;
    Complex acc = 0;
    for (int k1 = -L; k1 <= L; ++k1) {
      const int k2 = k - k1;
      if (k1 == 0 || k2 == 0 || !in_band(tr, k2)) continue;
      const double r = tr.res2(k, k1, k2);
      if (r == 0.0) throw std::logic_error("B2: vanishing resonance on its index set");
      acc += tr.b2(k, k1, k2) * osc(t, e, r) * f[k1 + L] * g[k2 + L];
    }
    out[k + L] = tr.c * acc;
  }
  return out;
}

// coefficient of V(k1)V(k2)V(k3) in B2(V, B1(V)) before the oscillating factor
template <typename Tr>
Complex n3_coeff(const Tr& tr, int k, int k1, int k2, int k3, int e) {
  const int m = k2 + k3;
  return tr.c * tr.c * tr.b2(k, k1, m) * (-0.25 * e) * tr.deriv(m);
}

// Visits every admissible cubic triple: k != 0, all of k1, k2, k3, k2+k3 nonzero and in band.
template <typename Tr, typename Visit>
void for_cubic(const Tr& tr, Visit&& visit) {
  const int L = tr.L;
  for (int k = -L; k <= L; ++k) {
    if (k == 0) continue;
    for (int k1 = -L; k1 <= L; ++k1) {
      if (k1 == 0) continue;
      for (int k2 = -L; k2 <= L; ++k2) {
        if (k2 == 0) continue;
        const int k3 = k - k1 - k2;
        const int m = k2 + k3;
        if (k3 == 0 || m == 0 || !in_band(tr, k3) || !in_band(tr, m)) continue;
        visit(k, k1, k2, k3);
      }
    }
  }
}

template <typename Tr>
Band form_b3(const Tr& tr, const Band& f, const Band& g, const Band& q, double t, int e) {
  const int L = tr.L;
  Band out = Band::Zero(2 * L + 1);
  for_cubic(tr, [&](int k, int k1, int k2, int k3) {
    if (classify_cubic(k1, k2, k3) != CubicClass::nonresonant) return;
    const double r = tr.res3(k, k1, k2, k3);
    if (r == 0.0) throw std::logic_error("B3: vanishing resonance on its index set");
    const Complex coef = n3_coeff(tr, k, k1, k2, k3, e) / (I * double(e) * r);
    out[k + L] += coef * osc(t, e, r) * f[k1 + L] * g[k2 + L] * q[k3 + L];
  });
  return out;
}

// Resonant classes are enumerated directly (O(L^2)); the nonresonant class
// goes through the full cubic loop.
template <typename Tr>
Band cubic_part(const Tr& tr, const Band& V, double t, int e, CubicClass part) {
  const int L = tr.L;
  Band out = Band::Zero(2 * L + 1);
  auto add = [&](int k, int k1, int k2, int k3) {
    if (k1 == 0 || k2 == 0 || k3 == 0 || k2 + k3 == 0) return;
    if (!in_band(tr, k1) || !in_band(tr, k2) || !in_band(tr, k3) || !in_band(tr, k2 + k3)) return;
    if (classify_cubic(k1, k2, k3) != part) return;
    out[k + L] += n3_coeff(tr, k, k1, k2, k3, e) * V[k1 + L] * V[k2 + L] * V[k3 + L];
  };
  switch (part) {
    case CubicClass::strong:
      for (int k = -L; k <= L; ++k)
        if (k != 0) add(k, -k, k, k);
      break;
    case CubicClass::r2:
      for (int k = -L; k <= L; ++k)
        for (int j = -L; j <= L; ++j)
          if (k != 0) add(k, -j, j, k);
      break;
    case CubicClass::r3:
      for (int k = -L; k <= L; ++k)
        for (int j = -L; j <= L; ++j)
          if (k != 0) add(k, -j, k, j);
      break;
    case CubicClass::nonresonant:
      for_cubic(tr, [&](int k, int k1, int k2, int k3) {
        if (classify_cubic(k1, k2, k3) != CubicClass::nonresonant) return;
        const Complex ph = osc(t, e, tr.res3(k, k1, k2, k3));
        out[k + L] += n3_coeff(tr, k, k1, k2, k3, e) * ph * V[k1 + L] * V[k2 + L] * V[k3 + L];
      });
      break;
  }
  return out;
}

template <typename Tr>
Band weak_part(const Tr& tr, const Band& V, double t, int e) {
  return cubic_part(tr, V, t, e, CubicClass::r2) + cubic_part(tr, V, t, e, CubicClass::r3);
}

template <typename Tr>
Band form_b4(const Tr& tr, const Band& V, double t, int e) {
  const Band Vt = form_b1(tr, V, t, e);
  return form_b3(tr, Vt, V, V, t, e) + 2.0 * form_b3(tr, V, V, Vt, t, e);
}

// B3(V,V,V) and B4 = B3(Vt,V,V) + 2 B3(V,V,Vt) in one pass over the index set.
template <typename Tr>
std::array<Band, 2> form_b3_b4(const Tr& tr, const Band& V, double t, int e) {
  const int L = tr.L;
  const Band Vt = form_b1(tr, V, t, e);
  std::array<Band, 2> out{Band::Zero(2 * L + 1), Band::Zero(2 * L + 1)};
  for_cubic(tr, [&](int k, int k1, int k2, int k3) {
    if (classify_cubic(k1, k2, k3) != CubicClass::nonresonant) return;
    const double r = tr.res3(k, k1, k2, k3);
    if (r == 0.0) throw std::logic_error("B3: vanishing resonance on its index set");
    const Complex coef = n3_coeff(tr, k, k1, k2, k3, e) / (I * double(e) * r) * osc(t, e, r);
    const Complex a = V[k1 + L], b = V[k2 + L], c = V[k3 + L];
    out[0][k + L] += coef * a * b * c;
    out[1][k + L] += coef * (Vt[k1 + L] * b * c + 2.0 * a * b * Vt[k3 + L]);
  });
  return out;
}

// Quartic sum with a per-piece multiplier; piece a needs k3+k4 in band,
// piece b needs k1+k2+k4 in band.
template <typename Tr, typename PieceA, typename PieceB>
Band quartic(const Tr& tr, const Band& V, double t, int e, PieceA&& a, PieceB&& b) {
  const int L = tr.L;
  Band out = Band::Zero(2 * L + 1);
  for (int k = -L; k <= L; ++k) {
    if (k == 0) continue;
    for (int k1 = -L; k1 <= L; ++k1) {
      if (k1 == 0) continue;
      for (int k2 = -L; k2 <= L; ++k2) {
        const int m = k1 + k2;
        if (k2 == 0 || m == 0 || !in_band(tr, m)) continue;
        for (int k3 = -L; k3 <= L; ++k3) {
          const int k4 = k - m - k3;
          if (k3 == 0 || k4 == 0 || !in_band(tr, k4)) continue;
          const Complex v4 = V[k1 + L] * V[k2 + L] * V[k3 + L] * V[k4 + L];
          if (v4 == 0.0) continue;
          const double r2 = tr.res2(m, k1, k2);
          Complex acc = 0;
          // piece a: B3(B1, V, V), triple (m, k3, k4)
          if (in_band(tr, k3 + k4) && k3 + k4 != 0 && classify_cubic(m, k3, k4) == CubicClass::nonresonant) {
            const double r3 = tr.res3(k, m, k3, k4);
            acc += a(k, m, k3, k4, r3) * osc(t, e, r3 + r2);
          }
          // piece b: 2 B3(V, V, B1), triple (k3, k4, m)
          if (in_band(tr, k4 + m) && k4 + m != 0 && classify_cubic(k3, k4, m) == CubicClass::nonresonant) {
            const double r3 = tr.res3(k, k3, k4, m);
            acc += b(k, m, k3, k4, r3) * osc(t, e, r3 + r2);
          }
          out[k + L] += (-0.5 * e) * I * acc * v4;
        }
      }
    }
  }
  return out;
}

Band fpu_quartic(const FpuTraits& tr, const Band& V, double t, int e) {
  const double c3 = tr.c * tr.c * tr.c;
  auto a = [&](int k, int m, int k3, int k4, double r3) { return c3 * tr.C(k) * tr.C(m) * tr.C(k3 + k4) / r3; };
  auto b = [&](int k, int m, int k3, int k4, double r3) {
    return c3 * tr.C(k) * tr.C(m + k4) * std::sin(tr.h * m / 2) / (tr.S(k3) * r3);
  };
  return quartic(tr, V, t, e, a, b);
}

Band kdv_quartic(const KdvTraits& tr, const Band& W, double t, int e) {
  const double c3 = tr.c * tr.c * tr.c;
  auto a = [&](int, int, int, int, double r3) { return c3 / r3; };
  auto b = [&](int, int m, int k3, int, double r3) { return c3 * 2.0 * m / (k3 * r3); };
  return quartic(tr, W, t, e, a, b);
}

Band fpu_strong_closed(const FpuTraits& tr, const Band& V, int e) {
  const int L = tr.L;
  Band out = Band::Zero(2 * L + 1);
  for (int k = -L; k <= L; ++k) {
    if (k == 0) continue;
    const double coef = std::cos(tr.h * k / 2) * tr.C(k) / (4.0 / tr.h * tr.S(k));
    out[k + L] = (-2.0 * e * tr.c * tr.c) * I * coef * std::norm(V[k + L]) * V[k + L];
  }
  return out;
}

Band fpu_weak_closed(const FpuTraits& tr, const Band& V, int e) {
  const int L = tr.L;
  Band out = Band::Zero(2 * L + 1);
  const double total = V.squaredNorm() - std::norm(V[L]);
  for (int k = -L; k <= L; ++k) {
    if (k == 0) continue;
    const double rest = total - std::norm(V[k + L]) - std::norm(V[-k + L]);
    out[k + L] = (0.5 * e * tr.h * tr.c * tr.c) * I * std::sin(tr.h * k / 2) * V[k + L] * rest;
  }
  return out;
}

Band kdv_strong_closed(const KdvTraits& tr, const Band& W, int e) {
  const int L = tr.L;
  Band out = Band::Zero(2 * L + 1);
  for (int k = -L; k <= L; ++k) {
    if (k == 0) continue;
    out[k + L] = (-2.0 * e * tr.c * tr.c / k) * I * std::norm(W[k + L]) * W[k + L];
  }
  return out;
}

FpuTraits fpu_traits(const LatticeGrid& g) { return FpuTraits(g.n - 1, g.h); }

void check_same_grid(const Spectrum& a, const Spectrum& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("normal form: grid mismatch");
}

// Regularized identity residual on a sequence of band vectors.
template <typename Tr>
double residual_series(const Tr& tr, const std::vector<Band>& V, const std::vector<double>& times, int e,
                       double lambda) {
  const std::size_t n = V.size();
  if (n < 9) throw std::invalid_argument("residual: trajectory too coarse for quadrature");
  const double tau = (times.back() - times.front()) / double(n - 1);
  for (std::size_t j = 1; j < n; ++j)
    if (std::abs(times[j] - times[j - 1] - tau) > 1e-9 * std::max(1.0, tau))
      throw std::invalid_argument("residual: non-uniform sampling");
  std::vector<Band> b2(n), b3(n), res(n), b4(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = times[j];
    b2[j] = form_b2(tr, V[j], V[j], t, e);
    auto [b3j, b4j] = form_b3_b4(tr, V[j], t, e);
    b3[j] = std::move(b3j);
    b4[j] = std::move(b4j);
    res[j] = cubic_part(tr, V[j], t, e, CubicClass::strong) + weak_part(tr, V[j], t, e);
  }
  Band int_res = Band::Zero(V[0].size()), int_b4 = Band::Zero(V[0].size());
  double worst = 0;
  for (std::size_t j = 2; j < n; j += 2) {
    int_res += tau / 3 * (res[j - 2] + 4.0 * res[j - 1] + res[j]);
    int_b4 += tau / 3 * (b4[j - 2] + 4.0 * b4[j - 1] + b4[j]);
    const Band rhs = V[0] - 0.25 * lambda * (b2[j] - b2[0]) +
                     0.5 * lambda * lambda * (int_res + (b3[j] - b3[0]) - lambda * int_b4);
    worst = std::max(worst, (V[j] - rhs).norm());
  }
  return worst;
}

}  // namespace

double phi2(int k, int k1, int k2, double h) {
  return -8.0 / (h * h * h) * std::sin(h * k1 / 4) * std::sin(h * k2 / 4) * std::sin(h * k / 4);
}

double phi3(int, int k1, int k2, int k3, double h) {
  return -8.0 / (h * h * h) * std::sin(h * (k1 + k2) / 4) * std::sin(h * (k2 + k3) / 4) *
         std::sin(h * (k3 + k1) / 4);
}

double phi4(int k, int k1, int k2, int k3, int k4, double h) {
  return phi3(k, k1 + k2, k3, k4, h) + phi2(k1 + k2, k1, k2, h);
}

double psi2(int k, int k1, int k2) { return -double(k) * k1 * k2 / 8.0; }

double psi3(int, int k1, int k2, int k3) { return -double(k1 + k2) * (k2 + k3) * (k1 + k3) / 8.0; }

double psi4(int k, int k1, int k2, int k3, int k4) { return psi3(k, k1 + k2, k3, k4) + psi2(k1 + k2, k1, k2); }

double resonance(const ResonanceQuery& q) {
  const auto& f = q.frequencies;
  if (q.order < 2 || q.order > 4 || int(f.size()) != q.order + 1)
    throw std::invalid_argument("resonance: order and frequency count disagree");
  int sum = 0;
  for (std::size_t i = 1; i < f.size(); ++i) sum += f[i];
  if (sum != f[0]) throw std::invalid_argument("resonance: frequencies do not sum to k");
  if (q.system == System::fpu) {
    if (!(q.h > 0)) throw std::invalid_argument("resonance: fpu needs h > 0");
    if (q.order == 2) return phi2(f[0], f[1], f[2], q.h);
    if (q.order == 3) return phi3(f[0], f[1], f[2], f[3], q.h);
    return phi4(f[0], f[1], f[2], f[3], f[4], q.h);
  }
  if (q.order == 2) return psi2(f[0], f[1], f[2]);
  if (q.order == 3) return psi3(f[0], f[1], f[2], f[3]);
  return psi4(f[0], f[1], f[2], f[3], f[4]);
}

CubicClass classify_cubic(int k1, int k2, int k3) {
  const bool a = k1 + k2 == 0;
  const bool b = k1 + k3 == 0;
  if (a && b) return CubicClass::strong;
  if (a) return CubicClass::r2;
  if (b) return CubicClass::r3;
  return CubicClass::nonresonant;
}

Spectrum fpu_form(FormLevel level, const Spectrum& V, double t, Sign sign) {
  const FpuTraits tr = fpu_traits(V.grid);
  const Band v = band_of(V);
  const int e = eps(sign);
  switch (level) {
    case FormLevel::B1: return from_band(V.grid, form_b1(tr, v, t, e));
    case FormLevel::B2: return from_band(V.grid, form_b2(tr, v, v, t, e));
    case FormLevel::B3: return from_band(V.grid, form_b3(tr, v, v, v, t, e));
    case FormLevel::B4: return from_band(V.grid, form_b4(tr, v, t, e));
    case FormLevel::R_strong: return from_band(V.grid, fpu_strong_closed(tr, v, e));
    case FormLevel::R_weak: return from_band(V.grid, fpu_weak_closed(tr, v, e));
  }
  throw std::invalid_argument("fpu_form: unknown level");
}

ContinuumSpectrum kdv_form(FormLevel level, const ContinuumSpectrum& W, double t, Sign sign) {
  const KdvTraits tr(W.cutoff);
  const int e = eps(sign);
  const int K = W.cutoff;
  switch (level) {
    case FormLevel::B1: return {K, form_b1(tr, W.coeffs, t, e)};
    case FormLevel::B2: return {K, form_b2(tr, W.coeffs, W.coeffs, t, e)};
    case FormLevel::B3: return {K, form_b3(tr, W.coeffs, W.coeffs, W.coeffs, t, e)};
    case FormLevel::B4: return {K, form_b4(tr, W.coeffs, t, e)};
    case FormLevel::R_strong: return {K, kdv_strong_closed(tr, W.coeffs, e)};
    case FormLevel::R_weak: throw std::invalid_argument("kdv_form: no weak resonant level for KdV");
  }
  throw std::invalid_argument("kdv_form: unknown level");
}

Spectrum fpu_bilinear(const Spectrum& f, const Spectrum& g, double t, Sign sign) {
  check_same_grid(f, g);
  return from_band(f.grid, form_b2(fpu_traits(f.grid), band_of(f), band_of(g), t, eps(sign)));
}

Spectrum fpu_trilinear(const Spectrum& f, const Spectrum& g, const Spectrum& q, double t, Sign sign) {
  check_same_grid(f, g);
  check_same_grid(f, q);
  return from_band(f.grid, form_b3(fpu_traits(f.grid), band_of(f), band_of(g), band_of(q), t, eps(sign)));
}

ContinuumSpectrum kdv_bilinear(const ContinuumSpectrum& f, const ContinuumSpectrum& g, double t, Sign sign) {
  if (f.cutoff != g.cutoff) throw std::invalid_argument("kdv_bilinear: cutoff mismatch");
  return {f.cutoff, form_b2(KdvTraits(f.cutoff), f.coeffs, g.coeffs, t, eps(sign))};
}

ContinuumSpectrum kdv_trilinear(const ContinuumSpectrum& f, const ContinuumSpectrum& g, const ContinuumSpectrum& q,
                                double t, Sign sign) {
  if (f.cutoff != g.cutoff || f.cutoff != q.cutoff) throw std::invalid_argument("kdv_trilinear: cutoff mismatch");
  return {f.cutoff, form_b3(KdvTraits(f.cutoff), f.coeffs, g.coeffs, q.coeffs, t, eps(sign))};
}

Spectrum fpu_cubic_part(const Spectrum& V, double t, Sign sign, CubicClass part) {
  return from_band(V.grid, cubic_part(fpu_traits(V.grid), band_of(V), t, eps(sign), part));
}

ContinuumSpectrum kdv_cubic_part(const ContinuumSpectrum& W, double t, Sign sign, CubicClass part) {
  return {W.cutoff, cubic_part(KdvTraits(W.cutoff), W.coeffs, t, eps(sign), part)};
}

Spectrum fpu_weak_assembled(const Spectrum& V, double t, Sign sign) {
  return from_band(V.grid, weak_part(fpu_traits(V.grid), band_of(V), t, eps(sign)));
}

ContinuumSpectrum kdv_weak_assembled(const ContinuumSpectrum& W, double t, Sign sign) {
  return {W.cutoff, weak_part(KdvTraits(W.cutoff), W.coeffs, t, eps(sign))};
}

Spectrum fpu_quartic_explicit(const Spectrum& V, double t, Sign sign) {
  return from_band(V.grid, fpu_quartic(fpu_traits(V.grid), band_of(V), t, eps(sign)));
}

ContinuumSpectrum kdv_quartic_explicit(const ContinuumSpectrum& W, double t, Sign sign) {
  return {W.cutoff, kdv_quartic(KdvTraits(W.cutoff), W.coeffs, t, eps(sign))};
}

double residual_regularized(const Trajectory<ProfilePair>& traj, double nonlinearity) {
  if (traj.states.empty()) throw std::invalid_argument("residual: empty trajectory");
  if (traj.states.front().kind != ProfileKind::decoupled)
    throw std::invalid_argument("residual: the regularized identity holds for decoupled profiles");
  const FpuTraits tr = fpu_traits(traj.states.front().plus.grid);
  double worst = 0;
  for (Sign s : {Sign::plus, Sign::minus}) {
    std::vector<Band> V;
    for (const auto& p : traj.states) V.push_back(band_of(s == Sign::plus ? p.plus : p.minus));
    worst = std::max(worst, residual_series(tr, V, traj.times, eps(s), nonlinearity));
  }
  return worst;
}

double residual_regularized(const Trajectory<KdvState>& traj, double nonlinearity) {
  if (traj.states.empty()) throw std::invalid_argument("residual: empty trajectory");
  const KdvTraits tr(traj.states.front().plus.cutoff);
  double worst = 0;
  for (Sign s : {Sign::plus, Sign::minus}) {
    std::vector<Band> W;
    for (const auto& p : traj.states) W.push_back(s == Sign::plus ? p.plus.coeffs : p.minus.coeffs);
    worst = std::max(worst, residual_series(tr, W, traj.times, eps(s), nonlinearity));
  }
  return worst;
}

}  // namespace fpukdv
