#include "fpukdv/limit_harness.hpp"
#include "fpukdv/normal_form.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace fpukdv {

namespace {

constexpr double kTol = 1e-12;
const double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng, double a, double b) { return a + (b - a) * double(rng() >> 11) * 0x1.0p-53; }

Field random_field(const LatticeGrid& g, std::mt19937_64& rng) {
  Field f(g);
  for (int j = 0; j < g.size(); ++j) f.values[j] = uniform(rng, -1, 1);
  return f;
}

// random spectrum supported on 1 <= |k| <= cap, Hermitian
Spectrum random_band_spectrum(const LatticeGrid& g, int cap, std::mt19937_64& rng) {
  Spectrum F(g);
  for (int k = 1; k <= cap; ++k) {
    F(k) = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
    F(-k) = std::conj(F(k));
  }
  return F;
}

CheckResult make(const std::string& name, double worst, double tol) {
  std::ostringstream os;
  os << "max defect " << worst << " (tol " << tol << ")";
  return {name, worst <= tol, os.str()};
}

double rel(double a, double b, double scale) { return std::abs(a - b) / std::max(1.0, scale); }

}  // namespace

std::vector<CheckResult> run_identities(int n_max, int tiling_max, std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);

  {  // DFT round trip and Plancherel
    double rt = 0, pl = 0;
    for (int n = 1; n <= n_max; ++n) {
      const LatticeGrid g(n);
      for (int trial = 0; trial < 4; ++trial) {
        const Field f = random_field(g, rng), q = random_field(g, rng);
        const Field back = inverse_dft(forward_dft(f));
        rt = std::max(rt, (back.values - f.values).cwiseAbs().maxCoeff());
        const double lhs = g.h * f.values.dot(q.values);
        const Complex rhs = forward_dft(f).coeffs.dot(forward_dft(q).coeffs);  // conj(F) . G
        pl = std::max(pl, std::abs(lhs - rhs.real()) / std::max(1.0, std::abs(lhs)));
      }
    }
    out.push_back(make("dft_round_trip", rt, kTol));
    out.push_back(make("plancherel", pl, kTol));
  }

  {  // spectral multipliers against difference stencils
    double lap = 0, fd = 0, absn = 0;
    for (int n = 1; n <= n_max; ++n) {
      const LatticeGrid g(n);
      const Field f = random_field(g, rng);
      const Spectrum F = forward_dft(f);
      const int m = g.size();
      const Field L = inverse_dft(apply_symbol(F, {Symbol::laplace_h}));
      const double scale = 1.0 / (g.h * g.h);
      for (int j = 0; j < m; ++j) {
        const double st = (f.values[(j + 1) % m] + f.values[(j + m - 1) % m] - 2 * f.values[j]) / (g.h * g.h);
        lap = std::max(lap, std::abs(st - L.values[j]) / scale);
      }
      // forward difference = e^{(h/2) d_h} nabla_h; the half shift is not
      // Hermitian-preserving, so synthesize directly on Nyquist-free data
      const Spectrum P = project_nyquist(F);
      const Field Dp = forward_difference(inverse_dft(P));
      Spectrum Gp = apply_symbol(P, {Symbol::nabla_h});
      for (int k = -n; k < n; ++k) Gp(k) *= std::polar(1.0, g.h * k / 2);
      for (int j = 0; j < m; ++j) {
        Complex acc = 0;
        for (int k = -n; k < n; ++k) acc += Gp(k) * std::polar(1.0, g.x(j) * k);
        fd = std::max(fd, std::abs(acc.real() * inv_sqrt_2pi<double>() - Dp.values[j]) * g.h);
      }
      for (int k = -n; k < n; ++k) {
        const double a = symbol_value<double>({Symbol::abs_nabla_h}, k, g.h).real();
        const double l = -symbol_value<double>({Symbol::laplace_h}, k, g.h).real();
        absn = std::max(absn, std::abs(a - std::sqrt(l)) / std::max(1.0, a));
      }
    }
    out.push_back(make("laplace_symbol_vs_stencil", lap, kTol));
    out.push_back(make("forward_difference_symbol", fd, kTol));
    out.push_back(make("abs_nabla_is_sqrt_laplace", absn, kTol));
  }

  {  // symmetry and telescoping of resonance functions
    double sym = 0, tel = 0, ksym = 0, ktel = 0;
    for (int n = 2; n <= n_max; ++n) {
      const double h = kPi / n;
      for (int k1 = -n; k1 <= n; ++k1)
        for (int k2 = -n; k2 <= n; ++k2) {
          const int k = k1 + k2;
          const double a = phi2(k, k1, k2, h), b = phi2(k, k2, k1, h);
          sym = std::max(sym, rel(a, b, std::abs(a)));
          ksym = std::max(ksym, std::abs(psi2(k, k1, k2) - psi2(k, k2, k1)));
          for (int k3 = -n; k3 <= n; ++k3) {
            const int kk = k1 + k2 + k3;
            const double p = phi3(kk, k1, k2, k3, h);
            const double perms[] = {phi3(kk, k1, k3, k2, h), phi3(kk, k2, k1, k3, h), phi3(kk, k2, k3, k1, h),
                                    phi3(kk, k3, k1, k2, h), phi3(kk, k3, k2, k1, h)};
            for (double q : perms) sym = std::max(sym, rel(p, q, std::abs(p)));
            const double t1 = phi2(kk, k1, k2 + k3, h), t2 = phi2(k2 + k3, k2, k3, h);
            tel = std::max(tel, rel(p, t1 + t2, std::abs(t1) + std::abs(t2)));
            const double q3 = psi3(kk, k1, k2, k3);
            ksym = std::max({ksym, std::abs(q3 - psi3(kk, k3, k1, k2)), std::abs(q3 - psi3(kk, k2, k1, k3))});
            ktel = std::max(ktel, std::abs(q3 - psi2(kk, k1, k2 + k3) - psi2(k2 + k3, k2, k3)));
          }
        }
    }
    out.push_back(make("phi_symmetry", sym, kTol));
    out.push_back(make("phi3_telescoping", tel, kTol));
    out.push_back(make("psi_symmetry", ksym, kTol));
    out.push_back(make("psi3_telescoping", ktel, kTol));
  }

  {  // the cubic index set splits into strong, two weak and the nonresonant part
    long bad = 0, total = 0;
    double zero_defect = 0;
    for (int n = 2; n <= tiling_max; ++n) {
      const double h = kPi / n;
      const int L = n - 1;
      for (int k1 = -L; k1 <= L; ++k1)
        for (int k2 = -L; k2 <= L; ++k2)
          for (int k3 = -L; k3 <= L; ++k3) {
            if (k1 == 0 || k2 == 0 || k3 == 0 || k2 + k3 == 0) continue;
            const int k = k1 + k2 + k3;
            ++total;
            const bool r1 = k1 == -k && k2 == k && k3 == k;
            const bool r2 = !r1 && k3 == k && k1 + k2 == 0;
            const bool r3 = !r1 && k2 == k && k1 + k3 == 0;
            const double p = phi3(k, k1, k2, k3, h);
            const double scale = 8.0 / (h * h * h);
            const bool a = std::abs(p) > 1e-9 * scale;
            const int hits = int(r1) + int(r2) + int(r3) + int(a);
            const CubicClass c = classify_cubic(k1, k2, k3);
            const bool agree = (r1 && c == CubicClass::strong) || (r2 && c == CubicClass::r2) ||
                               (r3 && c == CubicClass::r3) || (a && c == CubicClass::nonresonant);
            if (hits != 1 || !agree) ++bad;
            if (!a) zero_defect = std::max(zero_defect, std::abs(p) / scale);
          }
    }
    std::ostringstream os;
    os << bad << " of " << total << " triples misplaced; max |phi3| on resonant sets " << zero_defect;
    out.push_back({"resonant_set_tiling", bad == 0 && zero_defect <= kTol, os.str()});
  }

  {  // resonant parts against their closed forms; KdV weak part cancels
    double weak = 0, strong = 0, kweak = 0, kstrong = 0, split = 0;
    for (int n = 2; n <= tiling_max; ++n) {
      const LatticeGrid g(n);
      const int cap = (n - 1) / 2;
      if (cap < 1) continue;
      for (Sign s : {Sign::plus, Sign::minus}) {
        const Spectrum V = random_band_spectrum(g, cap, rng);
        const double t = uniform(rng, 0, 1);
        const double scale = std::max(1.0, std::pow(V.coeffs.cwiseAbs().maxCoeff(), 3));
        weak = std::max(weak, (fpu_weak_assembled(V, t, s).coeffs - fpu_form(FormLevel::R_weak, V, t, s).coeffs)
                                      .cwiseAbs()
                                      .maxCoeff() /
                                  scale);
        strong = std::max(strong, (fpu_cubic_part(V, t, s, CubicClass::strong).coeffs -
                                   fpu_form(FormLevel::R_strong, V, t, s).coeffs)
                                          .cwiseAbs()
                                          .maxCoeff() /
                                      scale);
        // B2(V, B1 V) is the sum of its four parts
        const Spectrum full = fpu_bilinear(V, fpu_form(FormLevel::B1, V, t, s), t, s);
        Spectrum parts(g);
        for (CubicClass c : {CubicClass::strong, CubicClass::r2, CubicClass::r3, CubicClass::nonresonant})
          parts.coeffs += fpu_cubic_part(V, t, s, c).coeffs;
        split = std::max(split, (full.coeffs - parts.coeffs).cwiseAbs().maxCoeff() / scale);

        ContinuumSpectrum W(n - 1);
        W.coeffs = band_of(V);
        kweak = std::max(kweak, kdv_weak_assembled(W, t, s).coeffs.cwiseAbs().maxCoeff() / scale);
        kstrong = std::max(kstrong, (kdv_cubic_part(W, t, s, CubicClass::strong).coeffs -
                                     kdv_form(FormLevel::R_strong, W, t, s).coeffs)
                                        .cwiseAbs()
                                        .maxCoeff() /
                                        scale);
      }
    }
    out.push_back(make("fpu_weak_resonance_collapse", weak, kTol));
    out.push_back(make("fpu_strong_resonance_closed_form", strong, kTol));
    out.push_back(make("fpu_cubic_split", split, kTol));
    out.push_back(make("kdv_weak_resonance_cancels", kweak, kTol));
    out.push_back(make("kdv_strong_resonance_closed_form", kstrong, kTol));
  }

  {  // lower bound for 1 - cos x - alpha, 100 x 100 grid
    long bad = 0;
    for (int i = 0; i < 100; ++i)
      for (int j = 0; j < 100; ++j) {
        const double x = -kPi / 2 + kPi * i / 99.0;
        const double al = -2.0 + 4.0 * j / 99.0;
        const double lhs = std::abs(1 - std::cos(x) - al);
        double rhs;
        if (al <= 0)
          rhs = x * x / 4;
        else if (al < 1) {
          const double b = std::acos(1 - al);
          rhs = std::abs(x - b) * std::abs(x + b) / 4;
        } else
          rhs = std::abs(x - kPi / 2) * std::abs(x + kPi / 2) / 4;
        if (lhs < rhs * (1 - kTol) - kTol) ++bad;
      }
    out.push_back({"cos_inequality", bad == 0, std::to_string(bad) + " violations on 10000 points"});
  }

  {  // |phi2| >= |k k1 k2| / pi^3 on the band
    double worst = 1e300;
    const int top = std::max(n_max, 32);
    for (int n = 2; n <= top; ++n) {
      const double h = kPi / n;
      for (int k1 = -(n - 1); k1 < n; ++k1)
        for (int k2 = -(n - 1); k2 < n; ++k2) {
          const int k = k1 + k2;
          if (k1 == 0 || k2 == 0 || k == 0 || std::abs(k) >= n) continue;
          const double bound = std::abs(double(k) * k1 * k2) / (kPi * kPi * kPi);
          worst = std::min(worst, std::abs(phi2(k, k1, k2, h)) / bound);
        }
    }
    std::ostringstream os;
    os << "min |phi2| / bound = " << worst;
    out.push_back({"phi2_lower_bound", worst >= 1.0 - kTol, os.str()});
  }
  return out;
}

std::vector<CheckResult> run_taylor_bounds(int n_max) {
  double phase = 0, mult = 0, prop = 0;
  for (int n = 1; n <= n_max; ++n) {
    const double h = kPi / n;
    for (int k = -n; k <= n; ++k) {
      const double ak = std::abs(double(k));
      const double gap = std::abs(s_h_phase(k, h) - ak * ak * ak / 24 * (k < 0 ? -1 : 1));
      const double b = h * h * std::pow(ak, 5) / 1920;
      phase = std::max(phase, gap - b - kTol * std::max(1.0, b));
      const double m = std::abs(interpolation_multiplier(k, h) - 1);
      mult = std::max(mult, m - (h * ak) * (h * ak) - kTol);
      if (n <= 64) {
        for (double t : {0.1, 0.5, 1.0}) {
          const double d = std::abs(std::polar(1.0, t * s_h_phase(k, h)) - std::polar(1.0, t * k * double(k) * k / 24));
          prop = std::max(prop, d - t * b - kTol);
        }
      }
    }
  }
  return {{"s_h_taylor_bound", phase <= 0, "max excess " + std::to_string(phase)},
          {"interpolation_multiplier_bound", mult <= 0, "max excess " + std::to_string(mult)},
          {"propagator_phase_bound", prop <= 0, "max excess " + std::to_string(prop)}};
}

}  // namespace fpukdv
