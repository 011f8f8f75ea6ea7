#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpukdv/kdv_solver.hpp"
#include "fpukdv/limit_harness.hpp"
#include "fpukdv/normal_form.hpp"

using namespace fpukdv;

namespace {

const double kPi = std::numbers::pi;

// coefficients of a sin(x) + b cos(2x)
ContinuumSpectrum smooth_datum(int K, double a, double b) {
  ContinuumSpectrum F(K);
  const double r = std::sqrt(2 * kPi);
  F(1) = Complex(0, -a * r / 2);
  F(-1) = Complex(0, a * r / 2);
  F(2) = F(-2) = b * r / 2;
  return F;
}

KdvState smooth_state(int K) { return {smooth_datum(K, 1.0, 0.3), smooth_datum(K, 0.5, -0.4), 0.0}; }

double max_abs(const Eigen::VectorXcd& v) { return v.cwiseAbs().maxCoeff(); }

double total_l2(const KdvState& s) { return std::sqrt(s.plus.coeffs.squaredNorm() + s.minus.coeffs.squaredNorm()); }

}  // namespace

TEST_CASE("airy propagator") {
  const ContinuumSpectrum F = smooth_datum(16, 1.0, 0.0);
  CHECK(max_abs(airy_apply(F, 0.0, Sign::plus).coeffs - F.coeffs) == 0.0);
  const double t = 0.9;
  const ContinuumSpectrum G = airy_apply(F, t, Sign::plus);
  for (double x : {-2.0, 0.1, 1.7}) CHECK(evaluate_series(G, x) == doctest::Approx(std::sin(x + t / 24)).epsilon(1e-13));
  const ContinuumSpectrum H = smooth_datum(16, 0.4, 1.1);
  for (Sign s : {Sign::plus, Sign::minus}) {
    CHECK(l2_norm(airy_apply(H, 2.3, s)) == doctest::Approx(l2_norm(H)).epsilon(1e-14));
    CHECK(max_abs(airy_apply(airy_apply(H, 0.4, s), 0.5, s).coeffs - airy_apply(H, 0.9, s).coeffs) < 1e-13);
  }
}

TEST_CASE("rhs_kdv") {
  const KdvState zero{ContinuumSpectrum(8), ContinuumSpectrum(8), 0.2};
  CHECK(rhs_kdv(zero).plus.coeffs.isZero(0));
  KdvState s = smooth_state(24);
  s.t = 0.33;
  const KdvState d = rhs_kdv(s);
  CHECK(d.plus(0) == Complex(0));
  CHECK(d.minus(0) == Complex(0));
  CHECK(max_abs(d.plus.coeffs - kdv_form(FormLevel::B1, s.plus, s.t, Sign::plus).coeffs) < 1e-12);
  CHECK(max_abs(d.minus.coeffs - kdv_form(FormLevel::B1, s.minus, s.t, Sign::minus).coeffs) < 1e-12);
}

TEST_CASE("KdV invariants") {
  const KdvState s0 = smooth_state(256);
  SolverOptions opt;
  opt.record_stride = 50;
  const auto traj = solve_kdv(s0, 0.5, 1e-3, opt);
  const double l0 = total_l2(s0);
  double h1max = 0;
  for (const auto& s : traj.states) {
    CHECK(s.plus(0) == Complex(0));
    CHECK(s.minus(0) == Complex(0));
    CHECK(std::abs(total_l2(s) - l0) <= 1e-8);
    h1max = std::max(h1max, hs_norm(s.plus, 1.0));
  }
  CHECK(h1max < 10 * hs_norm(s0.plus, 1.0));
}

TEST_CASE("KdV solver is fourth order") {
  const KdvState s0 = smooth_state(64);
  SolverOptions opt;
  opt.record_stride = 1 << 20;
  const double T = 0.5;
  const auto ref = solve_kdv(s0, T, 2.5e-3 / 8, opt).states.back();
  std::vector<double> err;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const auto end = solve_kdv(s0, T, dt, opt).states.back();
    err.push_back((end.plus.coeffs - ref.plus.coeffs).norm() + (end.minus.coeffs - ref.minus.coeffs).norm());
  }
  for (int i = 0; i + 1 < 3; ++i) {
    const double order = std::log2(err[i] / err[i + 1]);
    MESSAGE("KdV observed order " << order);
    CHECK(order > 3.8);
    CHECK(order < 4.2);
  }
}

TEST_CASE("linear KdV flow keeps profiles fixed") {
  const KdvState s0 = smooth_state(32);
  SolverOptions opt;
  opt.nonlinearity = 0.0;
  const auto traj = solve_kdv(s0, 1.0, 0.05, opt);
  CHECK(max_abs(traj.states.back().plus.coeffs - s0.plus.coeffs) == 0.0);
}

TEST_CASE("lattice and Airy phases are close") {
  for (int n = 1; n <= 64; ++n) {
    const double h = kPi / n;
    for (int k = -n; k <= n; ++k)
      for (double t : {0.05, 0.3, 1.0}) {
        const double gap = std::abs(std::polar(1.0, t * s_h_phase(k, h)) - std::polar(1.0, t * double(k) * k * k / 24));
        CHECK(gap <= t * h * h * std::pow(std::abs(k), 5) / 1920 + 1e-14);
      }
  }
}

TEST_CASE("KdV data from lattice profiles") {
  const LatticeGrid g(16);
  const ProfilePair p = split_initial(Field::sample(g, [](double x) { return std::sin(x); }), Field(g));
  const KdvState s = kdv_initial_from(p, 64);
  CHECK(s.plus.cutoff == 64);
  CHECK(s.plus(0) == Complex(0));
  CHECK(std::abs(s.plus(1) - p.plus(1) * interpolation_multiplier(1, g.h)) < 1e-15);
  CHECK(std::abs(s.plus(33) - p.plus(1) * interpolation_multiplier(33, g.h)) < 1e-15);
  CHECK_THROWS(solve_kdv({ContinuumSpectrum(4), ContinuumSpectrum(5), 0.0}, 1.0, 0.1));
}
