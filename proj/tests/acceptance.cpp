#include "fpukdv/limit_harness.hpp"
#include "fpukdv/normal_form.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace fpukdv;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int failures = 0;

void criterion(const std::string& name, double budget_sec, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (sec > budget_sec) {
    o.passed = false;
    o.detail += "; over time budget";
  }
  if (!o.passed) ++failures;
  std::printf("%s %s (%.1f s) %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), sec, o.detail.c_str());
  std::fflush(stdout);
}

Outcome all_passed(const std::vector<CheckResult>& checks) {
  Outcome o{true, std::to_string(checks.size()) + " checks"};
  for (const auto& c : checks)
    if (!c.passed) {
      o.passed = false;
      o.detail += "; failed " + c.name + " (" + c.detail + ")";
    }
  return o;
}

double pair_diff(const ProfilePair& a, const ProfilePair& b) {
  return (a.plus.coeffs - b.plus.coeffs).norm() + (a.minus.coeffs - b.minus.coeffs).norm();
}

double pair_diff(const KdvState& a, const KdvState& b) {
  return (a.plus.coeffs - b.plus.coeffs).norm() + (a.minus.coeffs - b.minus.coeffs).norm();
}

template <typename State, typename Solver>
std::vector<double> richardson_orders(const State& s0, double T, std::vector<double> dts, Solver solver) {
  SolverOptions opt;
  opt.record_stride = 1 << 30;
  const State ref = solver(s0, T, dts.back() / 8, opt).states.back();
  std::vector<double> err;
  for (double dt : dts) err.push_back(pair_diff(solver(s0, T, dt, opt).states.back(), ref));
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < err.size(); ++i) orders.push_back(std::log2(err[i] / err[i + 1]));
  return orders;
}

// coefficients of a sin(x) + b cos(2x) with cutoff K
ContinuumSpectrum trig_datum(int K, double a, double b) {
  ContinuumSpectrum F(K);
  const double r = std::sqrt(2 * std::numbers::pi);
  F(1) = Complex(0, -a * r / 2);
  F(-1) = Complex(0, a * r / 2);
  F(2) = F(-2) = b * r / 2;
  return F;
}

ProfilePair sine_pair(int n, ProfileKind kind) {
  const LatticeGrid g(n);
  return split_initial(Field::sample(g, [](double x) { return std::sin(x); }),
                       Field::sample(g, [](double x) { return 0.5 * std::cos(2 * x); }), kind);
}

}  // namespace

int main() {
  criterion("identity suite", 30, [] { return all_passed(run_identities(16, 12, 0)); });

  criterion("Taylor bounds", 5, [] { return all_passed(run_taylor_bounds(256)); });

  criterion("dual-path dynamics oracle", 30, [] {
    const LatticeGrid g(16);
    const WaveState w = make_initial_data(g, 1.0, DataKind::random_hs, 1);
    const double dt = 1e-4, T = 0.2;
    SolverOptions opt;
    opt.record_stride = 100;
    const auto wave = solve_wave_direct(w, T, dt, opt);
    const auto prof = solve(split_initial(w.r, w.r_t), T, dt, opt);
    const double tol = std::max(1e-8, 10 * std::pow(dt, 4));
    const double H0 = hamiltonian(w);
    double diff = 0, drift = 0;
    bool mean_zero = true;
    for (std::size_t i = 0; i < wave.states.size(); ++i) {
      const WaveState r = reconstruct_r(prof.states[i]);
      diff = std::max(diff, std::sqrt(g.h) * (r.r.values - wave.states[i].r.values).norm());
      drift = std::max(drift, std::abs(hamiltonian(wave.states[i]) - H0) / std::abs(H0));
      drift = std::max(drift, std::abs(hamiltonian(r) - H0) / std::abs(H0));
      mean_zero = mean_zero && prof.states[i].plus(0) == Complex(0) && prof.states[i].minus(0) == Complex(0);
    }
    return Outcome{diff <= tol && drift <= 1e-6 && mean_zero,
                   "diff " + num(diff) + " drift " + num(drift) + (mean_zero ? " mean 0" : " mean nonzero")};
  });

  criterion("normal-form residuals", 60, [] {
    const double dt = 1e-3, T = 0.25;
    const double tol = std::max(1e-6, 50 * std::pow(dt, 4));
    const ProfilePair p = sine_pair(16, ProfileKind::decoupled);
    const double r_fpu = residual_regularized(solve(p, T, dt));
    SolverOptions opt;
    opt.record_stride = 5;
    const double r_kdv = residual_regularized(solve_kdv(kdv_initial_from(p, 64), T, dt, opt));
    return Outcome{r_fpu <= tol && r_kdv <= tol, "lattice " + num(r_fpu) + " KdV " + num(r_kdv) + " tol " + num(tol)};
  });

  criterion("KdV invariants and fourth-order solvers", 60, [] {
    const ProfilePair p = sine_pair(64, ProfileKind::decoupled);
    const KdvState s0 = kdv_initial_from(p, 256);
    SolverOptions opt;
    opt.record_stride = 50;
    const auto traj = solve_kdv(s0, 0.5, 1e-3, opt);
    auto l2 = [](const KdvState& s) { return std::sqrt(s.plus.coeffs.squaredNorm() + s.minus.coeffs.squaredNorm()); };
    double drift = 0;
    bool mean_zero = true;
    for (const auto& s : traj.states) {
      drift = std::max(drift, std::abs(l2(s) - l2(s0)));
      mean_zero = mean_zero && s.plus(0) == Complex(0) && s.minus(0) == Complex(0);
    }
    const auto o_fpu = richardson_orders(sine_pair(16, ProfileKind::coupled), 0.2, {1e-3, 5e-4, 2.5e-4},
                                         [](auto&&... a) { return solve(a...); });
    const auto o_kdv = richardson_orders(KdvState{trig_datum(64, 1.0, 0.3), trig_datum(64, 0.5, -0.4), 0.0}, 0.5,
                                         {1e-2, 5e-3, 2.5e-3}, [](auto&&... a) { return solve_kdv(a...); });
    bool ok = drift <= 1e-8 && mean_zero;
    std::string detail = "L2 drift " + num(drift) + (mean_zero ? " mean 0" : " mean nonzero") + "; orders";
    for (double o : o_fpu) {
      ok = ok && o >= 3.8 && o <= 4.2;
      detail += " " + num(o);
    }
    detail += " |";
    for (double o : o_kdv) {
      ok = ok && o >= 3.8 && o <= 4.2;
      detail += " " + num(o);
    }
    return Outcome{ok, detail};
  });

  criterion("convergence rates", 300, [] {
    RunConfig cfg;
    cfg.n_list = {16, 32, 64, 128};
    cfg.t_final = 0.25;
    cfg.record_runtime = false;
    const ConvergenceReport rep = make_report("main-theorem", cfg, run_main_theorem(cfg));
    const double sd = rep.slopes.at("E_decouple").slope;
    const double sk = rep.slopes.at("E_kdv").slope;
    const double sm = rep.slopes.at("E_main").slope;
    return Outcome{sd >= 0.9 && sk >= 0.35 && sm >= 0.35,
                   "slopes decouple " + num(sd) + " kdv " + num(sk) + " main " + num(sm)};
  });

  criterion("Strichartz probe", 120, [] {
    const StrichartzStats st = strichartz_probe({16, 256}, 50, 0.5, 0);
    return Outcome{st.max_ratio[1] <= 2 * st.max_ratio[0],
                   "ratio(256) " + num(st.max_ratio[1]) + " ratio(16) " + num(st.max_ratio[0])};
  });

  criterion("determinism", 60, [] {
    RunConfig cfg;
    cfg.n_list = {8, 16, 32};
    cfg.t_final = 0.1;
    cfg.data = DataKind::random_hs;
    cfg.seed = 42;
    cfg.record_runtime = false;
    const auto render = [&] {
      const ConvergenceReport r = make_report("main-theorem", cfg, run_main_theorem(cfg));
      return std::make_pair(render_csv(r), render_json(r));
    };
    const auto a = render(), b = render();
    return Outcome{a == b, a == b ? "csv and json identical" : "reports differ"};
  });

  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
