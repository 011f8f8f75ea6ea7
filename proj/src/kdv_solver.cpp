#include "fpukdv/kdv_solver.hpp"

#include <array>
#include <stdexcept>

namespace fpukdv {

namespace {

using Band = Eigen::VectorXcd;
using Pair = std::array<Band, 2>;

Pair axpy(const Pair& y, double a, const Pair& k) { return {y[0] + a * k[0], y[1] + a * k[1]}; }

double airy_phase(int k) { return double(k) * k * k / 24.0; }

Pair kdv_rhs(int K, double t, const Pair& W, double nl) {
  Band ep(2 * K + 1);
  for (int k = -K; k <= K; ++k) ep[k + K] = std::polar(1.0, t * airy_phase(k));
  Pair out;
  for (int i = 0; i < 2; ++i) {
    const int e = i == 0 ? 1 : -1;
    const Band w = i == 0 ? Band(ep.cwiseProduct(W[0])) : Band(ep.conjugate().cwiseProduct(W[1]));
    const Band sq = truncated_square(w, K);
    Band d(2 * K + 1);
    for (int k = -K; k <= K; ++k) {
      const Complex back = e > 0 ? std::conj(ep[k + K]) : ep[k + K];
      d[k + K] = (-0.25 * e * nl) * Complex(0.0, k) * sq[k + K] * back;
    }
    d[K] = 0.0;
    out[i] = d;
  }
  return out;
}

}  // namespace

ContinuumSpectrum airy_apply(const ContinuumSpectrum& F, double t, Sign sign) {
  ContinuumSpectrum out(F.cutoff);
  for (int k = -F.cutoff; k <= F.cutoff; ++k) out(k) = F(k) * std::polar(1.0, eps(sign) * t * airy_phase(k));
  return out;
}

ContinuumSpectrum physical_profile(const KdvState& s, Sign sign) {
  return airy_apply(sign == Sign::plus ? s.plus : s.minus, s.t, sign);
}

KdvState rhs_kdv(const KdvState& s, const SolverOptions& opt) {
  const int K = s.plus.cutoff;
  const Pair d = kdv_rhs(K, s.t, {s.plus.coeffs, s.minus.coeffs}, opt.nonlinearity);
  return {ContinuumSpectrum(K, d[0]), ContinuumSpectrum(K, d[1]), s.t};
}

Trajectory<KdvState> solve_kdv(const KdvState& s0, double T, double dt, const SolverOptions& opt) {
  const int K = s0.plus.cutoff;
  if (s0.minus.cutoff != K) throw std::invalid_argument("solve_kdv: cutoff mismatch");
  const int steps = step_count(T, dt);
  const double h = T / steps;
  const int stride = std::max(1, opt.record_stride);
  Trajectory<KdvState> traj;
  traj.dt = h;
  traj.provenance = "KdV profile RK4, K=" + std::to_string(K);
  Pair y{s0.plus.coeffs, s0.minus.coeffs};
  y[0][K] = 0.0;
  y[1][K] = 0.0;
  auto record = [&](double t) {
    traj.states.push_back({ContinuumSpectrum(K, y[0]), ContinuumSpectrum(K, y[1]), t});
    traj.times.push_back(t);
  };
  record(s0.t);
  auto f = [&](double t, const Pair& u) { return kdv_rhs(K, t, u, opt.nonlinearity); };
  for (int n = 1; n <= steps; ++n) {
    const double t = s0.t + (n - 1) * h;
    const Pair k1 = f(t, y);
    const Pair k2 = f(t + h / 2, axpy(y, h / 2, k1));
    const Pair k3 = f(t + h / 2, axpy(y, h / 2, k2));
    const Pair k4 = f(t + h, axpy(y, h, k3));
    for (int i = 0; i < 2; ++i) y[i] += h / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!y[0].allFinite() || !y[1].allFinite())
      throw std::runtime_error("solve_kdv: non-finite state at step " + std::to_string(n));
    if (n % stride == 0 || n == steps) record(s0.t + n * h);
  }
  return traj;
}

KdvState kdv_initial_from(const ProfilePair& p, int K) {
  KdvState s{interpolate_spectrum(p.plus, K), interpolate_spectrum(p.minus, K), p.t};
  s.plus(0) = 0.0;
  s.minus(0) = 0.0;
  return s;
}

}  // namespace fpukdv
