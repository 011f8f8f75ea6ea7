#include "fpukdv/fpu_solver.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace fpukdv {

namespace {

using Band = Eigen::VectorXcd;
using Pair = std::array<Band, 2>;

constexpr Complex I(0.0, 1.0);

Pair axpy(const Pair& y, double a, const Pair& k) { return {y[0] + a * k[0], y[1] + a * k[1]}; }

template <typename Rhs>
Pair rk4_step(const Pair& y, double t, double dt, Rhs&& f) {
  const Pair k1 = f(t, y);
  const Pair k2 = f(t + dt / 2, axpy(y, dt / 2, k1));
  const Pair k3 = f(t + dt / 2, axpy(y, dt / 2, k2));
  const Pair k4 = f(t + dt, axpy(y, dt, k3));
  Pair out;
  for (int i = 0; i < 2; ++i) out[i] = y[i] + dt / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// Per-grid tables over the band |k| <= N-1.
struct Tables {
  int L;
  double h;
  Eigen::VectorXd sigma, phase, kk;
  explicit Tables(const LatticeGrid& g) : L(g.n - 1), h(g.h), sigma(2 * L + 1), phase(2 * L + 1), kk(2 * L + 1) {
    for (int k = -L; k <= L; ++k) {
      sigma[k + L] = sigma_h(k, h);
      phase[k + L] = s_h_phase(k, h);
      kk[k + L] = k;
    }
  }
  Band exp_phase(double a, const Eigen::VectorXd& sym) const {
    Band e(sym.size());
    for (Eigen::Index i = 0; i < sym.size(); ++i) e[i] = std::polar(1.0, a * sym[i]);
    return e;
  }
};

Pair profile_rhs(const Tables& tb, double t, const Pair& U, ProfileKind kind, const SolverOptions& opt) {
  const int L = tb.L;
  const Band ep = tb.exp_phase(t, tb.phase);  // S^+(t); S^-(t) is its conjugate
  const Band u_plus = ep.cwiseProduct(U[0]);
  const Band u_minus = ep.conjugate().cwiseProduct(U[1]);
  Pair out;
  for (int i = 0; i < 2; ++i) {
    const int e = i == 0 ? 1 : -1;
    Band z = i == 0 ? u_plus : u_minus;
    if (kind == ProfileKind::coupled && !opt.drop_cross_terms) {
      const Band tr = tb.exp_phase(e * 2 * t / (tb.h * tb.h), tb.kk);
      z += tr.cwiseProduct(i == 0 ? u_minus : u_plus);
    }
    const Band sq = truncated_square(z, L);
    Band d(2 * L + 1);
    for (int k = -L; k <= L; ++k) {
      const Complex back = e > 0 ? std::conj(ep[k + L]) : ep[k + L];
      d[k + L] = (-0.25 * e * opt.nonlinearity) * (I * tb.sigma[k + L]) * sq[k + L] * back;
    }
    d[L] = 0.0;
    out[i] = d;
  }
  return out;
}

void require_finite(const Pair& y, int step, const char* who) {
  if (!y[0].allFinite() || !y[1].allFinite())
    throw std::runtime_error(std::string(who) + ": non-finite state at step " + std::to_string(step));
}

double mean_tolerance(const Spectrum& F) { return 1e-12 * std::max(1.0, F.coeffs.cwiseAbs().maxCoeff()); }

}  // namespace

int step_count(double T, double dt) {
  if (!(dt > 0) || !(T > 0) || !std::isfinite(T / dt)) throw std::invalid_argument("need T > 0 and dt > 0");
  return std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
}

ProfilePair split_initial(const Field& r0, const Field& r1, ProfileKind kind) {
  if (!(r0.grid == r1.grid)) throw std::invalid_argument("split_initial: grid mismatch");
  Spectrum R0 = forward_dft(r0), R1 = forward_dft(r1);
  if (std::abs(R0(0)) > mean_tolerance(R0) || std::abs(R1(0)) > mean_tolerance(R1))
    throw std::domain_error("split_initial: nonzero mean");
  R0(0) = 0;
  R1(0) = 0;
  R0 = project_nyquist(R0);
  R1 = project_nyquist(R1);
  const double h2 = r0.grid.h * r0.grid.h;
  const Spectrum G = apply_symbol(R1, {Symbol::nabla_h_inverse});
  ProfilePair p;
  p.plus = Spectrum(r0.grid);
  p.minus = Spectrum(r0.grid);
  p.plus.coeffs = 0.5 * (R0.coeffs - h2 * G.coeffs);
  p.minus.coeffs = 0.5 * (R0.coeffs + h2 * G.coeffs);
  p.kind = kind;
  return p;
}

double s_h_phase(int k, double h) {
  // 2 (theta - sin theta) / h^3 with theta = hk/2; series near 0 avoids cancellation
  const double th = h * k / 2;
  const double t2 = th * th;
  double d;
  if (std::abs(th) < 0.5) {
    double tail = 1.0;
    for (int m : {210, 156, 110, 72, 42, 20}) tail = 1.0 - t2 / m * tail;
    d = th * t2 / 6 * tail;
  } else {
    d = th - std::sin(th);
  }
  return 2 * d / (h * h * h);
}

Spectrum apply_propagator(const Spectrum& F, double t, Sign sign) {
  Spectrum out(F.grid);
  for (int k = -F.grid.n; k < F.grid.n; ++k) out(k) = F(k) * std::polar(1.0, eps(sign) * t * s_h_phase(k, F.grid.h));
  return out;
}

Spectrum apply_translation(const Spectrum& F, double t, Sign sign) {
  Spectrum out(F.grid);
  const double h2 = F.grid.h * F.grid.h;
  for (int k = -F.grid.n; k < F.grid.n; ++k) out(k) = F(k) * std::polar(1.0, eps(sign) * 2.0 * k * t / h2);
  return out;
}

Spectrum physical_profile(const ProfilePair& p, Sign sign) {
  return apply_propagator(sign == Sign::plus ? p.plus : p.minus, p.t, sign);
}

ProfilePair rhs_profile(const ProfilePair& p, const SolverOptions& opt) {
  const Tables tb(p.plus.grid);
  const Pair d = profile_rhs(tb, p.t, {band_of(p.plus), band_of(p.minus)}, p.kind, opt);
  ProfilePair out{from_band(p.plus.grid, d[0]), from_band(p.plus.grid, d[1]), p.t, p.kind};
  return out;
}

Trajectory<ProfilePair> solve(const ProfilePair& p0, double T, double dt, const SolverOptions& opt) {
  const LatticeGrid g = p0.plus.grid;
  const int steps = step_count(T, dt);
  const double h = T / steps;
  const int stride = std::max(1, opt.record_stride);
  const Tables tb(g);
  Trajectory<ProfilePair> traj;
  traj.dt = h;
  traj.provenance = std::string("profile RK4, ") + (p0.kind == ProfileKind::coupled ? "coupled" : "decoupled") +
                    ", N=" + std::to_string(g.n);
  Pair y{band_of(p0.plus), band_of(p0.minus)};
  y[0][tb.L] = 0.0;
  y[1][tb.L] = 0.0;
  auto record = [&](double t) {
    traj.states.push_back({from_band(g, y[0]), from_band(g, y[1]), t, p0.kind});
    traj.times.push_back(t);
  };
  record(p0.t);
  auto f = [&](double t, const Pair& u) { return profile_rhs(tb, t, u, p0.kind, opt); };
  for (int n = 1; n <= steps; ++n) {
    const double t = p0.t + (n - 1) * h;
    y = rk4_step(y, t, h, f);
    require_finite(y, n, "solve");
    if (n % stride == 0 || n == steps) record(p0.t + n * h);
  }
  return traj;
}

WaveState reconstruct_r(const ProfilePair& p) {
  const LatticeGrid& g = p.plus.grid;
  const Spectrum up = physical_profile(p, Sign::plus);
  const Spectrum um = physical_profile(p, Sign::minus);
  const double h2 = g.h * g.h;
  Spectrum R(g), Rt(g);
  for (int k = -g.n; k < g.n; ++k) {
    const Complex rp = up(k) * std::polar(1.0, -k * p.t / h2);
    const Complex rm = um(k) * std::polar(1.0, k * p.t / h2);
    R(k) = rp + rm;
    Rt(k) = -(I * sigma_h(k, g.h) / h2) * (rp - rm);
  }
  return {inverse_dft(R), inverse_dft(Rt)};
}

double hamiltonian(const WaveState& w) {
  const LatticeGrid& g = w.r.grid;
  const Spectrum R = project_nyquist(forward_dft(w.r));
  const Spectrum Q = forward_dft(w.r_t);
  if (std::abs(Q(0)) > 1e-10 * std::max(1.0, Q.coeffs.cwiseAbs().maxCoeff()))
    throw std::domain_error("hamiltonian: nonzero mean of r_t");
  const double h2 = g.h * g.h;
  double kinetic = 0;
  for (int k = -g.n; k < g.n; ++k) {
    if (k == 0) continue;
    const double sg = sigma_h(k, g.h);
    kinetic += h2 * h2 / (sg * sg) * std::norm(Q(k));
  }
  const double quadratic = R.coeffs.squaredNorm();
  // cubic term of the band-limited interpolant, free of aliasing
  double cubic = 0;
  if (g.n > 1) {
    const Eigen::VectorXcd band = band_of(R);
    const Eigen::VectorXcd sq = truncated_square(band, g.n - 1);
    cubic = band.dot(sq).real();
  }
  return 0.5 * kinetic + 0.5 * quadratic + h2 / 6.0 * cubic;
}

Trajectory<WaveState> solve_wave_direct(const WaveState& w0, double T, double dt, const SolverOptions& opt) {
  const LatticeGrid g = w0.r.grid;
  const int L = g.n - 1;
  const int steps = step_count(T, dt);
  const double h = T / steps;
  const int stride = std::max(1, opt.record_stride);
  Spectrum R0 = project_nyquist(forward_dft(w0.r)), Q0 = project_nyquist(forward_dft(w0.r_t));
  if (std::abs(R0(0)) > mean_tolerance(R0) || std::abs(Q0(0)) > mean_tolerance(Q0))
    throw std::domain_error("solve_wave_direct: nonzero mean");
  R0(0) = 0;
  Q0(0) = 0;
  Eigen::VectorXd lap(2 * L + 1);
  for (int k = -L; k <= L; ++k) {
    const double sg = sigma_h(k, g.h);
    lap[k + L] = -sg * sg;
  }
  const double h2 = g.h * g.h;
  auto f = [&](double, const Pair& y) {
    const Band sq = truncated_square(y[0], L);
    Pair d;
    d[0] = y[1];
    d[1] = (lap.array() * (y[0].array() / (h2 * h2) + (opt.nonlinearity / (2 * h2)) * sq.array())).matrix();
    d[1][L] = 0.0;
    return d;
  };
  Trajectory<WaveState> traj;
  traj.dt = h;
  traj.provenance = "wave RK4, N=" + std::to_string(g.n);
  Pair y{band_of(R0), band_of(Q0)};
  auto record = [&](double t) {
    traj.states.push_back({inverse_dft(from_band(g, y[0])), inverse_dft(from_band(g, y[1]))});
    traj.times.push_back(t);
  };
  record(0.0);
  for (int n = 1; n <= steps; ++n) {
    y = rk4_step(y, (n - 1) * h, h, f);
    require_finite(y, n, "solve_wave_direct");
    if (n % stride == 0 || n == steps) record(n * h);
  }
  return traj;
}

}  // namespace fpukdv
