#include "fpukdv/limit_harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fpukdv {

namespace {

double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Spectrum lattice_shift(const Spectrum& F, double a) {
  Spectrum out(F.grid);
  for (int k = -F.grid.n; k < F.grid.n; ++k) out(k) = F(k) * std::polar(1.0, k * a);
  return out;
}

double diff_norm(const ContinuumSpectrum& a, const ContinuumSpectrum& b) { return (a.coeffs - b.coeffs).norm(); }

ErrorRow run_one(const RunConfig& cfg, int n) {
  const auto start = std::chrono::steady_clock::now();
  const LatticeGrid grid(n);
  const WaveState w0 = make_initial_data(grid, cfg.s, cfg.data, cfg.seed);
  const ProfilePair pc = split_initial(w0.r, w0.r_t, ProfileKind::coupled);
  const ProfilePair pd = split_initial(w0.r, w0.r_t, ProfileKind::decoupled);
  const double dt_req = cfg.dt > 0 ? cfg.dt : auto_dt(grid, pc);
  int steps = step_count(cfg.t_final, dt_req);
  steps = (steps + cfg.samples - 1) / cfg.samples * cfg.samples;
  SolverOptions opt;
  opt.record_stride = steps / cfg.samples;
  const double dt = cfg.t_final / steps;
  const int K = cfg.kdv_cutoff_factor * n;

  const auto coupled = solve(pc, cfg.t_final, dt, opt);
  const auto decoupled = solve(pd, cfg.t_final, dt, opt);
  const auto kdv = solve_kdv(kdv_initial_from(pd, K), cfg.t_final, dt, opt);

  ErrorRow row;
  row.n = n;
  row.h = grid.h;
  row.dt = dt;
  row.kdv_cutoff = K;
  const double h2 = grid.h * grid.h;
  for (std::size_t j = 0; j < coupled.states.size(); ++j) {
    const double t = coupled.times[j];
    double e_dec = 0, e_kdv = 0, bound = 0, comm_sum = 0;
    Spectrum rhat(grid);
    ContinuumSpectrum target(K);
    for (Sign s : {Sign::plus, Sign::minus}) {
      const double a = -eps(s) * t / h2;
      const Spectrum u = physical_profile(coupled.states[j], s);
      const Spectrum v = physical_profile(decoupled.states[j], s);
      const ContinuumSpectrum w = physical_profile(kdv.states[j], s);
      const ContinuumSpectrum Lv = interpolate_spectrum(v, K);
      const double dec = (u.coeffs - v.coeffs).norm();
      const double kd = diff_norm(Lv, w);
      const double comm = diff_norm(interpolate_spectrum(lattice_shift(v, a), K), shift_phase(Lv, a));
      e_dec = std::max(e_dec, dec);
      e_kdv = std::max(e_kdv, kd);
      comm_sum += comm;
      bound += dec + kd + comm;
      rhat.coeffs += lattice_shift(u, a).coeffs;
      target.coeffs += shift_phase(w, a).coeffs;
    }
    const double e_main = diff_norm(interpolate_spectrum(rhat, K), target);
    if (j == 0) row.e_main_initial = e_main;
    row.e_decouple = std::max(row.e_decouple, e_dec);
    row.e_kdv = std::max(row.e_kdv, e_kdv);
    row.e_main = std::max(row.e_main, e_main);
    row.commutator = std::max(row.commutator, comm_sum);
    if (bound > 0) row.triangle_ratio = std::max(row.triangle_ratio, e_main / bound);
  }
  if (cfg.record_runtime)
    row.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

nlohmann::ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string to_string(DataKind kind) {
  switch (kind) {
    case DataKind::smooth_sine: return "smooth_sine";
    case DataKind::bump: return "bump";
    case DataKind::random_hs: return "random";
  }
  return "unknown";
}

DataKind parse_data_kind(const std::string& name) {
  if (name == "smooth_sine") return DataKind::smooth_sine;
  if (name == "bump") return DataKind::bump;
  if (name == "random" || name == "random_hs") return DataKind::random_hs;
  throw std::invalid_argument("unknown data kind: " + name);
}

void validate(const RunConfig& cfg) {
  if (cfg.n_list.empty()) throw std::invalid_argument("n_list is empty");
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    if (cfg.n_list[i] < 2) throw std::invalid_argument("n_list entries must be >= 2");
    if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1]) throw std::invalid_argument("n_list must be strictly increasing");
  }
  if (!(cfg.s > 0 && cfg.s <= 1)) throw std::invalid_argument("s must lie in (0, 1]");
  if (!(cfg.t_final > 0)) throw std::invalid_argument("t_final must be positive");
  if (cfg.kdv_cutoff_factor < 1) throw std::invalid_argument("kdv cutoff factor must be >= 1");
  if (cfg.samples < 2 || cfg.samples % 2 != 0) throw std::invalid_argument("samples must be even and >= 2");
}

Field random_hs_field(const LatticeGrid& grid, double s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Spectrum F(grid);
  for (int k = 1; k < grid.n; ++k) {
    const double amp = std::pow(japanese_bracket(double(k)), -s - 0.55);
    const double theta = 2 * std::numbers::pi * uniform01(rng);
    F(k) = std::polar(amp, theta);
    F(-k) = std::conj(F(k));
  }
  const double norm = hs_norm(F, s);
  if (norm > 0) F.coeffs /= norm;
  return inverse_dft(F);
}

WaveState make_initial_data(const LatticeGrid& grid, double s, DataKind kind, std::uint64_t seed) {
  switch (kind) {
    case DataKind::smooth_sine:
      return {Field::sample(grid, [](double x) { return std::sin(x); }), Field(grid)};
    case DataKind::bump: {
      Field r0 = Field::sample(grid, [](double x) { return std::exp(std::cos(x)); });
      r0.values.array() -= r0.values.mean();
      return {r0, Field(grid)};
    }
    case DataKind::random_hs: {
      const Field r0 = random_hs_field(grid, s, seed);
      const Field g = random_hs_field(grid, s, seed ^ 0x9E3779B97F4A7C15ULL);
      Spectrum R1 = apply_symbol(forward_dft(g), {Symbol::nabla_h});
      R1.coeffs /= grid.h * grid.h;
      R1(0) = 0;
      return {r0, inverse_dft(R1)};
    }
  }
  throw std::invalid_argument("make_initial_data: unknown kind");
}

double auto_dt(const LatticeGrid& grid, const ProfilePair& u0) {
  const double size = std::max({1.0, hs_norm(u0.plus, 1.0), hs_norm(u0.minus, 1.0)});
  return std::min({1e-3, 0.05 / (grid.n * size), 0.025 * grid.h * grid.h});
}

std::vector<ErrorRow> run_experiment(const RunConfig& cfg, Experiment) {
  validate(cfg);
  std::vector<ErrorRow> rows;
  for (int n : cfg.n_list) {
    try {
      rows.push_back(run_one(cfg, n));
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("N=" + std::to_string(n) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<ErrorRow> run_decoupling_experiment(const RunConfig& cfg) { return run_experiment(cfg, Experiment::decouple); }
std::vector<ErrorRow> run_kdv_comparison(const RunConfig& cfg) { return run_experiment(cfg, Experiment::kdv); }
std::vector<ErrorRow> run_main_theorem(const RunConfig& cfg) { return run_experiment(cfg, Experiment::main_theorem); }

double propagator_commutator(const Field& f, double t, Sign sign) {
  const Spectrum F = forward_dft(f);
  const int n = f.grid.n;
  double acc = 0;
  for (int k = -n; k <= n; ++k) {
    const Complex fk = F(k == n ? -n : k);
    const double e = eps(sign);
    const Complex d = std::polar(1.0, e * t * k * double(k) * k / 24.0) - std::polar(1.0, e * t * s_h_phase(k, f.grid.h));
    acc += std::norm(interpolation_multiplier(k, f.grid.h) * d * fk);
  }
  return std::sqrt(acc);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
  const double m = double(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs, ys;
  for (const auto& [h, e] : points) {
    if (!(e > 0) || !(h > 0)) throw std::invalid_argument("fit_rate: values must be positive");
    const double x = std::log(h), y = std::log(e);
    xs.push_back(x);
    ys.push_back(y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = m * sxx - sx * sx;
  if (!(den > 1e-12 * m * sxx)) throw std::invalid_argument("fit_rate: degenerate abscissae");
  RateFit fit;
  fit.slope = (m * sxy - sx * sy) / den;
  const double icpt = (sy - fit.slope * sx) / m;
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (icpt + fit.slope * xs[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / m);
  return fit;
}

double strichartz_ratio(const Field& f, double T, Sign sign) {
  const Spectrum F = project_nyquist(forward_dft(f));
  const double l2 = F.coeffs.norm();
  if (l2 == 0) return 0;
  const int intervals = 4 * f.grid.n;
  const double tau = T / intervals;
  double acc = 0;
  for (int i = 0; i <= intervals; ++i) {
    const Field g = inverse_dft(apply_propagator(F, i * tau, sign));
    const double l4 = f.grid.h * g.values.array().pow(4).sum();
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * l4;
  }
  return std::pow(acc * tau / 3, 0.25) / l2;
}

StrichartzStats strichartz_probe(const std::vector<int>& n_list, int trials, double T, std::uint64_t seed) {
  if (trials < 10) throw std::invalid_argument("strichartz_probe: need at least 10 trials");
  StrichartzStats st;
  st.n_list = n_list;
  st.trials = trials;
  st.t_final = T;
  for (int n : n_list) {
    const LatticeGrid g(n);
    std::mt19937_64 rng(seed + std::uint64_t(n));
    double best = 0;
    for (int trial = 0; trial < trials; ++trial) {
      Spectrum F(g);
      for (int k = 1; k < n; ++k) {
        F(k) = std::polar(1.0, 2 * std::numbers::pi * uniform01(rng));
        F(-k) = std::conj(F(k));
      }
      F.coeffs /= F.coeffs.norm();
      best = std::max(best, strichartz_ratio(inverse_dft(F), T, Sign::plus));
    }
    st.max_ratio.push_back(best);
  }
  return st;
}

ConvergenceReport make_report(const std::string& experiment, const RunConfig& cfg, std::vector<ErrorRow> rows) {
  ConvergenceReport r;
  r.experiment = experiment;
  r.config = cfg;
  r.rows = std::move(rows);
  if (r.rows.size() >= 3) {
    auto fit = [&](auto getter) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& row : r.rows) pts.emplace_back(row.h, getter(row));
      return fit_rate(pts);
    };
    r.slopes["E_decouple"] = fit([](const ErrorRow& x) { return x.e_decouple; });
    r.slopes["E_kdv"] = fit([](const ErrorRow& x) { return x.e_kdv; });
    r.slopes["E_main"] = fit([](const ErrorRow& x) { return x.e_main; });
  }
  double tri = 0;
  bool mono_kdv = true, mono_main = true;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    tri = std::max(tri, r.rows[i].triangle_ratio);
    if (i == 0) continue;
    const double slack = i == 1 ? 1.05 : 1.0;
    mono_kdv = mono_kdv && r.rows[i].e_kdv <= slack * r.rows[i - 1].e_kdv;
    mono_main = mono_main && r.rows[i].e_main <= slack * r.rows[i - 1].e_main;
  }
  r.probes["triangle_ratio_max"] = tri;
  r.probes["monotone_E_kdv"] = mono_kdv ? 1.0 : 0.0;
  r.probes["monotone_E_main"] = mono_main ? 1.0 : 0.0;
  return r;
}

std::string render_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os << "N,h,E_decouple,E_kdv,E_main,runtime_sec\n";
  for (const auto& row : r.rows)
    os << row.n << ',' << fmt_double(row.h) << ',' << fmt_double(row.e_decouple) << ',' << fmt_double(row.e_kdv)
       << ',' << fmt_double(row.e_main) << ',' << fmt_double(row.runtime_sec) << '\n';
  return os.str();
}

std::string render_json(const ConvergenceReport& r) {
  nlohmann::ordered_json j;
  j["code_version"] = r.code_version;
  j["experiment"] = r.experiment;
  auto& c = j["config"];
  c["n_list"] = r.config.n_list;
  c["s"] = r.config.s;
  c["data"] = to_string(r.config.data);
  c["seed"] = r.config.seed;
  c["t_final"] = r.config.t_final;
  c["dt"] = r.config.dt > 0 ? nlohmann::ordered_json(r.config.dt) : nlohmann::ordered_json("auto");
  c["kdv_cutoff_factor"] = r.config.kdv_cutoff_factor;
  c["samples"] = r.config.samples;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json x;
    x["N"] = row.n;
    x["h"] = num(row.h);
    x["E_decouple"] = num(row.e_decouple);
    x["E_kdv"] = num(row.e_kdv);
    x["E_main"] = num(row.e_main);
    x["commutator"] = num(row.commutator);
    x["triangle_ratio"] = num(row.triangle_ratio);
    x["E_main_initial"] = num(row.e_main_initial);
    x["dt"] = num(row.dt);
    x["kdv_cutoff"] = row.kdv_cutoff;
    x["runtime_sec"] = num(row.runtime_sec);
    j["rows"].push_back(x);
  }
  for (const auto& [name, fit] : r.slopes) j["slopes"][name] = {{"slope", num(fit.slope)}, {"residual", num(fit.residual)}};
  for (const auto& [name, v] : r.probes) j["probes"][name] = num(v);
  return j.dump(2) + "\n";
}

void export_report(const ConvergenceReport& r, const std::string& path, const std::string& format) {
  std::string body;
  if (format == "csv")
    body = render_csv(r);
  else if (format == "json")
    body = render_json(r);
  else
    throw std::invalid_argument("unknown report format: " + format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open report file: " + path);
  out << body;
  if (!out) throw std::runtime_error("failed writing report file: " + path);
}

}  // namespace fpukdv
