#pragma once

#include "fpukdv/fpu_solver.hpp"
#include "fpukdv/interpolation.hpp"
#include "fpukdv/kdv_solver.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fpukdv {

inline constexpr const char* kCodeVersion = "0.1.0";

enum class DataKind { smooth_sine, bump, random_hs };

std::string to_string(DataKind kind);
DataKind parse_data_kind(const std::string& name);

struct RunConfig {
  std::vector<int> n_list{16, 32, 64, 128};
  double s = 1.0;
  DataKind data = DataKind::smooth_sine;
  std::uint64_t seed = 0;
  double t_final = 0.5;
  double dt = 0.0;  // <= 0 selects the automatic policy
  int kdv_cutoff_factor = 4;
  int samples = 32;
  bool record_runtime = true;
};

void validate(const RunConfig& cfg);

WaveState make_initial_data(const LatticeGrid& grid, double s, DataKind kind, std::uint64_t seed);

// Mean-zero random field with |F(k)| = <k>^{-s-0.55}, seeded Hermitian phases, H^s norm 1.
Field random_hs_field(const LatticeGrid& grid, double s, std::uint64_t seed);

// min(1e-3, 0.05/(N max(1, |u0|_{H^1})), 0.025 h^2); the last term resolves the
// 2k/h^2 oscillation of the coupling terms.
double auto_dt(const LatticeGrid& grid, const ProfilePair& u0);

struct ErrorRow {
  int n = 0;
  double h = 0.0;
  double e_decouple = 0.0;
  double e_kdv = 0.0;
  double e_main = 0.0;
  double commutator = 0.0;      // sup_t sum_{+-} |L_h e^{-+t/h^2 d_h} v - e^{-+t/h^2 d_x} L_h v|
  double triangle_ratio = 0.0;  // sup_t E_main / (decoupling + kdv + commutator pieces)
  double e_main_initial = 0.0;
  double runtime_sec = 0.0;
  double dt = 0.0;
  int kdv_cutoff = 0;
};

enum class Experiment { decouple, kdv, main_theorem, all };

std::vector<ErrorRow> run_experiment(const RunConfig& cfg, Experiment which);
std::vector<ErrorRow> run_decoupling_experiment(const RunConfig& cfg);
std::vector<ErrorRow> run_kdv_comparison(const RunConfig& cfg);
std::vector<ErrorRow> run_main_theorem(const RunConfig& cfg);

// |P_{<=pi/h}(S^{+-}(t) L_h - L_h S_h^{+-}(t)) f|_{L^2(T)}
double propagator_commutator(const Field& f, double t, Sign sign);

struct RateFit {
  double slope = 0.0;
  double residual = 0.0;
};

RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

// |S_h^{+-}(t) f|_{L^4([0,T] x T_h)} / |f|_{L^2}, Simpson in time on 4N intervals.
double strichartz_ratio(const Field& f, double T, Sign sign);

struct StrichartzStats {
  std::vector<int> n_list;
  std::vector<double> max_ratio;
  int trials = 0;
  double t_final = 0.0;
};

StrichartzStats strichartz_probe(const std::vector<int>& n_list, int trials, double T, std::uint64_t seed = 0);

struct ConvergenceReport {
  std::string experiment;
  RunConfig config;
  std::vector<ErrorRow> rows;
  std::map<std::string, RateFit> slopes;
  std::map<std::string, double> probes;
  std::string code_version = kCodeVersion;
};

ConvergenceReport make_report(const std::string& experiment, const RunConfig& cfg, std::vector<ErrorRow> rows);

std::string render_csv(const ConvergenceReport& r);
std::string render_json(const ConvergenceReport& r);
void export_report(const ConvergenceReport& r, const std::string& path, const std::string& format);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_identities(int n_max = 16, int tiling_max = 12, std::uint64_t seed = 0);
std::vector<CheckResult> run_taylor_bounds(int n_max = 256);

}  // namespace fpukdv
