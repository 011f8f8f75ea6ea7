#pragma once

#include "fpukdv/spectral_core.hpp"

#include <string>
#include <vector>

namespace fpukdv {

enum class Sign : int { plus = 1, minus = -1 };
inline int eps(Sign s) { return static_cast<int>(s); }

enum class ProfileKind { coupled, decoupled };

struct WaveState {
  Field r;
  Field r_t;
};

// Integrating-factor profiles U^+ and U^- (spectral) at time t.
struct ProfilePair {
  Spectrum plus;
  Spectrum minus;
  double t = 0.0;
  ProfileKind kind = ProfileKind::coupled;
};

template <typename State>
struct Trajectory {
  std::vector<State> states;
  std::vector<double> times;
  double dt = 0.0;
  std::string provenance;
};

struct SolverOptions {
  double nonlinearity = 1.0;      // 0 switches the quadratic term off
  bool drop_cross_terms = false;  // coupled kind only: ignore the opposite-moving wave
  int record_stride = 1;          // keep every record_stride-th step (the final state is always kept)
};

ProfilePair split_initial(const Field& r0, const Field& r1, ProfileKind kind = ProfileKind::coupled);

double s_h_phase(int k, double h);

Spectrum apply_propagator(const Spectrum& F, double t, Sign sign);
Spectrum apply_translation(const Spectrum& F, double t, Sign sign);

// Physical profiles u^{+-} = S_h^{+-}(t) U^{+-}.
Spectrum physical_profile(const ProfilePair& p, Sign sign);

ProfilePair rhs_profile(const ProfilePair& p, const SolverOptions& opt = {});

Trajectory<ProfilePair> solve(const ProfilePair& p0, double T, double dt, const SolverOptions& opt = {});

WaveState reconstruct_r(const ProfilePair& p);

double hamiltonian(const WaveState& w);

Trajectory<WaveState> solve_wave_direct(const WaveState& w0, double T, double dt, const SolverOptions& opt = {});

// Number of steps used for horizon T and requested step dt (dt is shrunk to T/steps).
int step_count(double T, double dt);

}  // namespace fpukdv
