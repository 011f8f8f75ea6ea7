#pragma once

#include "fpukdv/fpu_solver.hpp"
#include "fpukdv/interpolation.hpp"

namespace fpukdv {

// Airy-profiles W^{+-} = S^{+-}(-t) w^{+-}.
struct KdvState {
  ContinuumSpectrum plus;
  ContinuumSpectrum minus;
  double t = 0.0;
};

ContinuumSpectrum airy_apply(const ContinuumSpectrum& F, double t, Sign sign);

// w^{+-} = S^{+-}(t) W^{+-}
ContinuumSpectrum physical_profile(const KdvState& s, Sign sign);

KdvState rhs_kdv(const KdvState& s, const SolverOptions& opt = {});

Trajectory<KdvState> solve_kdv(const KdvState& s0, double T, double dt, const SolverOptions& opt = {});

// KdV data built from lattice profiles through the interpolation symbol.
KdvState kdv_initial_from(const ProfilePair& p, int K);

}  // namespace fpukdv
