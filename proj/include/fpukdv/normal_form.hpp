#pragma once

#include "fpukdv/fpu_solver.hpp"
#include "fpukdv/kdv_solver.hpp"

#include <vector>

namespace fpukdv {

enum class System { fpu, kdv };

// frequencies = (k; k1, ..., k_order) with k = k1 + ... + k_order
struct ResonanceQuery {
  System system = System::fpu;
  double h = 0.0;  // ignored for kdv
  int order = 2;
  std::vector<int> frequencies;
};

double resonance(const ResonanceQuery& q);

double phi2(int k, int k1, int k2, double h);
double phi3(int k, int k1, int k2, int k3, double h);
double phi4(int k, int k1, int k2, int k3, int k4, double h);
double psi2(int k, int k1, int k2);
double psi3(int k, int k1, int k2, int k3);
double psi4(int k, int k1, int k2, int k3, int k4);

enum class FormLevel { B1, B2, B3, B4, R_strong, R_weak };

// Cubic index classes for (k1,k2,k3) with k = k1+k2+k3, k1 k2 k3 != 0, k2+k3 != 0.
enum class CubicClass { strong, r2, r3, nonresonant };
CubicClass classify_cubic(int k1, int k2, int k3);

// Multilinear forms evaluated on the Galerkin band: every frequency and every
// intermediate frequency that plays the role of a mode stays inside the band
// (|k| <= N-1 on the lattice, |k| <= K on the continuum).
//
// B1 is the profile vector field, B2 and B3 the normal-form corrections,
// B4 = B3(B1, V, V) + 2 B3(V, V, B1). R_strong and R_weak are the closed-form
// resonant terms.
Spectrum fpu_form(FormLevel level, const Spectrum& V, double t, Sign sign);
ContinuumSpectrum kdv_form(FormLevel level, const ContinuumSpectrum& W, double t, Sign sign);

Spectrum fpu_bilinear(const Spectrum& f, const Spectrum& g, double t, Sign sign);
Spectrum fpu_trilinear(const Spectrum& f, const Spectrum& g, const Spectrum& q, double t, Sign sign);
ContinuumSpectrum kdv_bilinear(const ContinuumSpectrum& f, const ContinuumSpectrum& g, double t, Sign sign);
ContinuumSpectrum kdv_trilinear(const ContinuumSpectrum& f, const ContinuumSpectrum& g, const ContinuumSpectrum& q,
                                double t, Sign sign);

// Cubic term B2(V, B1(V)) restricted to one index class, assembled term by term.
Spectrum fpu_cubic_part(const Spectrum& V, double t, Sign sign, CubicClass part);
ContinuumSpectrum kdv_cubic_part(const ContinuumSpectrum& W, double t, Sign sign, CubicClass part);
// R2 and R3 together
Spectrum fpu_weak_assembled(const Spectrum& V, double t, Sign sign);
ContinuumSpectrum kdv_weak_assembled(const ContinuumSpectrum& W, double t, Sign sign);

// Quartic form written out with its explicit multiplier (cross-check of B4).
Spectrum fpu_quartic_explicit(const Spectrum& V, double t, Sign sign);
ContinuumSpectrum kdv_quartic_explicit(const ContinuumSpectrum& W, double t, Sign sign);

// Sup over even-indexed samples of the l2 norm of the regularized integral
// identity; time integrals by composite Simpson on the sampling grid. The
// trajectory must have uniform sampling and at least 8 intervals.
// nonlinearity must match the value the trajectory was computed with.
double residual_regularized(const Trajectory<ProfilePair>& traj, double nonlinearity = 1.0);
double residual_regularized(const Trajectory<KdvState>& traj, double nonlinearity = 1.0);

}  // namespace fpukdv
