#ifndef OPTOMECH_MODEL_HPP
#define OPTOMECH_MODEL_HPP

#include <complex>
#include <string>

#include <Eigen/Core>

#include "optomech/errors.hpp"

namespace optomech {

// Linearized three-mode optomechanical model: one mechanical mode b coupled
// to cavity 1 by a beam-splitter interaction (rate g1) and to cavity 2 by a
// parametric-amplifier interaction (rate g2). Cavity 1 is driven on the red
// sideband, cavity 2 on the blue sideband; all rates are angular frequencies
// in a common (arbitrary) unit.
//
// Conventions, fixed once for the whole library:
//   * Fourier transform  o(t) = (2*pi)^(-1/2) Integral dw e^{-i w t} o(w),
//     so d/dt -> -i w for annihilation-type operators.
//   * Input noise correlators carry no 2*pi factor:
//       < d_in(w) d_in^dag(w') > = (N + 1) delta(w - w'),
//       < d_in^dag(w) d_in(w') > =  N      delta(w - w').
//     The choice is pinned observably by the unit-commutator invariant of the
//     filtered output modes (see spectra.hpp).
struct SystemParams {
  double kappa1{};  // cavity-1 amplitude decay rate, > 0
  double kappa2{};  // cavity-2 amplitude decay rate, > 0
  double gamma{};   // mechanical decay rate, > 0
  double g1{};      // beam-splitter coupling, real, >= 0
  double g2{};      // parametric coupling, real, >= 0
  double n_m{0.0};  // mechanical thermal population, >= 0
  double n_cav1{0.0};  // cavity-1 thermal population, >= 0
  double n_cav2{0.0};  // cavity-2 thermal population, >= 0

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

enum class StabilityVerdict { stable, unstable, marginal };

const char* to_string(StabilityVerdict v);

// Closed-form Routh-Hurwitz verdict: stable iff g1^2/g2^2 > max(k1/k2, k2/k1)
// for unequal cavity decays; for equal decays the system is stable iff
// g2 <= g1. Points on the boundary within boundary_rel_tol (relative) are
// reported marginal so grid points landing exactly on it do not flip
// nondeterministically. The closed form is derived for strong cooperativity
// and kappa >> gamma; outside that regime the drift-matrix eigenvalues are
// authoritative (see drift_matrix).
StabilityVerdict check_stability(const SystemParams& p, double boundary_rel_tol = 1e-9);

// Drift matrix M of the linearized Langevin equations in the basis
// (b, d1, d2^dag):  d/dt v = M v + noise, with
//   M = [[-gamma/2, -i g1, -i g2],
//        [-i g1,  -kappa1/2,   0 ],
//        [ i g2,     0, -kappa2/2]].
// All eigenvalues in the open left half-plane <=> asymptotic stability.
Eigen::Matrix3cd drift_matrix(const SystemParams& p);

// Frequency response mapping input noise operators to output field operators
// at one rotating-frame frequency. Row/column channel order:
//   0: d1      (cavity-1 annihilation channel)
//   1: d2^dag  (cavity-2 creation channel)
//   2: b       (mechanical annihilation channel)
// Output commutator preservation imposes the Bogoliubov row identities
//   |S11|^2 - |S12|^2 + |S13|^2 = 1
//   |S22|^2 - |S21|^2 - |S23|^2 = 1
// at every frequency (testable numerically via the defect accessors).
struct ScatteringMatrix {
  double freq{};           // evaluation frequency w' (rotating frame)
  Eigen::Matrix3cd entries;

  static constexpr int kCavity1 = 0;
  static constexpr int kCavity2Dag = 1;
  static constexpr int kMech = 2;

  double row1_identity_defect() const;
  double row2_identity_defect() const;
};

// Solves (-i w' I - M) v = -L v_in with L = diag(sqrt(gamma), sqrt(kappa1),
// sqrt(kappa2)) and applies out_i = in_i + sqrt(rate_i) v_i.
// Throws NearSingularError when the condition number of the solve exceeds
// condition_limit (default 1e12: far below double-precision collapse, far
// above any stable-regime value).
ScatteringMatrix scattering(const SystemParams& p, double freq,
                            double condition_limit = 1e12);

}  // namespace optomech

#endif  // OPTOMECH_MODEL_HPP
