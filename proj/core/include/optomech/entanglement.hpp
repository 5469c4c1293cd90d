#ifndef OPTOMECH_ENTANGLEMENT_HPP
#define OPTOMECH_ENTANGLEMENT_HPP

#include <Eigen/Core>

#include "optomech/spectra.hpp"

namespace optomech {

// Quadrature covariance matrix of the filtered output pair over
// (X1, P1, X2, P2) with X = (D + D^dag)/sqrt(2), P = (D - D^dag)/(i sqrt(2)),
// V_ij = <{dR_i, dR_j}>/2. Vacuum normalization: V_vac = I/2, and a state is
// bona fide iff V + (i/2) Omega >= 0 with Omega the 4x4 symplectic form.
struct CovarianceMatrix {
  Eigen::Matrix4d entries = 0.5 * Eigen::Matrix4d::Identity();

  // Smallest eigenvalue of V + (i/2) Omega (>= ~-1e-9 * scale when bona fide).
  double bona_fide_defect() const;
};

struct EntanglementResult {
  double e_n{};        // logarithmic negativity, >= 0
  double nu_minus{};   // smallest symplectic eigenvalue of the PT covariance
  MomentSet moments{}; // the moment set used (zeroed when not applicable)
  // Set when nu_minus fell below the covariance's double-precision resolution
  // (strongly excited states cancel 15+ digits); e_n is then a reported
  // ceiling, not a resolved value.
  bool precision_limited{false};
};

// Exact algebraic map from the six second moments to the 16 covariance
// entries; no moment is assumed zero. Throws UnphysicalError when the
// bona-fide condition fails beyond tolerance (a quadrature or convention bug,
// not a physical regime).
CovarianceMatrix covariance_from_moments(const MomentSet& m,
                                         double bona_fide_tol = 1e-9);

// Logarithmic negativity of a two-mode Gaussian state:
//   Delta~ = det A + det B - 2 det C,
//   nu_-^2 = (Delta~ - sqrt(Delta~^2 - 4 det V)) / 2,
//   E_N    = max(0, -ln(2 nu_-)),
// on the 2x2 block decomposition V = [[A, C], [C^T, B]]. The subtractive
// form for nu_- cancels catastrophically for strongly excited states, so the
// implementation evaluates the algebraically identical
//   nu_-^2 = 2 det V / (Delta~ + sqrt(Delta~^2 - 4 det V))
// with det V from closed 2x2 block formulas. Throws UnphysicalError when
// Delta~^2 < 4 det V beyond tolerance (complex symplectic eigenvalue).
EntanglementResult log_negativity(const CovarianceMatrix& v);

// Convenience: moments -> covariance -> E_N with the moment set attached.
EntanglementResult entanglement_from_moments(const MomentSet& m);

// Full pipeline at one parameter point: band moments -> covariance -> E_N.
EntanglementResult output_entanglement(const SystemParams& p, const FilterSpec& f,
                                       const QuadratureOptions& opts = {});

}  // namespace optomech

#endif  // OPTOMECH_ENTANGLEMENT_HPP
