#ifndef OPTOMECH_TESTS_REFERENCE_HPP
#define OPTOMECH_TESTS_REFERENCE_HPP

// Independent oracles for the test suite. Everything here is re-derived from
// the model algebra by hand (susceptibility form) or computed by a different
// algorithm (composite Simpson, dense eigensolvers) so that agreement with
// the library is a genuine cross-check, not a tautology.

#include <complex>
#include <random>

#include <Eigen/Core>

#include "optomech/model.hpp"
#include "optomech/spectra.hpp"

namespace optomech::testing {

// Scattering matrix from the closed susceptibility algebra:
//   chi_b = 1/(gamma/2 - i mu), chi_i = 1/(kappa_i/2 - i mu),
//   Sigma = 1/chi_b + g1^2 chi_1 - g2^2 chi_2,
// entries assembled channel by channel (public order d1, d2dag, b).
Eigen::Matrix3cd scattering_closed_form(const SystemParams& p, double mu);

// Band moments by composite Simpson on the closed-form products (n odd).
MomentSet moments_dense(const SystemParams& p, const FilterSpec& f, int n = 200001);

// Spectral density of one moment id via the closed form (no delay phase for
// n1/n2; delay phase applied for c12).
std::complex<double> moment_density_closed_form(const SystemParams& p,
                                                const FilterSpec& f,
                                                MomentId which, double mu);

// Smallest symplectic eigenvalue of the partially transposed covariance via
// the eigenvalues of i Omega V~ (dense complex eigensolver).
double nu_minus_eig(const Eigen::Matrix4d& v);

// Textbook two-mode squeezed vacuum covariance, vacuum variance 1/2.
Eigen::Matrix4d tmsv_covariance(double r);

// Two-mode squeezed thermal covariance with occupations nbar1, nbar2.
Eigen::Matrix4d tmst_covariance(double r, double nbar1, double nbar2);

// Random local symplectic (rotation * squeezer * rotation per mode) applied
// to a covariance matrix; preserves bona-fideness and E_N.
Eigen::Matrix4d dress_with_local_symplectic(const Eigen::Matrix4d& v,
                                            std::mt19937& rng);

// Random stable parameter set spanning the regimes the suite probes.
SystemParams random_stable_params(std::mt19937& rng, bool thermal = false);

}  // namespace optomech::testing

#endif  // OPTOMECH_TESTS_REFERENCE_HPP
