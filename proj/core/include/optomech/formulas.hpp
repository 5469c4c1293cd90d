#ifndef OPTOMECH_FORMULAS_HPP
#define OPTOMECH_FORMULAS_HPP

#include <string>

#include "optomech/errors.hpp"

namespace optomech {

// Closed forms for the equal-cavity-decay system (kappa1 = kappa2 = kappa),
// valid when the mechanical decay is far below every other rate. All
// functions are pure; outputs follow the scale invariance of the physics
// (scaling every rate by lambda scales times by 1/lambda and leaves
// entanglement values unchanged).
struct AnalyticInputs {
  double kappa{};  // common cavity decay
  double sigma{};  // filter bandwidth
  double g1{};     // beam-splitter coupling
  double g2{};     // parametric coupling (ignored by the *-without-g2 forms)

  void validate() const;  // all used fields strictly positive
};

// Non-fatal regime annotation attached to a result (sweeps legitimately
// cross regime boundaries and must not abort).
using RegimeNote = std::string;

// Optimal delay between the two filtered outputs at resonant center
// frequency:
//   tau_opt = [20 (g2^2 - g1^2) + 5 kappa^2 + 3 sigma^2]
//             / [10 (g1^2 + g2^2) kappa].
// May be negative; its zero in g2 is exactly g2_opt_large_bw.
double tau_opt(const AnalyticInputs& a);

// Optimal parametric coupling without delay, large-bandwidth regime:
//   (1/2) sqrt(4 g1^2 - kappa^2 - 3 sigma^2 / 5).
// Throws DomainError when the radicand is not positive (drive too weak).
double g2_opt_large_bw(double g1, double kappa, double sigma);

// Optimal parametric coupling without delay, small-bandwidth regime:
//   g1 + g1 sigma / (2 sqrt(3) kappa) - sqrt(kappa sigma) / (2 * 3^(1/4)).
// Annotates when called above the small-bandwidth boundary.
double g2_opt_small_bw(double g1, double kappa, double sigma,
                       RegimeNote* note = nullptr);

// Boundary between the small- and large-bandwidth regimes:
//   sigma_b = sqrt(3) kappa^3 / (4 g1^2).
double sigma_boundary(double g1, double kappa);

// Drive scale above which the zero-delay optimal entanglement saturates:
//   sqrt(kappa^5 / (sqrt(3) sigma^3)).
double saturation_threshold(double sigma, double kappa);

// Saturation value of the zero-delay optimal entanglement:
//   -ln sqrt[ (k^2 + s^2) (15 k^2 s + 4 s^3 - 3 a b)^2 / (9 k^2 s^2 a^2) ],
//   a = 5 k^2 + 3 s^2,  b = k arctan(s/k).
double e_n_saturation(double sigma, double kappa);

// Small-bandwidth simplification ln[175 kappa^6 / (4 sigma^6)], shipped as a
// diagnostic companion to e_n_saturation; the full expression stays
// authoritative everywhere.
double e_n_saturation_small_sigma(double sigma, double kappa);

// Optimal coupling with optimal delay (g1 >> kappa, sigma):
//   g1 - [ a (15 k^2 s + 4 s^3 - 3 a b) / (400 (6 s - 3 b)) ]^(1/4).
double g2_opt_with_delay(double g1, double kappa, double sigma,
                         RegimeNote* note = nullptr);

// Optimal entanglement with optimal delay (g1 >> kappa, sigma):
//   -ln sqrt[ a (2 s - b) (15 k^2 s + 4 s^3 - 3 a b) / (4800 g1^4 s^2) ].
double e_n_opt_with_delay(double g1, double kappa, double sigma,
                          RegimeNote* note = nullptr);

// 15 k^2 s + 4 s^3 - 3 a b: O((s/k)^7) for s << k, so the direct form cancels
// catastrophically there; evaluated by its arctan series below s/k = 1/2.
// Exposed for tests and diagnostics.
double arctan_combination(double sigma, double kappa);

}  // namespace optomech

#endif  // OPTOMECH_FORMULAS_HPP
