#ifndef OPTOMECH_SPECTRA_HPP
#define OPTOMECH_SPECTRA_HPP

#include <array>
#include <complex>
#include <vector>

#include "optomech/model.hpp"
#include "optomech/quadrature.hpp"

namespace optomech {

// One filtered output temporal mode: rectangle filter of width `bandwidth`
// centered at `center` (rotating frame), emitted at absolute time `delay`:
//   D[center, bandwidth, delay] =
//     bandwidth^(-1/2) * Integral_{center - bw/2}^{center + bw/2}
//       dw' e^{-i w' delay} d_out(w').
// The filter is normalized: (1/bandwidth) * Integral_band dw' = 1.
struct FilterSpec {
  double center{};
  double bandwidth{};
  double delay{0.0};

  void validate() const;  // bandwidth > 0, all finite
  double lo() const { return center - 0.5 * bandwidth; }
  double hi() const { return center + 0.5 * bandwidth; }
};

// Second moments of the filtered pair D1 = D[ w, sigma, tau] (cavity 1) and
// D2 = D[-w, sigma, 0] (cavity 2). Everything downstream is assembled from
// these six numbers; none of them is assumed to vanish.
struct MomentSet {
  double n1{};                    // <D1^dag D1>
  double n2{};                    // <D2^dag D2>
  std::complex<double> c12{};     // <D1 D2>
  std::complex<double> m11{};     // <D1 D1>
  std::complex<double> m22{};     // <D2 D2>
  std::complex<double> x12{};     // <D1^dag D2>
};

enum class MomentId { n1, n2, c12, m11, m22, x12, commutator1, commutator2 };

// Spectral density whose band integral, divided by the bandwidth, gives the
// requested moment (or filtered-mode commutator). Built from products of
// scattering entries at freq; the delay phase e^{-i freq delay} enters the
// cross moments. The creation-channel row of the scattering matrix evaluated
// at +freq is the delta-matched partner of the -center band, so a single band
// integral covers both filters.
std::complex<double> moment_integrand(const SystemParams& p, const FilterSpec& f,
                                      MomentId which, double freq);

// All six moments by adaptive quadrature over the filter band. A panel seed
// is planted at w' = 0 (when inside the band): near-equal couplings produce a
// mechanically narrow feature there, gamma-wide, far below the band scale.
// Throws InstabilityError on unstable systems and propagates
// NearSingularError / QuadratureFailure.
MomentSet moments(const SystemParams& p, const FilterSpec& f,
                  const QuadratureOptions& opts = {});

// |<D1 D2>|: the objective maximized by the optimal time delay.
double correlator_modulus(const SystemParams& p, const FilterSpec& f,
                          const QuadratureOptions& opts = {});

// Band-averaged commutators {[D1, D1^dag], [D2, D2^dag]}. Both equal 1 for
// any stable parameters; this pins the delta-normalization convention.
std::array<double, 2> filtered_commutators(const SystemParams& p, const FilterSpec& f,
                                           const QuadratureOptions& opts = {});

// Cached cross-spectrum over one filter band for fast delay scans: the
// scattering products are sampled once on an adapted grid, after which each
// |<D1 D2>|(tau) query is a weighted phase sum. Valid for |tau| <= tau_max
// (the grid is refined so every panel resolves the fastest phase).
class BandSpectrum {
 public:
  BandSpectrum(const SystemParams& p, const FilterSpec& band, double tau_max,
               const QuadratureOptions& opts = {});

  double correlator_modulus(double tau) const;
  double tau_max() const { return tau_max_; }
  bool flat() const { return flat_; }  // true when the cross spectrum vanishes

 private:
  double tau_max_;
  bool flat_ = true;
  std::vector<double> node_;
  std::vector<double> weight_;  // GL weight / bandwidth
  std::vector<std::complex<double>> cross_;
};

}  // namespace optomech

#endif  // OPTOMECH_SPECTRA_HPP
