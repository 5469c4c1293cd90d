#include "optomech/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace optomech {

namespace {

using complex = std::complex<double>;

// Input-noise channel weights in the scattering channel order
// (d1, d2^dag, b). The creation channel swaps the roles of N and N+1.
struct NoiseWeights {
  std::array<double, 3> plus;   // < u u^dag > prefactors
  std::array<double, 3> minus;  // < u^dag u > prefactors
  static constexpr std::array<double, 3> comm_sign{+1.0, -1.0, +1.0};

  explicit NoiseWeights(const SystemParams& p)
      : plus{p.n_cav1 + 1.0, p.n_cav2, p.n_m + 1.0},
        minus{p.n_cav1, p.n_cav2 + 1.0, p.n_m} {}
};

// Thermal reservoirs carry no anomalous correlations: the input blocks
// < u_i(w) u_j(w') > and < u_i^dag(w) u_j^dag(w') > vanish identically, which
// is what makes the single-mode squeezing moments m11, m22 and the
// beam-splitter moment x12 come out exactly zero below. They are still part
// of every downstream contraction rather than being assumed away.
constexpr bool kAnomalousInputsVanish = true;

struct SpectralDensities {
  double n1, n2;
  complex c12;
  double comm1, comm2;
};

SpectralDensities densities_at(const SystemParams& p, double delay, double freq) {
  const NoiseWeights w(p);
  const ScatteringMatrix sm = scattering(p, freq);
  const auto& s = sm.entries;

  SpectralDensities d{};
  complex cross{0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    const double a2 = std::norm(s(0, i));
    const double b2 = std::norm(s(1, i));
    d.n1 += a2 * w.minus[i];
    d.n2 += b2 * w.plus[i];
    cross += s(0, i) * std::conj(s(1, i)) * w.plus[i];
    d.comm1 += a2 * NoiseWeights::comm_sign[i];
    d.comm2 -= b2 * NoiseWeights::comm_sign[i];
  }
  d.c12 = std::polar(1.0, -freq * delay) * cross;
  return d;
}

void check_evaluable(const SystemParams& p) {
  if (check_stability(p) == StabilityVerdict::unstable) {
    throw InstabilityError(
        "moments: system is unstable; no stationary output state exists");
  }
}

std::vector<double> band_breakpoints(const FilterSpec& f) {
  std::vector<double> bp;
  if (f.lo() < 0.0 && f.hi() > 0.0) bp.push_back(0.0);
  return bp;
}

double seed_width(const SystemParams& p, const FilterSpec& f) {
  return std::min(f.bandwidth, std::min(p.kappa1, p.kappa2)) / 16.0;
}

}  // namespace

void FilterSpec::validate() const {
  if (!std::isfinite(center)) throw std::invalid_argument("FilterSpec.center must be finite");
  if (!(std::isfinite(bandwidth) && bandwidth > 0.0)) {
    throw std::invalid_argument("FilterSpec.bandwidth must be > 0");
  }
  if (!std::isfinite(delay)) throw std::invalid_argument("FilterSpec.delay must be finite");
}

std::complex<double> moment_integrand(const SystemParams& p, const FilterSpec& f,
                                      MomentId which, double freq) {
  f.validate();
  switch (which) {
    case MomentId::m11:
    case MomentId::m22:
    case MomentId::x12: {
      if (kAnomalousInputsVanish) return {0.0, 0.0};
      break;
    }
    default:
      break;
  }
  const SpectralDensities d = densities_at(p, f.delay, freq);
  switch (which) {
    case MomentId::n1: return {d.n1, 0.0};
    case MomentId::n2: return {d.n2, 0.0};
    case MomentId::c12: return d.c12;
    case MomentId::commutator1: return {d.comm1, 0.0};
    case MomentId::commutator2: return {d.comm2, 0.0};
    default: return {0.0, 0.0};
  }
}

MomentSet moments(const SystemParams& p, const FilterSpec& f,
                  const QuadratureOptions& opts) {
  f.validate();
  check_evaluable(p);

  const auto integrand = [&](double x, std::span<double> out) {
    const SpectralDensities d = densities_at(p, f.delay, x);
    out[0] = d.n1;
    out[1] = d.n2;
    out[2] = d.c12.real();
    out[3] = d.c12.imag();
  };
  const auto bp = band_breakpoints(f);
  const QuadratureResult q = integrate_adaptive(integrand, 4, f.lo(), f.hi(), bp,
                                                opts, seed_width(p, f));

  MomentSet m;
  const double inv_sigma = 1.0 / f.bandwidth;
  m.n1 = q.value[0] * inv_sigma;
  m.n2 = q.value[1] * inv_sigma;
  m.c12 = complex{q.value[2], q.value[3]} * inv_sigma;
  // m11, m22, x12: band integrals of the anomalous contraction, which is
  // identically zero for thermal inputs (see kAnomalousInputsVanish).
  m.m11 = m.m22 = m.x12 = complex{0.0, 0.0};

  // Physicality guards: photon numbers are nonnegative up to quadrature
  // noise, and the correlator obeys |c12|^2 <= (n1+1)(n2+1).
  const double noise = std::max(opts.abs_tol, 1e3 * opts.rel_tol * std::max(m.n1, m.n2));
  if (m.n1 < -noise || m.n2 < -noise) {
    throw UnphysicalError("moments: negative filtered photon number");
  }
  m.n1 = std::max(0.0, m.n1);
  m.n2 = std::max(0.0, m.n2);
  const double bound = (m.n1 + 1.0) * (m.n2 + 1.0);
  if (std::norm(m.c12) > bound * (1.0 + 1e-9) + noise) {
    std::ostringstream msg;
    msg << "moments: |c12|^2 = " << std::norm(m.c12)
        << " exceeds (n1+1)(n2+1) = " << bound;
    throw UnphysicalError(msg.str());
  }
  return m;
}

double correlator_modulus(const SystemParams& p, const FilterSpec& f,
                          const QuadratureOptions& opts) {
  return std::abs(moments(p, f, opts).c12);
}

std::array<double, 2> filtered_commutators(const SystemParams& p, const FilterSpec& f,
                                           const QuadratureOptions& opts) {
  f.validate();
  check_evaluable(p);
  const auto integrand = [&](double x, std::span<double> out) {
    const SpectralDensities d = densities_at(p, f.delay, x);
    out[0] = d.comm1;
    out[1] = d.comm2;
  };
  const auto bp = band_breakpoints(f);
  const QuadratureResult q = integrate_adaptive(integrand, 2, f.lo(), f.hi(), bp,
                                                opts, seed_width(p, f));
  return {q.value[0] / f.bandwidth, q.value[1] / f.bandwidth};
}

BandSpectrum::BandSpectrum(const SystemParams& p, const FilterSpec& band,
                           double tau_max, const QuadratureOptions& opts)
    : tau_max_(std::abs(tau_max)) {
  band.validate();
  check_evaluable(p);

  // Adapt a grid to the zero-delay cross spectrum, then cap panel widths so
  // the fastest phase e^{-i w tau_max} stays well resolved by the panel rule.
  const auto integrand = [&](double x, std::span<double> out) {
    const SpectralDensities d = densities_at(p, 0.0, x);
    out[0] = d.c12.real();
    out[1] = d.c12.imag();
    out[2] = d.n1;
  };
  const auto bp = band_breakpoints(band);
  QuadratureResult q = integrate_adaptive(integrand, 3, band.lo(), band.hi(), bp,
                                          opts, seed_width(p, band));

  const double phase_cap = tau_max_ > 0.0 ? 4.0 / tau_max_
                                          : std::numeric_limits<double>::infinity();
  std::vector<double> edges;
  edges.push_back(q.edges.front());
  for (size_t i = 0; i + 1 < q.edges.size(); ++i) {
    const double lo = q.edges[i];
    const double hi = q.edges[i + 1];
    const double ratio = (hi - lo) / phase_cap;
    const int parts = std::isfinite(ratio)
                          ? std::clamp(static_cast<int>(std::ceil(ratio)), 1, 1 << 14)
                          : 1;
    for (int k = 1; k <= parts; ++k) edges.push_back(lo + (hi - lo) * k / parts);
  }

  const GaussRule& rule = gauss_legendre(15);
  const double inv_sigma = 1.0 / band.bandwidth;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    const double half = 0.5 * (edges[i + 1] - edges[i]);
    const double mid = 0.5 * (edges[i + 1] + edges[i]);
    for (size_t k = 0; k < rule.node.size(); ++k) {
      const double x = mid + half * rule.node[k];
      const SpectralDensities d = densities_at(p, 0.0, x);
      node_.push_back(x);
      weight_.push_back(half * rule.weight[k] * inv_sigma);
      cross_.push_back(d.c12);
      if (std::abs(d.c12) > 1e-300) flat_ = false;
    }
  }
}

double BandSpectrum::correlator_modulus(double tau) const {
  // Extended-precision phase accumulation: delay optimization compares
  // objective values whose differences sit many digits below the sum itself.
  long double re = 0.0L, im = 0.0L;
  for (size_t k = 0; k < node_.size(); ++k) {
    const long double phase = -static_cast<long double>(node_[k]) * tau;
    const long double c = std::cos(phase), s = std::sin(phase);
    const long double fr = cross_[k].real(), fi = cross_[k].imag();
    const long double w = weight_[k];
    re += w * (fr * c - fi * s);
    im += w * (fr * s + fi * c);
  }
  return static_cast<double>(std::sqrt(re * re + im * im));
}

}  // namespace optomech
