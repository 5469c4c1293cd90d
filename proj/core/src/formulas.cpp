#include "optomech/formulas.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace optomech {

namespace {

void require_positive(double x, const char* name) {
  if (!(std::isfinite(x) && x > 0.0)) {
    std::ostringstream msg;
    msg << name << " must be > 0";
    throw std::invalid_argument(msg.str());
  }
}

void note_regime(RegimeNote* note, const std::string& text) {
  if (!note) return;
  if (!note->empty()) *note += "; ";
  *note += text;
}

}  // namespace

void AnalyticInputs::validate() const {
  require_positive(kappa, "AnalyticInputs.kappa");
  require_positive(sigma, "AnalyticInputs.sigma");
  require_positive(g1, "AnalyticInputs.g1");
  if (!(std::isfinite(g2) && g2 >= 0.0)) {
    throw std::invalid_argument("AnalyticInputs.g2 must be >= 0");
  }
}

double arctan_combination(double sigma, double kappa) {
  require_positive(sigma, "sigma");
  require_positive(kappa, "kappa");
  const double t = sigma / kappa;
  const double k3 = kappa * kappa * kappa;
  if (t >= 0.5) {
    const double alpha = 5.0 + 3.0 * t * t;
    return k3 * (15.0 * t + 4.0 * t * t * t - 3.0 * alpha * std::atan(t));
  }
  // f(t) = -3 sum_{m>=3} (-1)^m [5/(2m+1) - 3/(2m-1)] t^(2m+1); leading term
  // 12 t^7 / 35.
  double sum = 0.0;
  double t_pow = t * t * t * t * t * t * t;  // t^7
  double sgn = -1.0;                         // (-1)^m at m = 3
  for (int m = 3; m < 80; ++m) {
    const double c = sgn * (5.0 / (2.0 * m + 1.0) - 3.0 / (2.0 * m - 1.0));
    const double term = -3.0 * c * t_pow;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    t_pow *= t * t;
    sgn = -sgn;
  }
  return k3 * sum;
}

double tau_opt(const AnalyticInputs& a) {
  a.validate();
  const double num = 20.0 * (a.g2 * a.g2 - a.g1 * a.g1) +
                     5.0 * a.kappa * a.kappa + 3.0 * a.sigma * a.sigma;
  const double den = 10.0 * (a.g1 * a.g1 + a.g2 * a.g2) * a.kappa;
  return num / den;
}

double g2_opt_large_bw(double g1, double kappa, double sigma) {
  require_positive(g1, "g1");
  require_positive(kappa, "kappa");
  require_positive(sigma, "sigma");
  const double radicand = 4.0 * g1 * g1 - kappa * kappa - 0.6 * sigma * sigma;
  if (radicand <= 0.0) {
    std::ostringstream msg;
    msg << "g2_opt_large_bw: 4 g1^2 - kappa^2 - 3 sigma^2/5 = " << radicand
        << " <= 0; drive too weak for this regime";
    throw DomainError(msg.str());
  }
  return 0.5 * std::sqrt(radicand);
}

double g2_opt_small_bw(double g1, double kappa, double sigma, RegimeNote* note) {
  require_positive(g1, "g1");
  require_positive(kappa, "kappa");
  require_positive(sigma, "sigma");
  if (sigma >= sigma_boundary(g1, kappa)) {
    note_regime(note, "sigma at or above the small-bandwidth boundary sigma_b");
  }
  constexpr double root4_3 = 1.3160740129524924;  // 3^(1/4)
  return g1 + g1 * sigma / (2.0 * std::sqrt(3.0) * kappa) -
         std::sqrt(kappa * sigma) / (2.0 * root4_3);
}

double sigma_boundary(double g1, double kappa) {
  require_positive(g1, "g1");
  require_positive(kappa, "kappa");
  return std::sqrt(3.0) * kappa * kappa * kappa / (4.0 * g1 * g1);
}

double saturation_threshold(double sigma, double kappa) {
  require_positive(sigma, "sigma");
  require_positive(kappa, "kappa");
  const double k = kappa, s = sigma;
  return std::sqrt(k * k * k * k * k / (std::sqrt(3.0) * s * s * s));
}

double e_n_saturation(double sigma, double kappa) {
  require_positive(sigma, "sigma");
  require_positive(kappa, "kappa");
  // Dimensionless in t = sigma/kappa.
  const double t = sigma / kappa;
  const double alpha_t = 5.0 + 3.0 * t * t;                     // alpha / kappa^2
  const double f_t = arctan_combination(sigma, kappa) / (kappa * kappa * kappa);
  const double inside = (1.0 + t * t) * f_t * f_t / (9.0 * t * t * alpha_t * alpha_t);
  return -0.5 * std::log(inside);
}

double e_n_saturation_small_sigma(double sigma, double kappa) {
  require_positive(sigma, "sigma");
  require_positive(kappa, "kappa");
  const double t = kappa / sigma;
  return std::log(175.0 * std::pow(t, 6) / 4.0);
}

double g2_opt_with_delay(double g1, double kappa, double sigma, RegimeNote* note) {
  require_positive(g1, "g1");
  require_positive(kappa, "kappa");
  require_positive(sigma, "sigma");
  if (g1 < 5.0 * std::max(kappa, sigma)) {
    note_regime(note, "g1 not large against kappa and sigma; formula regime g1 >> kappa, sigma");
  }
  const double t = sigma / kappa;
  const double alpha_t = 5.0 + 3.0 * t * t;
  const double f_t = arctan_combination(sigma, kappa) / (kappa * kappa * kappa);
  const double denom_t = 6.0 * t - 3.0 * std::atan(t);
  const double core = alpha_t * f_t / (400.0 * denom_t);  // (core)^(1/4) in kappa units
  return g1 - kappa * std::pow(core, 0.25);
}

double e_n_opt_with_delay(double g1, double kappa, double sigma, RegimeNote* note) {
  require_positive(g1, "g1");
  require_positive(kappa, "kappa");
  require_positive(sigma, "sigma");
  if (g1 < 5.0 * std::max(kappa, sigma)) {
    note_regime(note, "g1 not large against kappa and sigma; formula regime g1 >> kappa, sigma");
  }
  const double t = sigma / kappa;
  const double g = g1 / kappa;
  const double alpha_t = 5.0 + 3.0 * t * t;
  const double f_t = arctan_combination(sigma, kappa) / (kappa * kappa * kappa);
  const double inside =
      alpha_t * (2.0 * t - std::atan(t)) * f_t / (4800.0 * g * g * g * g * t * t);
  return -0.5 * std::log(inside);
}

}  // namespace optomech
