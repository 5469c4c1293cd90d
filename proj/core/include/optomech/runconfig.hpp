#ifndef OPTOMECH_RUNCONFIG_HPP
#define OPTOMECH_RUNCONFIG_HPP

#include <string>
#include <vector>

#include "optomech/optimize.hpp"

namespace optomech {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class RunMode { point, sweep, optimize, figure };
const char* to_string(RunMode m);

// Delay handling for single-point evaluation: `fixed` uses the configured
// tau, the others override it.
enum class PointDelay { fixed, analytic, numeric };
const char* to_string(PointDelay d);

// Fully resolved run configuration. All rates are configured in units of
// kappa, with kappa itself in units of gamma (gamma = 1 by construction);
// tau is configured in units of 1/kappa. Absolute-unit structs for the
// library come out of params()/filter()/sweep().
struct RunConfig {
  RunMode mode{RunMode::point};
  std::string output_dir{"."};
  bool emit_svg{false};
  bool json{false};
  int workers{0};
  std::string figure_id;  // 2a, 2b, 2c, 3a, 3b, 3c

  // [params]
  double kappa{1e5};         // kappa / gamma
  double kappa1_ratio{1.0};  // kappa1 / kappa
  double kappa2_ratio{1.0};  // kappa2 / kappa
  double g1_ratio{10.0};     // g1 / kappa
  double g2_ratio{9.0};      // g2 / kappa
  double n_m{0.0};
  double n_cav1{0.0};
  double n_cav2{0.0};

  // [filter]
  double omega_ratio{0.0};  // center / kappa
  double sigma_ratio{1.0};  // bandwidth / kappa
  double tau_kappa{0.0};    // delay * kappa
  PointDelay point_delay{PointDelay::fixed};

  // [sweep]
  SweepVariable variable{SweepVariable::g2_over_g1};
  double lo{0.5};
  double hi{0.999};
  int points{201};
  bool log_spacing{false};
  DelayMode delay_mode{DelayMode::zero};
  CouplingRule coupling_rule{CouplingRule::fixed_g2};

  // [optimize]
  std::string target{"g2"};  // g2 | tau

  SystemParams params() const;
  FilterSpec filter() const;  // center/bandwidth/delay in absolute units
  SweepSpec sweep() const;

  // Loads a key-value config file (empty path: defaults only) and applies
  // "section.key=value" overrides. Unknown fields, fields from sections not
  // used by the mode, and malformed values raise ConfigError naming the
  // offending field.
  static RunConfig load(const std::string& path,
                        const std::vector<std::string>& overrides);

  // Round-trippable serialization: parsing the output reproduces the config.
  std::string serialize() const;
};

}  // namespace optomech

#endif  // OPTOMECH_RUNCONFIG_HPP
