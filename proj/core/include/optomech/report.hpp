#ifndef OPTOMECH_REPORT_HPP
#define OPTOMECH_REPORT_HPP

#include <optional>
#include <string>

#include "optomech/entanglement.hpp"
#include "optomech/runconfig.hpp"

namespace optomech {

// Closed-form predictions evaluated alongside a numerical point (defined for
// equal cavity decays; absent otherwise).
struct AnalyticBlock {
  double tau_opt{};
  std::optional<double> g2_opt_large_bw;
  double g2_opt_small_bw{};
  double sigma_boundary{};
  double saturation_threshold{};
  double e_n_saturation{};
  double g2_opt_with_delay{};
  double e_n_opt_with_delay{};
  std::string notes;
};

struct PointReport {
  RunConfig config;
  StabilityVerdict verdict{};
  double tau_used{};
  MomentSet moments;
  double e_n{};
  double nu_minus{};
  std::array<double, 2> commutators{};
  std::optional<AnalyticBlock> analytic;  // equal-kappa systems only
  std::string annotations;
};

// Builds the report for one parameter point (delay per config.point_delay).
// Throws InstabilityError on unstable systems.
PointReport evaluate_point(const RunConfig& config);

std::string render_text(const PointReport& r);
std::string render_json(const PointReport& r);

}  // namespace optomech

#endif  // OPTOMECH_REPORT_HPP
