#ifndef OPTOMECH_OPTIMIZE_HPP
#define OPTOMECH_OPTIMIZE_HPP

#include <functional>
#include <string>
#include <vector>

#include "optomech/entanglement.hpp"
#include "optomech/formulas.hpp"

namespace optomech {

// How the emission delay of mode 1 is chosen at each evaluation point.
enum class DelayMode { zero, analytic, numeric };
const char* to_string(DelayMode m);

// Golden-section maximization on [lo, hi], assuming a unimodal objective.
// The coarse-scan-then-refine callers guard against multimodality; the
// brute-force agreement tests enforce it on every shipped configuration.
struct GoldenResult {
  double x{};
  double fx{};
  int evaluations{};
};
GoldenResult golden_max(const std::function<double(double)>& f, double lo,
                        double hi, double xtol);

struct TauOptOptions {
  double scan_factor = 10.0;  // scan range = factor * (|analytic tau| + 1/sigma)
  int scan_points = 801;
  double rel_tol = 1e-6;
  QuadratureOptions quad;
};

// Numerically optimal delay: maximizes |<D1 D2>| over tau by a coarse scan
// over [-R, R], R = scan_factor * (|analytic tau_opt| + 1/bandwidth),
// followed by golden-section refinement. The delay field of `band` is
// ignored. Throws NoMaximumError when the objective is flat (e.g. g2 = 0).
double tau_opt_numeric(const SystemParams& p, const FilterSpec& band,
                       const TauOptOptions& opts = {});

struct G2OptOptions {
  int coarse_points = 64;
  double rel_tol = 1e-6;
  QuadratureOptions quad;
  TauOptOptions tau;
};

struct CouplingOptimum {
  double g2{};
  double e_n{};
  double tau_used{};
};

// Maximizes E_N over g2 in (0, g1], respecting stability, with the delay
// chosen per delay_mode at every evaluation. The g2 field of `base` is
// ignored. Throws NoMaximumError when E_N vanishes throughout.
CouplingOptimum g2_opt_numeric(const SystemParams& base, const FilterSpec& f,
                               DelayMode delay_mode, const G2OptOptions& opts = {});

enum class SweepVariable { g2_over_g1, g1_over_kappa, omega_over_kappa, tau };
const char* to_string(SweepVariable v);

// How g2 tracks the swept variable (used when g2 itself is not the variable).
enum class CouplingRule { fixed_g2, equal, large_bw_opt, small_bw_opt, delay_opt };
const char* to_string(CouplingRule r);

struct SweepSpec {
  SweepVariable variable{SweepVariable::g2_over_g1};
  double lo{};
  double hi{};
  int points{2};
  bool log_spacing{false};
  // When non-empty, the exact sample positions (sorted, strictly increasing);
  // lo/hi/points/log_spacing are ignored. Figure builders use this to refine
  // the grid around analytically known needle-sharp optima.
  std::vector<double> explicit_axis;
  SystemParams params;  // all non-swept quantities
  FilterSpec filter;
  DelayMode delay_mode{DelayMode::zero};
  CouplingRule coupling_rule{CouplingRule::fixed_g2};
  int workers{0};  // 0: hardware concurrency
  QuadratureOptions quad;
  TauOptOptions tau;

  void validate() const;
  std::vector<double> axis() const;  // endpoint-inclusive sample positions
};

struct SweepRow {
  double x{};
  bool evaluated{false};
  double e_n{};       // NaN when not evaluated
  double nu_minus{};
  double tau_used{};
  double c12_mod{};
  double n1{};
  double n2{};
  StabilityVerdict verdict{StabilityVerdict::stable};
  std::string annotations;  // regime notes; never aborts the sweep
  std::string error;        // per-point numerical failure, if any
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // one per requested point, in axis order
};

// Evaluates the full moments -> E_N pipeline at every point of the sweep.
// Unstable points are flagged, never silently dropped; per-point errors are
// recorded in the row. Points are evaluated concurrently up to `workers`;
// row order and content are deterministic regardless of scheduling.
SweepResult run_sweep(const SweepSpec& spec);

}  // namespace optomech

#endif  // OPTOMECH_OPTIMIZE_HPP
