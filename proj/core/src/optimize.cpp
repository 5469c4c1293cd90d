#include "optomech/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace optomech {

namespace {

constexpr double kGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2

double reference_kappa(const SystemParams& p) { return p.kappa1; }

// Analytic delay for the scan-range heuristic and DelayMode::analytic. The
// closed form is derived for equal cavity decays; the mean keeps it defined
// elsewhere (callers annotate unequal-decay use).
double analytic_tau(const SystemParams& p, const FilterSpec& f) {
  AnalyticInputs a;
  a.kappa = 0.5 * (p.kappa1 + p.kappa2);
  a.sigma = f.bandwidth;
  a.g1 = std::max(p.g1, 1e-300);
  a.g2 = p.g2;
  return tau_opt(a);
}

}  // namespace

const char* to_string(DelayMode m) {
  switch (m) {
    case DelayMode::zero: return "zero";
    case DelayMode::analytic: return "analytic";
    case DelayMode::numeric: return "numeric";
  }
  return "unknown";
}

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::g2_over_g1: return "g2_over_g1";
    case SweepVariable::g1_over_kappa: return "g1_over_kappa";
    case SweepVariable::omega_over_kappa: return "omega_over_kappa";
    case SweepVariable::tau: return "tau";
  }
  return "unknown";
}

const char* to_string(CouplingRule r) {
  switch (r) {
    case CouplingRule::fixed_g2: return "fixed";
    case CouplingRule::equal: return "equal";
    case CouplingRule::large_bw_opt: return "large_bw";
    case CouplingRule::small_bw_opt: return "small_bw";
    case CouplingRule::delay_opt: return "delay_opt";
  }
  return "unknown";
}

GoldenResult golden_max(const std::function<double(double)>& f, double lo,
                        double hi, double xtol) {
  if (!(lo < hi)) throw std::invalid_argument("golden_max: need lo < hi");
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int evals = 2;
  while (b - a > xtol && evals < 400) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    }
    ++evals;
  }
  GoldenResult r;
  if (f1 >= f2) {
    r.x = x1;
    r.fx = f1;
  } else {
    r.x = x2;
    r.fx = f2;
  }
  r.evaluations = evals;
  return r;
}

double tau_opt_numeric(const SystemParams& p, const FilterSpec& band,
                       const TauOptOptions& opts) {
  band.validate();
  // The analytic scale diverges as both couplings vanish; the objective is
  // then identically zero and the flatness check below reports NoMaximum.
  double tau_scale = std::abs(analytic_tau(p, band)) + 1.0 / band.bandwidth;
  if (!std::isfinite(tau_scale)) tau_scale = 1.0 / band.bandwidth;
  const double range = opts.scan_factor * tau_scale;

  BandSpectrum spectrum(p, band, range, opts.quad);
  if (spectrum.flat()) {
    throw NoMaximumError("tau_opt_numeric: |<D1 D2>| vanishes for all delays");
  }

  const int n = std::max(3, opts.scan_points);
  double best_x = -range, best_f = -1.0, worst_f = std::numeric_limits<double>::max();
  int best_k = 0;
  std::vector<double> xs(n), fs(n);
  for (int k = 0; k < n; ++k) {
    xs[k] = -range + 2.0 * range * k / (n - 1);
    fs[k] = spectrum.correlator_modulus(xs[k]);
    if (fs[k] > best_f) {
      best_f = fs[k];
      best_x = xs[k];
      best_k = k;
    }
    worst_f = std::min(worst_f, fs[k]);
  }
  if (best_f <= 1e-250 || best_f - worst_f <= 1e-12 * best_f) {
    throw NoMaximumError("tau_opt_numeric: objective flat to tolerance");
  }

  // The objective sharpens dramatically for strongly entangled outputs (the
  // symplectic eigenvalue responds to correlator changes at the 1e-15
  // relative level), so the refinement floor sits far below the scan scale.
  const double lo = xs[std::max(0, best_k - 1)];
  const double hi = xs[std::min(n - 1, best_k + 1)];
  const double xtol = opts.rel_tol * std::max(std::abs(best_x), 1e-4 * range);
  const GoldenResult g = golden_max(
      [&](double tau) { return spectrum.correlator_modulus(tau); }, lo, hi, xtol);
  return g.fx >= best_f ? g.x : best_x;
}

CouplingOptimum g2_opt_numeric(const SystemParams& base, const FilterSpec& f,
                               DelayMode delay_mode, const G2OptOptions& opts) {
  f.validate();
  if (!(base.g1 > 0.0)) {
    throw std::invalid_argument("g2_opt_numeric: g1 must be > 0");
  }

  const auto delay_for = [&](const SystemParams& p) -> double {
    switch (delay_mode) {
      case DelayMode::zero: return 0.0;
      case DelayMode::analytic: return analytic_tau(p, f);
      case DelayMode::numeric:
        try {
          return tau_opt_numeric(p, f, opts.tau);
        } catch (const NoMaximumError&) {
          return 0.0;
        }
    }
    return 0.0;
  };

  const auto objective = [&](double g2) -> double {
    SystemParams p = base;
    p.g2 = g2;
    if (check_stability(p) == StabilityVerdict::unstable) {
      return -std::numeric_limits<double>::infinity();
    }
    try {
      FilterSpec fd = f;
      fd.delay = delay_for(p);
      return output_entanglement(p, fd, opts.quad).e_n;
    } catch (const NearSingularError&) {
      return -std::numeric_limits<double>::infinity();
    } catch (const UnphysicalError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  const int n = std::max(4, opts.coarse_points);
  double best_f = -std::numeric_limits<double>::infinity();
  int best_k = -1;
  std::vector<double> xs(n);
  for (int k = 0; k < n; ++k) {
    xs[k] = base.g1 * (k + 1) / n;
    const double fx = objective(xs[k]);
    if (fx > best_f) {
      best_f = fx;
      best_k = k;
    }
  }
  if (best_k < 0 || best_f <= 1e-14) {
    throw NoMaximumError("g2_opt_numeric: E_N vanishes over the stable range");
  }

  const double lo = best_k > 0 ? xs[best_k - 1] : 0.5 * xs[0];
  const double hi = best_k + 1 < n ? xs[best_k + 1] : xs[n - 1];
  const GoldenResult g =
      golden_max(objective, lo, hi, opts.rel_tol * base.g1);

  CouplingOptimum out;
  if (g.fx >= best_f) {
    out.g2 = g.x;
    out.e_n = g.fx;
  } else {
    out.g2 = xs[best_k];
    out.e_n = best_f;
  }
  // Recompute once at the winner so tau_used matches the reported point.
  SystemParams p = base;
  p.g2 = out.g2;
  FilterSpec fd = f;
  fd.delay = delay_for(p);
  out.tau_used = fd.delay;
  out.e_n = output_entanglement(p, fd, opts.quad).e_n;
  return out;
}

void SweepSpec::validate() const {
  params.validate();
  filter.validate();
  if (!explicit_axis.empty()) {
    if (explicit_axis.size() < 2) {
      throw std::invalid_argument("SweepSpec: explicit_axis needs >= 2 points");
    }
    for (size_t i = 0; i + 1 < explicit_axis.size(); ++i) {
      if (!(explicit_axis[i] < explicit_axis[i + 1])) {
        throw std::invalid_argument(
            "SweepSpec: explicit_axis must be strictly increasing");
      }
    }
  } else {
    if (!(lo < hi)) throw std::invalid_argument("SweepSpec: need lo < hi");
    if (points < 2) throw std::invalid_argument("SweepSpec: need points >= 2");
    if (log_spacing && !(lo > 0.0)) {
      throw std::invalid_argument("SweepSpec: log spacing needs lo > 0");
    }
  }
  if (variable == SweepVariable::g2_over_g1 &&
      coupling_rule != CouplingRule::fixed_g2) {
    throw std::invalid_argument(
        "SweepSpec: coupling_rule must be 'fixed' when sweeping g2_over_g1");
  }
}

std::vector<double> SweepSpec::axis() const {
  if (!explicit_axis.empty()) return explicit_axis;
  std::vector<double> xs(points);
  for (int k = 0; k < points; ++k) {
    const double t = static_cast<double>(k) / (points - 1);
    xs[k] = log_spacing ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  return xs;
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<double> xs = spec.axis();

  SweepResult result;
  result.spec = spec;
  result.rows.resize(xs.size());

  const auto evaluate_point = [&](size_t idx) {
    SweepRow row;
    row.x = xs[idx];
    row.e_n = std::numeric_limits<double>::quiet_NaN();
    row.nu_minus = std::numeric_limits<double>::quiet_NaN();

    SystemParams p = spec.params;
    FilterSpec f = spec.filter;
    const double kref = reference_kappa(p);
    switch (spec.variable) {
      case SweepVariable::g2_over_g1: p.g2 = row.x * p.g1; break;
      case SweepVariable::g1_over_kappa: p.g1 = row.x * kref; break;
      case SweepVariable::omega_over_kappa: f.center = row.x * kref; break;
      case SweepVariable::tau: f.delay = row.x; break;
    }

    std::string notes;
    const auto annotate = [&notes](const std::string& s) {
      if (s.empty()) return;
      if (!notes.empty()) notes += "; ";
      notes += s;
    };

    try {
      if (spec.variable != SweepVariable::g2_over_g1) {
        RegimeNote note;
        switch (spec.coupling_rule) {
          case CouplingRule::fixed_g2: break;
          case CouplingRule::equal: p.g2 = p.g1; break;
          case CouplingRule::large_bw_opt:
            p.g2 = g2_opt_large_bw(p.g1, kref, f.bandwidth);
            break;
          case CouplingRule::small_bw_opt:
            p.g2 = g2_opt_small_bw(p.g1, kref, f.bandwidth, &note);
            break;
          case CouplingRule::delay_opt:
            p.g2 = g2_opt_with_delay(p.g1, kref, f.bandwidth, &note);
            break;
        }
        annotate(note);
      }

      row.verdict = check_stability(p);
      if (row.verdict == StabilityVerdict::unstable) {
        annotate("unstable: E_N undefined");
        result.rows[idx] = std::move(row);
        result.rows[idx].annotations = notes;
        return;
      }
      if (row.verdict == StabilityVerdict::marginal) annotate("marginal stability");

      switch (spec.delay_mode) {
        case DelayMode::zero:
          if (spec.variable != SweepVariable::tau) f.delay = 0.0;
          break;
        case DelayMode::analytic:
          f.delay = analytic_tau(p, f);
          if (!std::isfinite(f.delay)) {
            f.delay = 0.0;
            annotate("analytic delay undefined at vanishing couplings; tau = 0");
          }
          if (std::abs(p.kappa1 - p.kappa2) > 1e-12 * p.kappa1) {
            annotate("analytic delay assumes equal cavity decays");
          }
          break;
        case DelayMode::numeric:
          try {
            f.delay = tau_opt_numeric(p, f, spec.tau);
          } catch (const NoMaximumError&) {
            f.delay = 0.0;
            annotate("delay objective flat; tau = 0");
          }
          break;
      }
      row.tau_used = f.delay;

      const MomentSet m = moments(p, f, spec.quad);
      const EntanglementResult ent = entanglement_from_moments(m);
      if (ent.precision_limited) {
        annotate("E_N at the double-precision resolution ceiling");
      }
      row.e_n = ent.e_n;
      row.nu_minus = ent.nu_minus;
      row.c12_mod = std::abs(m.c12);
      row.n1 = m.n1;
      row.n2 = m.n2;
      row.evaluated = true;
    } catch (const DomainError& e) {
      row.error = e.what();
    } catch (const NearSingularError& e) {
      row.error = e.what();
    } catch (const QuadratureFailure& e) {
      row.error = e.what();
    } catch (const UnphysicalError& e) {
      row.error = e.what();
    } catch (const InstabilityError& e) {
      row.error = e.what();
    } catch (const std::exception& e) {
      // Catch-all: a per-point failure must never abort the sweep (or, worse,
      // escape a worker thread).
      row.error = e.what();
    }
    row.annotations = notes;
    result.rows[idx] = std::move(row);
  };

  int workers = spec.workers > 0
                    ? spec.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, 64);
  workers = std::min<int>(workers, static_cast<int>(xs.size()));

  if (workers <= 1) {
    for (size_t i = 0; i < xs.size(); ++i) evaluate_point(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < xs.size(); i = next.fetch_add(1)) {
          evaluate_point(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return result;
}

}  // namespace optomech
