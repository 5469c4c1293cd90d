#include "optomech/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace optomech {

namespace {

constexpr int kOrder = 15;  // panel rule order

GaussRule make_gauss_legendre(int n) {
  GaussRule rule;
  rule.node.resize(n);
  rule.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev seed, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.node[i] = x;
    rule.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

struct Panel {
  double a, b;
  std::vector<double> value;  // per-component GL value over [a, b]
  std::vector<double> l1;     // per-component integral of |f| (scale reference)
  std::vector<double> err;    // |coarse - (left + right)| per component
  bool refinable = true;
};

void eval_panel(const VectorIntegrand& f, int n, double a, double b,
                const GaussRule& rule, std::vector<double>& out,
                std::vector<double>& out_l1, std::vector<double>& scratch) {
  out.assign(n, 0.0);
  out_l1.assign(n, 0.0);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  scratch.resize(n);
  for (int k = 0; k < kOrder; ++k) {
    const double x = mid + half * rule.node[k];
    f(x, std::span<double>(scratch));
    const double w = half * rule.weight[k];
    for (int c = 0; c < n; ++c) {
      out[c] += w * scratch[c];
      out_l1[c] += w * std::abs(scratch[c]);
    }
  }
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

QuadratureResult integrate_adaptive(const VectorIntegrand& f, int n_components,
                                    double a, double b,
                                    std::span<const double> breakpoints,
                                    const QuadratureOptions& opts,
                                    double max_seed_width) {
  if (!(a < b)) throw std::invalid_argument("integrate_adaptive: need a < b");
  if (n_components <= 0) throw std::invalid_argument("integrate_adaptive: n_components");

  const GaussRule& rule = gauss_legendre(kOrder);

  // Seed edges: interval ends, interior breakpoints, optional width cap.
  std::vector<double> edges{a, b};
  for (double x : breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (max_seed_width > 0.0) {
    std::vector<double> dense;
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
      dense.push_back(edges[i]);
      const double w = edges[i + 1] - edges[i];
      const int parts = std::max(1, static_cast<int>(std::ceil(w / max_seed_width)));
      for (int k = 1; k < parts; ++k) dense.push_back(edges[i] + w * k / parts);
    }
    dense.push_back(edges.back());
    edges.swap(dense);
  }

  std::vector<double> scratch;
  std::vector<double> total(n_components, 0.0);
  std::vector<double> total_l1(n_components, 0.0);
  std::vector<double> total_err(n_components, 0.0);

  // Build a panel with its bisection-based error estimate. The refined value
  // (sum of halves) replaces the coarse one.
  auto make_panel = [&](double lo, double hi) {
    Panel p;
    p.a = lo;
    p.b = hi;
    std::vector<double> coarse, coarse_l1;
    eval_panel(f, n_components, lo, hi, rule, coarse, coarse_l1, scratch);
    const double mid = 0.5 * (lo + hi);
    const double width = hi - lo;
    const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
    if (width <= scale * 1e-15 || mid <= lo || mid >= hi) {
      // Cannot bisect further in double precision.
      p.value = std::move(coarse);
      p.l1 = std::move(coarse_l1);
      p.err.assign(n_components, 0.0);
      p.refinable = false;
      return p;
    }
    std::vector<double> left, right, left_l1, right_l1;
    eval_panel(f, n_components, lo, mid, rule, left, left_l1, scratch);
    eval_panel(f, n_components, mid, hi, rule, right, right_l1, scratch);
    p.value.resize(n_components);
    p.l1.resize(n_components);
    p.err.resize(n_components);
    for (int c = 0; c < n_components; ++c) {
      p.value[c] = left[c] + right[c];
      p.l1[c] = left_l1[c] + right_l1[c];
      p.err[c] = std::abs(coarse[c] - p.value[c]);
    }
    return p;
  };

  std::vector<Panel> panels;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    panels.push_back(make_panel(edges[i], edges[i + 1]));
  }

  // The relative tolerance is anchored to the L1 size of each component, not
  // the signed integral: odd components cancel to ~0 over symmetric bands and
  // would otherwise demand unattainable absolute accuracy. The third term is
  // the double-precision noise floor of summing evaluations of that size;
  // refinement can never push the estimated error below it.
  constexpr double kNoiseFactor = 50.0 * std::numeric_limits<double>::epsilon();
  auto tolerance = [&](int c) {
    return std::max({opts.abs_tol, opts.rel_tol * total_l1[c],
                     kNoiseFactor * total_l1[c]});
  };
  auto add_totals = [&](const Panel& p, double sign) {
    for (int c = 0; c < n_components; ++c) {
      total[c] += sign * p.value[c];
      total_l1[c] += sign * p.l1[c];
      total_err[c] += sign * p.err[c];
    }
  };
  auto priority_of = [&](const Panel& p) {
    if (!p.refinable) return -1.0;
    double worst = 0.0;
    for (int c = 0; c < n_components; ++c) {
      worst = std::max(worst, p.err[c] / tolerance(c));
    }
    return worst;
  };
  auto converged = [&] {
    for (int c = 0; c < n_components; ++c) {
      if (total_err[c] > tolerance(c)) return false;
    }
    return true;
  };
  auto error_norm = [&] {
    double worst = 0.0;
    for (int c = 0; c < n_components; ++c) {
      worst = std::max(worst, total_err[c] / tolerance(c));
    }
    return worst;
  };

  for (const Panel& p : panels) add_totals(p, +1.0);

  // Plateau detector: when many refinements in a row fail to lower the error
  // estimate, the evaluation noise floor has been reached (the solve noise is
  // condition-amplified near marginal couplings) and further subdivision only
  // burns budget. The result is returned with its honest error estimate.
  double best_norm = std::numeric_limits<double>::infinity();
  int stale = 0;
  constexpr int kPlateauWindow = 128;

  while (!converged()) {
    const double now = error_norm();
    if (now < 0.99 * best_norm) {
      best_norm = now;
      stale = 0;
    } else if (++stale > kPlateauWindow) {
      break;
    }
    if (static_cast<int>(panels.size()) >= opts.max_panels) {
      std::ostringstream msg;
      msg << "integrate_adaptive: budget of " << opts.max_panels
          << " panels exhausted on [" << a << ", " << b << "]";
      throw QuadratureFailure(msg.str());
    }
    // Refine the worst panel (ties broken by position for determinism).
    int worst = -1;
    double worst_pri = 0.0;
    for (size_t i = 0; i < panels.size(); ++i) {
      const double pri = priority_of(panels[i]);
      if (pri > worst_pri || (pri == worst_pri && worst >= 0 && pri > 0.0 &&
                              panels[i].a < panels[worst].a)) {
        worst = static_cast<int>(i);
        worst_pri = pri;
      }
    }
    if (worst < 0 || worst_pri <= 0.0) {
      // Nothing refinable left; accept if within 100x tolerance headroom,
      // otherwise report failure.
      bool close_enough = true;
      for (int c = 0; c < n_components; ++c) {
        if (total_err[c] > 100.0 * tolerance(c)) close_enough = false;
      }
      if (close_enough) break;
      throw QuadratureFailure(
          "integrate_adaptive: error estimate stuck above tolerance with no "
          "refinable panels left");
    }
    Panel old = std::move(panels[worst]);
    add_totals(old, -1.0);
    const double mid = 0.5 * (old.a + old.b);
    Panel left = make_panel(old.a, mid);
    Panel right = make_panel(mid, old.b);
    add_totals(left, +1.0);
    add_totals(right, +1.0);
    panels[worst] = std::move(left);
    panels.push_back(std::move(right));
  }

  QuadratureResult res;
  res.value = total;
  res.error = total_err;
  res.panels = static_cast<int>(panels.size());
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  res.edges.reserve(panels.size() + 1);
  res.edges.push_back(panels.front().a);
  for (const Panel& p : panels) res.edges.push_back(p.b);
  return res;
}

}  // namespace optomech
