#ifndef OPTOMECH_QUADRATURE_HPP
#define OPTOMECH_QUADRATURE_HPP

#include <functional>
#include <span>
#include <vector>

#include "optomech/errors.hpp"

namespace optomech {

struct QuadratureOptions {
  double abs_tol = 1e-10;   // per-component absolute tolerance
  double rel_tol = 1e-12;   // per-component relative tolerance
  int max_panels = 1 << 16; // subdivision budget
};

// Vector integrand: writes n_components values at x into out.
using VectorIntegrand = std::function<void(double x, std::span<double> out)>;

struct QuadratureResult {
  std::vector<double> value;   // one integral per component
  std::vector<double> error;   // error estimate per component
  int panels = 0;
  // Final panel edges, sorted ascending (size panels + 1). Lets callers reuse
  // the adapted grid, e.g. for cached re-summation with extra phase factors.
  std::vector<double> edges;
};

// Globally adaptive composite Gauss-Legendre quadrature over [a, b] with
// shared panel refinement across all components. Each component converges
// when its summed panel-error estimate drops below
// max(abs_tol, rel_tol * |integral|). Refinement always bisects the panel
// with the worst normalized error, so a panel boundary placed on top of a
// narrow spectral feature walks the node set geometrically onto it.
//
// breakpoints: interior seed edges (deduplicated, clipped to (a, b)). Panel
// boundaries land exactly there, which is how callers pin known feature
// locations (band edges, w' = 0, overlap edges).
// max_seed_width: if > 0, initial panels are further split to at most this
// width.
//
// Throws QuadratureFailure when the budget is exhausted before convergence.
QuadratureResult integrate_adaptive(const VectorIntegrand& f, int n_components,
                                    double a, double b,
                                    std::span<const double> breakpoints,
                                    const QuadratureOptions& opts = {},
                                    double max_seed_width = 0.0);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
// Computed once per order via Newton iteration on the Legendre polynomial.
struct GaussRule {
  std::vector<double> node;
  std::vector<double> weight;
};
const GaussRule& gauss_legendre(int n);

}  // namespace optomech

#endif  // OPTOMECH_QUADRATURE_HPP
