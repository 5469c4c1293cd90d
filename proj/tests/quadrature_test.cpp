#include <doctest.h>

#include <cmath>

#include "optomech/quadrature.hpp"

using namespace optomech;

TEST_CASE("polynomial integral is exact to rounding") {
  const auto f = [](double x, std::span<double> out) { out[0] = x * x * x; };
  const auto r = integrate_adaptive(f, 1, 0.0, 1.0, {});
  CHECK(std::abs(r.value[0] - 0.25) < 1e-14);
}

TEST_CASE("narrow Lorentzian resolved through a seeded breakpoint") {
  // width 1e-5 on [-1, 1]; integral = 2 atan(1e5) / 1e-5.
  const double w = 1e-5;
  const auto f = [&](double x, std::span<double> out) {
    out[0] = 1.0 / (w * w + x * x);
  };
  const double bp[] = {0.0};
  QuadratureOptions opts;
  const auto r = integrate_adaptive(f, 1, -1.0, 1.0, bp, opts);
  const double want = 2.0 * std::atan(1.0 / w) / w;
  CHECK(std::abs(r.value[0] - want) < 1e-9 * want);
}

TEST_CASE("vector components share refinement and all converge") {
  const double w = 1e-4;
  const auto f = [&](double x, std::span<double> out) {
    out[0] = std::cos(3.0 * x);                 // smooth
    out[1] = w / (w * w + x * x);               // spike at 0
  };
  const double bp[] = {0.0};
  const auto r = integrate_adaptive(f, 2, -2.0, 2.0, bp);
  CHECK(std::abs(r.value[0] - 2.0 * std::sin(6.0) / 3.0) < 1e-10);
  CHECK(std::abs(r.value[1] - 2.0 * std::atan(2.0 / w)) < 1e-8);
}

TEST_CASE("budget exhaustion raises QuadratureFailure") {
  const auto f = [](double x, std::span<double> out) {
    out[0] = 1.0 / (1e-12 + x * x);
  };
  QuadratureOptions opts;
  opts.max_panels = 8;
  const double bp[] = {0.0};
  CHECK_THROWS_AS(integrate_adaptive(f, 1, -1.0, 1.0, bp, opts), QuadratureFailure);
}

TEST_CASE("breakpoints and seed-width cap appear in the panel edges") {
  const auto f = [](double x, std::span<double> out) { out[0] = x; };
  const double bp[] = {0.25};
  const auto r = integrate_adaptive(f, 1, 0.0, 1.0, bp, {}, 0.5);
  bool found = false;
  for (double e : r.edges) found = found || std::abs(e - 0.25) < 1e-15;
  CHECK(found);
  CHECK(r.panels >= 3);  // 0.25 split plus the 0.5 width cap
}

TEST_CASE("evaluation noise plateaus instead of spinning") {
  // Deterministic jitter at the 1e-13 relative level defeats the 1e-12
  // relative target; the plateau detector must stop refinement.
  const auto f = [](double x, std::span<double> out) {
    const double jitter = std::sin(1e9 * x) * 1e-13;
    out[0] = 1.0 + jitter;
  };
  QuadratureOptions opts;
  opts.abs_tol = 1e-16;
  opts.rel_tol = 1e-15;
  const auto r = integrate_adaptive(f, 1, 0.0, 1.0, {}, opts);
  CHECK(std::abs(r.value[0] - 1.0) < 1e-9);
  CHECK(r.panels < opts.max_panels);
}

TEST_CASE("gauss rule nodes integrate high-degree monomials") {
  const GaussRule& rule = gauss_legendre(15);
  // 15-point rule is exact through degree 29.
  double acc = 0.0;
  for (size_t i = 0; i < rule.node.size(); ++i) {
    acc += rule.weight[i] * std::pow(rule.node[i], 28);
  }
  CHECK(std::abs(acc - 2.0 / 29.0) < 1e-14);
}
