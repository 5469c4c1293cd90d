#include "optomech/model.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

namespace optomech {

namespace {

using complex = std::complex<double>;
constexpr complex kI{0.0, 1.0};

void require(bool ok, const char* field, const char* what) {
  if (!ok) {
    std::ostringstream msg;
    msg << "SystemParams." << field << " " << what;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

void SystemParams::validate() const {
  require(std::isfinite(kappa1) && kappa1 > 0.0, "kappa1", "must be > 0");
  require(std::isfinite(kappa2) && kappa2 > 0.0, "kappa2", "must be > 0");
  require(std::isfinite(gamma) && gamma > 0.0, "gamma", "must be > 0");
  require(std::isfinite(g1) && g1 >= 0.0, "g1", "must be >= 0");
  require(std::isfinite(g2) && g2 >= 0.0, "g2", "must be >= 0");
  require(std::isfinite(n_m) && n_m >= 0.0, "n_m", "must be >= 0");
  require(std::isfinite(n_cav1) && n_cav1 >= 0.0, "n_cav1", "must be >= 0");
  require(std::isfinite(n_cav2) && n_cav2 >= 0.0, "n_cav2", "must be >= 0");
}

const char* to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::stable: return "stable";
    case StabilityVerdict::unstable: return "unstable";
    case StabilityVerdict::marginal: return "marginal";
  }
  return "unknown";
}

StabilityVerdict check_stability(const SystemParams& p, double boundary_rel_tol) {
  p.validate();

  const double k1 = p.kappa1;
  const double k2 = p.kappa2;
  const bool equal_kappa = std::abs(k1 - k2) <= boundary_rel_tol * std::max(k1, k2);

  if (equal_kappa) {
    // Always stable for g2 <= g1; flag the boundary itself as marginal.
    if (std::abs(p.g2 - p.g1) <= boundary_rel_tol * std::max(p.g1, p.g2)) {
      return StabilityVerdict::marginal;
    }
    return p.g2 < p.g1 ? StabilityVerdict::stable : StabilityVerdict::unstable;
  }

  if (p.g2 == 0.0) return StabilityVerdict::stable;

  // g1^2/g2^2 > max(k1/k2, k2/k1), written division-free.
  const double lhs = p.g1 * p.g1;
  const double rhs = p.g2 * p.g2 * std::max(k1 / k2, k2 / k1);
  if (std::abs(lhs - rhs) <= boundary_rel_tol * std::max(lhs, rhs)) {
    return StabilityVerdict::marginal;
  }
  return lhs > rhs ? StabilityVerdict::stable : StabilityVerdict::unstable;
}

Eigen::Matrix3cd drift_matrix(const SystemParams& p) {
  p.validate();
  Eigen::Matrix3cd m;
  m << complex{-0.5 * p.gamma, 0.0}, -kI * p.g1, -kI * p.g2,
       -kI * p.g1, complex{-0.5 * p.kappa1, 0.0}, complex{0.0, 0.0},
       kI * p.g2, complex{0.0, 0.0}, complex{-0.5 * p.kappa2, 0.0};
  return m;
}

double ScatteringMatrix::row1_identity_defect() const {
  const auto& s = entries;
  return std::norm(s(0, 0)) - std::norm(s(0, 1)) + std::norm(s(0, 2)) - 1.0;
}

double ScatteringMatrix::row2_identity_defect() const {
  const auto& s = entries;
  return std::norm(s(1, 1)) - std::norm(s(1, 0)) - std::norm(s(1, 2)) - 1.0;
}

ScatteringMatrix scattering(const SystemParams& p, double freq, double condition_limit) {
  if (!std::isfinite(freq)) throw std::invalid_argument("scattering: freq must be finite");

  // The solve runs in extended precision: the conditioning grows like the
  // inverse of the effective mechanical susceptibility and reaches ~1e10 near
  // equal couplings, where a plain double cofactor inverse would leave only
  // ~6 accurate digits in the scattering entries.
  using lcomplex = std::complex<long double>;
  lcomplex a[3][3];
  {
    const Eigen::Matrix3cd m = drift_matrix(p);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        a[i][j] = lcomplex{-m(i, j).real(), -m(i, j).imag()};
      }
    }
    a[0][0] += lcomplex{0.0L, -static_cast<long double>(freq)};
    a[1][1] += lcomplex{0.0L, -static_cast<long double>(freq)};
    a[2][2] += lcomplex{0.0L, -static_cast<long double>(freq)};
  }

  lcomplex adj[3][3];
  adj[0][0] = a[1][1] * a[2][2] - a[1][2] * a[2][1];
  adj[0][1] = a[0][2] * a[2][1] - a[0][1] * a[2][2];
  adj[0][2] = a[0][1] * a[1][2] - a[0][2] * a[1][1];
  adj[1][0] = a[1][2] * a[2][0] - a[1][0] * a[2][2];
  adj[1][1] = a[0][0] * a[2][2] - a[0][2] * a[2][0];
  adj[1][2] = a[0][2] * a[1][0] - a[0][0] * a[1][2];
  adj[2][0] = a[1][0] * a[2][1] - a[1][1] * a[2][0];
  adj[2][1] = a[0][1] * a[2][0] - a[0][0] * a[2][1];
  adj[2][2] = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  const lcomplex det = a[0][0] * adj[0][0] + a[0][1] * adj[1][0] + a[0][2] * adj[2][0];

  lcomplex a_inv[3][3];
  double norm_a = 0.0, norm_a_inv = 0.0;
  for (int i = 0; i < 3; ++i) {
    double row_a = 0.0, row_inv = 0.0;
    for (int j = 0; j < 3; ++j) {
      a_inv[i][j] = adj[i][j] / det;
      row_a += static_cast<double>(std::abs(a[i][j]));
      row_inv += static_cast<double>(std::abs(a_inv[i][j]));
    }
    norm_a = std::max(norm_a, row_a);
    norm_a_inv = std::max(norm_a_inv, row_inv);
  }
  const double cond = norm_a * norm_a_inv;
  if (!std::isfinite(cond) || cond > condition_limit) {
    std::ostringstream msg;
    msg << "scattering: frequency-domain solve ill-conditioned (cond ~ " << cond
        << ") at freq " << freq << "; system at or past an instability";
    throw NearSingularError(msg.str());
  }

  const long double l[3] = {std::sqrt(static_cast<long double>(p.gamma)),
                            std::sqrt(static_cast<long double>(p.kappa1)),
                            std::sqrt(static_cast<long double>(p.kappa2))};

  // S = I - L A^{-1} L in the solver basis (b, d1, d2^dag).
  Eigen::Matrix3cd s_solver;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      lcomplex s = (i == j ? lcomplex{1.0L, 0.0L} : lcomplex{0.0L, 0.0L});
      s -= l[i] * a_inv[i][j] * l[j];
      s_solver(i, j) = complex{static_cast<double>(s.real()),
                               static_cast<double>(s.imag())};
    }
  }

  // Reorder to the public channel order (d1, d2^dag, b).
  constexpr int perm[3] = {1, 2, 0};
  ScatteringMatrix out;
  out.freq = freq;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out.entries(i, j) = s_solver(perm[i], perm[j]);
    }
  }
  return out;
}

}  // namespace optomech
