#include "optomech/entanglement.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace optomech {

namespace {

using complex = std::complex<double>;

}  // namespace

double CovarianceMatrix::bona_fide_defect() const {
  // V + (i/2) Omega is Hermitian; its smallest eigenvalue is >= 0 for a
  // bona-fide state (up to numerical noise).
  Eigen::Matrix4cd check = entries.cast<complex>();
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = 1.0; omega(1, 0) = -1.0;
  omega(2, 3) = 1.0; omega(3, 2) = -1.0;
  check += complex{0.0, 0.5} * omega.cast<complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(check);
  return es.eigenvalues().minCoeff();
}

CovarianceMatrix covariance_from_moments(const MomentSet& m, double bona_fide_tol) {
  const double a1 = m.n1 + 0.5;
  const double a2 = m.n2 + 0.5;
  const double cr = m.c12.real(), ci = m.c12.imag();
  const double xr = m.x12.real(), xi = m.x12.imag();

  CovarianceMatrix v;
  Eigen::Matrix4d& e = v.entries;
  // Mode-1 block: a1*I plus the single-mode squeezing part of m11.
  e(0, 0) = a1 + m.m11.real();
  e(1, 1) = a1 - m.m11.real();
  e(0, 1) = e(1, 0) = m.m11.imag();
  // Mode-2 block.
  e(2, 2) = a2 + m.m22.real();
  e(3, 3) = a2 - m.m22.real();
  e(2, 3) = e(3, 2) = m.m22.imag();
  // Cross block: c12 is the pair (two-mode squeezing) part, x12 the
  // beam-splitter part.
  e(0, 2) = cr + xr;        // <X1 X2>
  e(0, 3) = ci + xi;        // <X1 P2>
  e(1, 2) = ci - xi;        // <P1 X2>
  e(1, 3) = -cr + xr;       // <P1 P2>
  e(2, 0) = e(0, 2);
  e(3, 0) = e(0, 3);
  e(2, 1) = e(1, 2);
  e(3, 1) = e(1, 3);

  const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
  const double defect = v.bona_fide_defect();
  if (defect < -bona_fide_tol * scale) {
    std::ostringstream msg;
    msg << "covariance_from_moments: bona-fide condition violated (min eig "
        << defect << ", scale " << scale << ")";
    throw UnphysicalError(msg.str());
  }
  return v;
}

EntanglementResult log_negativity(const CovarianceMatrix& v) {
  // The smallest partially transposed symplectic eigenvalue emerges from
  // cancellations spanning up to twice the covariance scale in digits, so
  // the 2x2 block algebra runs in extended precision on the (double) entries.
  using ld = long double;
  ld e[4][4];
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) e[i][j] = v.entries(i, j);
  }
  const auto det2l = [](ld a, ld b, ld c, ld d) { return a * d - b * c; };
  const ld det_a = det2l(e[0][0], e[0][1], e[1][0], e[1][1]);
  const ld det_b = det2l(e[2][2], e[2][3], e[3][2], e[3][3]);
  const ld det_c = det2l(e[0][2], e[0][3], e[1][2], e[1][3]);

  // det V = det A * det(B - C^T A^{-1} C) via the 2x2 Schur complement.
  const ld inv_det_a = 1.0L / det_a;
  const ld ia00 = e[1][1] * inv_det_a, ia01 = -e[0][1] * inv_det_a;
  const ld ia10 = -e[1][0] * inv_det_a, ia11 = e[0][0] * inv_det_a;
  const ld t00 = ia00 * e[0][2] + ia01 * e[1][2];
  const ld t01 = ia00 * e[0][3] + ia01 * e[1][3];
  const ld t10 = ia10 * e[0][2] + ia11 * e[1][2];
  const ld t11 = ia10 * e[0][3] + ia11 * e[1][3];
  const ld s00 = e[2][2] - (e[0][2] * t00 + e[1][2] * t10);
  const ld s01 = e[2][3] - (e[0][2] * t01 + e[1][2] * t11);
  const ld s10 = e[3][2] - (e[0][3] * t00 + e[1][3] * t10);
  const ld s11 = e[3][3] - (e[0][3] * t01 + e[1][3] * t11);
  const ld det_v = det_a * det2l(s00, s01, s10, s11);

  // Partial transpose flips the sign of det C.
  const ld delta = det_a + det_b - 2.0L * det_c;
  const ld disc = delta * delta - 4.0L * det_v;
  const double tol = 1e-9 * std::max(1.0, static_cast<double>(delta * delta));
  if (static_cast<double>(disc) < -tol) {
    std::ostringstream msg;
    msg << "log_negativity: Delta~^2 - 4 det V = " << static_cast<double>(disc)
        << " < 0 (complex symplectic eigenvalue)";
    throw UnphysicalError(msg.str());
  }
  const ld root = std::sqrt(std::max(0.0L, disc));
  const ld nu_sq = 2.0L * det_v / (delta + root);
  double nu = static_cast<double>(std::sqrt(std::max(0.0L, nu_sq)));

  // Resolution floor: the covariance entries are doubles, so eigenvalues
  // below ~eps * scale are indistinguishable from zero. Clamp at the floor
  // instead of reporting an unresolvable (possibly infinite) E_N, and flag
  // everything within a factor 32 of it as noise-dominated.
  const double scale = v.entries.cwiseAbs().maxCoeff();
  const double floor = std::numeric_limits<double>::epsilon() * scale;

  EntanglementResult r;
  if (nu < 32.0 * floor) r.precision_limited = true;
  if (nu < floor) nu = floor;
  r.nu_minus = nu;
  r.e_n = nu > 0.0 ? std::max(0.0, -std::log(2.0 * nu))
                   : std::numeric_limits<double>::infinity();
  return r;
}

EntanglementResult entanglement_from_moments(const MomentSet& m) {
  EntanglementResult r = log_negativity(covariance_from_moments(m));
  r.moments = m;
  return r;
}

EntanglementResult output_entanglement(const SystemParams& p, const FilterSpec& f,
                                       const QuadratureOptions& opts) {
  return entanglement_from_moments(moments(p, f, opts));
}

}  // namespace optomech
