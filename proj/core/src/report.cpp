#include "optomech/report.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "optomech/optimize.hpp"

namespace optomech {

namespace {

using nlohmann::json;

AnalyticBlock analytic_block(const SystemParams& p, const FilterSpec& f) {
  AnalyticBlock b;
  const double kappa = p.kappa1;
  AnalyticInputs a{kappa, f.bandwidth, p.g1, p.g2};
  b.tau_opt = tau_opt(a);
  try {
    b.g2_opt_large_bw = g2_opt_large_bw(p.g1, kappa, f.bandwidth);
  } catch (const DomainError&) {
    b.g2_opt_large_bw.reset();
  }
  RegimeNote note;
  b.g2_opt_small_bw = g2_opt_small_bw(p.g1, kappa, f.bandwidth, &note);
  b.sigma_boundary = sigma_boundary(p.g1, kappa);
  b.saturation_threshold = saturation_threshold(f.bandwidth, kappa);
  b.e_n_saturation = e_n_saturation(f.bandwidth, kappa);
  b.g2_opt_with_delay = g2_opt_with_delay(p.g1, kappa, f.bandwidth, &note);
  b.e_n_opt_with_delay = e_n_opt_with_delay(p.g1, kappa, f.bandwidth, &note);
  b.notes = note;
  return b;
}

}  // namespace

PointReport evaluate_point(const RunConfig& config) {
  PointReport r;
  r.config = config;
  const SystemParams p = config.params();
  FilterSpec f = config.filter();

  r.verdict = check_stability(p);
  if (r.verdict == StabilityVerdict::unstable) {
    throw InstabilityError("point evaluation: system parameters are unstable");
  }

  std::string notes;
  switch (config.point_delay) {
    case PointDelay::fixed:
      break;
    case PointDelay::analytic: {
      if (p.g1 > 0.0 || p.g2 > 0.0) {
        AnalyticInputs a{p.kappa1, f.bandwidth, std::max(p.g1, 1e-300), p.g2};
        f.delay = tau_opt(a);
      }
      if (!std::isfinite(f.delay) || (p.g1 == 0.0 && p.g2 == 0.0)) {
        f.delay = 0.0;
        notes = "analytic delay undefined at vanishing couplings; tau = 0";
      }
      break;
    }
    case PointDelay::numeric:
      try {
        f.delay = tau_opt_numeric(p, f);
      } catch (const NoMaximumError&) {
        f.delay = 0.0;
        notes = "delay objective flat; tau = 0";
      }
      break;
  }
  r.tau_used = f.delay;

  const MomentSet m = moments(p, f);
  const EntanglementResult ent = entanglement_from_moments(m);
  r.moments = m;
  r.e_n = ent.e_n;
  r.nu_minus = ent.nu_minus;
  r.commutators = filtered_commutators(p, f);

  if (p.g1 > 0.0 && p.g2 > 0.0 &&
      std::abs(p.kappa1 - p.kappa2) <= 1e-12 * p.kappa1) {
    r.analytic = analytic_block(p, f);
  } else if (p.g1 > 0.0 && p.g2 > 0.0) {
    if (!notes.empty()) notes += "; ";
    notes += "closed forms omitted (unequal cavity decays)";
  }
  r.annotations = notes;
  return r;
}

std::string render_text(const PointReport& r) {
  const RunConfig& c = r.config;
  std::ostringstream out;
  out.precision(10);
  const double kappa = c.kappa;
  out << "point evaluation (rates in units of kappa; kappa = " << kappa
      << " gamma)\n";
  out << "  params: g1 = " << c.g1_ratio << ", g2 = " << c.g2_ratio
      << ", kappa1 = " << c.kappa1_ratio << ", kappa2 = " << c.kappa2_ratio
      << ", n_m = " << c.n_m << ", n_cav = (" << c.n_cav1 << ", " << c.n_cav2
      << ")\n";
  out << "  filter: omega = " << c.omega_ratio << ", sigma = " << c.sigma_ratio
      << ", tau*kappa = " << r.tau_used * kappa << " ("
      << to_string(c.point_delay) << ")\n";
  out << "  stability: " << to_string(r.verdict) << "\n";
  out << "  moments:\n";
  out << "    n1    = " << r.moments.n1 << "\n";
  out << "    n2    = " << r.moments.n2 << "\n";
  out << "    |c12| = " << std::abs(r.moments.c12)
      << "  arg = " << std::arg(r.moments.c12) << "\n";
  out << "    |m11| = " << std::abs(r.moments.m11)
      << "  |m22| = " << std::abs(r.moments.m22)
      << "  |x12| = " << std::abs(r.moments.x12) << "\n";
  out << "  commutators: [D1,D1^] = " << r.commutators[0]
      << "  [D2,D2^] = " << r.commutators[1] << "\n";
  out << "  E_N = " << r.e_n << "   nu_minus = " << r.nu_minus << "\n";
  if (r.analytic) {
    const AnalyticBlock& b = *r.analytic;
    out << "  closed forms (equal-kappa):\n";
    out << "    tau_opt*kappa           = " << b.tau_opt * kappa << "\n";
    if (b.g2_opt_large_bw) {
      out << "    g2_opt (large bw)/kappa = " << *b.g2_opt_large_bw / kappa << "\n";
    } else {
      out << "    g2_opt (large bw)       = undefined (drive too weak)\n";
    }
    out << "    g2_opt (small bw)/kappa = " << b.g2_opt_small_bw / kappa << "\n";
    out << "    sigma_b/kappa           = " << b.sigma_boundary / kappa << "\n";
    out << "    saturation g1/kappa     = " << b.saturation_threshold / kappa << "\n";
    out << "    E_N saturation          = " << b.e_n_saturation << "\n";
    out << "    g2_opt (delay)/kappa    = " << b.g2_opt_with_delay / kappa << "\n";
    out << "    E_N opt (delay)         = " << b.e_n_opt_with_delay << "\n";
    if (!b.notes.empty()) out << "    regime notes: " << b.notes << "\n";
  }
  if (!r.annotations.empty()) out << "  annotations: " << r.annotations << "\n";
  return out.str();
}

std::string render_json(const PointReport& r) {
  const RunConfig& c = r.config;
  json j;
  j["mode"] = "point";
  j["units"] = {{"kappa_over_gamma", c.kappa},
                {"rates", "kappa"},
                {"tau", "1/kappa"}};
  j["params"] = {{"kappa1", c.kappa1_ratio}, {"kappa2", c.kappa2_ratio},
                 {"g1", c.g1_ratio},         {"g2", c.g2_ratio},
                 {"n_m", c.n_m},             {"n_cav1", c.n_cav1},
                 {"n_cav2", c.n_cav2}};
  j["filter"] = {{"omega", c.omega_ratio},
                 {"sigma", c.sigma_ratio},
                 {"tau_kappa_used", r.tau_used * c.kappa},
                 {"delay_mode", to_string(c.point_delay)}};
  j["stability"] = to_string(r.verdict);
  j["moments"] = {{"n1", r.moments.n1},
                  {"n2", r.moments.n2},
                  {"c12_re", r.moments.c12.real()},
                  {"c12_im", r.moments.c12.imag()},
                  {"c12_abs", std::abs(r.moments.c12)},
                  {"m11_abs", std::abs(r.moments.m11)},
                  {"m22_abs", std::abs(r.moments.m22)},
                  {"x12_abs", std::abs(r.moments.x12)}};
  j["commutators"] = {r.commutators[0], r.commutators[1]};
  j["e_n"] = r.e_n;
  j["nu_minus"] = r.nu_minus;
  if (r.analytic) {
    const AnalyticBlock& b = *r.analytic;
    json a;
    a["tau_opt_kappa"] = b.tau_opt * c.kappa;
    if (b.g2_opt_large_bw) a["g2_opt_large_bw_over_kappa"] = *b.g2_opt_large_bw / c.kappa;
    a["g2_opt_small_bw_over_kappa"] = b.g2_opt_small_bw / c.kappa;
    a["sigma_boundary_over_kappa"] = b.sigma_boundary / c.kappa;
    a["saturation_threshold_over_kappa"] = b.saturation_threshold / c.kappa;
    a["e_n_saturation"] = b.e_n_saturation;
    a["g2_opt_with_delay_over_kappa"] = b.g2_opt_with_delay / c.kappa;
    a["e_n_opt_with_delay"] = b.e_n_opt_with_delay;
    if (!b.notes.empty()) a["regime_notes"] = b.notes;
    j["closed_forms"] = a;
  }
  if (!r.annotations.empty()) j["annotations"] = r.annotations;
  return j.dump(2) + "\n";
}

}  // namespace optomech
