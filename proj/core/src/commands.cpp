#include "optomech/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "optomech/csv.hpp"
#include "optomech/report.hpp"
#include "optomech/svg.hpp"

namespace optomech {

namespace {

std::vector<std::string> echo_lines(const RunConfig& c) {
  std::vector<std::string> lines;
  std::istringstream in(c.serialize());
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string sigma_tag(double sigma_ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", sigma_ratio);
  return buf;
}

std::string join_notes(const SweepRow& row) {
  std::string s = row.annotations;
  if (!row.error.empty()) {
    if (!s.empty()) s += "; ";
    s += "error: " + row.error;
  }
  return s;
}

void write_outputs(const RunConfig& c, const std::string& stem,
                   const CsvTable& table, const SvgChart* chart,
                   std::ostream& out) {
  namespace fs = std::filesystem;
  fs::create_directories(c.output_dir);
  const std::string csv_path = (fs::path(c.output_dir) / (stem + ".csv")).string();
  write_file_atomic(csv_path, table.render(stem));
  out << "wrote " << csv_path << "\n";
  if (chart && c.emit_svg) {
    const std::string svg_path = (fs::path(c.output_dir) / (stem + ".svg")).string();
    write_file_atomic(svg_path, chart->render());
    out << "wrote " << svg_path << "\n";
  }
}

SweepSpec base_sweep(const RunConfig& c, SweepVariable var, double lo, double hi) {
  SweepSpec s;
  s.variable = var;
  s.lo = lo;
  s.hi = hi;
  s.points = c.points;
  s.params = c.params();
  s.filter = c.filter();
  s.filter.delay = 0.0;
  s.workers = c.workers;
  return s;
}

// Uniform base grid plus refinement windows: the zero-delay entanglement
// peaks in g2/g1 are needle-narrow (sub-1e-3 of the axis) around the
// analytically known optimal couplings, and a plain 201-point grid clips
// them badly.
std::vector<double> refined_axis(double lo, double hi, int points,
                                 const std::vector<double>& centers,
                                 double half_width, int refine_points) {
  std::vector<double> xs;
  for (int k = 0; k < points; ++k) {
    xs.push_back(lo + (hi - lo) * k / (points - 1));
  }
  for (double c : centers) {
    for (int k = -refine_points; k <= refine_points; ++k) {
      const double x = c + half_width * k / refine_points;
      if (x > lo && x < hi) xs.push_back(x);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

int run_point_mode(const RunConfig& c, std::ostream& out) {
  const PointReport r = evaluate_point(c);
  out << (c.json ? render_json(r) : render_text(r));
  return kExitOk;
}

int run_sweep_mode(const RunConfig& c, std::ostream& out) {
  const SweepResult res = run_sweep(c.sweep());

  CsvTable table;
  table.config_echo = echo_lines(c);
  table.columns = {to_string(c.variable), "e_n",  "nu_minus", "tau_kappa",
                   "c12_abs",             "n1",   "n2",       "stability"};
  std::vector<double> xs, ys;
  for (const SweepRow& row : res.rows) {
    const double x_reported =
        c.variable == SweepVariable::tau ? row.x * c.kappa : row.x;
    table.rows.push_back({x_reported, row.e_n, row.nu_minus, row.tau_used * c.kappa,
                          row.c12_mod, row.n1, row.n2,
                          static_cast<double>(static_cast<int>(row.verdict))});
    table.row_annotations.push_back(join_notes(row));
    xs.push_back(x_reported);
    ys.push_back(row.e_n);
  }

  SvgChart chart("parameter sweep", to_string(c.variable), "E_N");
  chart.add_series("E_N", xs, ys, "#c02020");
  write_outputs(c, "sweep", table, &chart, out);
  return kExitOk;
}

int run_optimize_mode(const RunConfig& c, std::ostream& out) {
  const SystemParams p = c.params();
  const FilterSpec f = c.filter();
  std::ostringstream body;
  body.precision(10);
  if (c.target == "tau") {
    const double tau = tau_opt_numeric(p, f);
    FilterSpec fd = f;
    fd.delay = tau;
    const double c12 = correlator_modulus(p, fd);
    const AnalyticInputs a{p.kappa1, f.bandwidth, p.g1, p.g2};
    body << "optimal delay search\n";
    body << "  tau*kappa (numeric)  = " << tau * c.kappa << "\n";
    body << "  tau*kappa (formula)  = " << tau_opt(a) * c.kappa << "\n";
    body << "  |c12| at optimum     = " << c12 << "\n";
  } else {
    const CouplingOptimum opt = g2_opt_numeric(p, f, c.delay_mode);
    body << "optimal coupling search (delay mode: " << to_string(c.delay_mode)
         << ")\n";
    body << "  g2/kappa (numeric)   = " << opt.g2 / c.kappa << "\n";
    body << "  E_N at optimum       = " << opt.e_n << "\n";
    body << "  tau*kappa used       = " << opt.tau_used * c.kappa << "\n";
    RegimeNote note;
    try {
      body << "  g2/kappa (large bw)  = "
           << g2_opt_large_bw(p.g1, p.kappa1, f.bandwidth) / c.kappa << "\n";
    } catch (const DomainError&) {
      body << "  g2/kappa (large bw)  = undefined (drive too weak)\n";
    }
    body << "  g2/kappa (small bw)  = "
         << g2_opt_small_bw(p.g1, p.kappa1, f.bandwidth, &note) / c.kappa << "\n";
    body << "  g2/kappa (delay opt) = "
         << g2_opt_with_delay(p.g1, p.kappa1, f.bandwidth, &note) / c.kappa << "\n";
    if (!note.empty()) body << "  regime notes: " << note << "\n";
  }
  out << body.str();
  return kExitOk;
}

// ---- figure reproduction -------------------------------------------------

struct FigureData {
  CsvTable table;
  SvgChart chart;
};

// Collects the per-point notes of one curve into the table's annotation
// column (flagged instabilities, regime notes, precision ceilings).
void merge_annotations(CsvTable& table, const SweepResult& res,
                       const std::string& tag) {
  if (table.row_annotations.empty()) {
    table.row_annotations.assign(res.rows.size(), "");
  }
  for (size_t r = 0; r < res.rows.size() && r < table.row_annotations.size(); ++r) {
    const std::string notes = join_notes(res.rows[r]);
    if (notes.empty()) continue;
    std::string& slot = table.row_annotations[r];
    if (!slot.empty()) slot += " | ";
    slot += tag + ": " + notes;
  }
}

void drop_empty_annotations(CsvTable& table) {
  for (const std::string& s : table.row_annotations) {
    if (!s.empty()) return;
  }
  table.row_annotations.clear();
}

FigureData figure_2a(const RunConfig& c) {
  FigureData fig{{}, SvgChart("output entanglement vs coupling ratio (zero vs optimal delay)",
                              "g2/g1", "E_N")};
  fig.table.config_echo = echo_lines(c);
  fig.table.columns = {"g2_over_g1"};

  const double sigmas[2] = {0.1, 1.0};
  const char* colors[2] = {"#202020", "#c02020"};
  // Refine around both tangent points; they carry the curve maxima.
  std::vector<double> centers;
  for (double sr : sigmas) {
    try {
      centers.push_back(g2_opt_large_bw(c.params().g1, c.kappa, sr * c.kappa) /
                        c.params().g1);
    } catch (const DomainError&) {
    }
  }
  const std::vector<double> axis =
      refined_axis(0.02, 1.0, c.points, centers, 4e-3, 40);
  std::vector<double> xs;
  for (int i = 0; i < 2; ++i) {
    for (DelayMode mode : {DelayMode::zero, DelayMode::numeric}) {
      SweepSpec s = base_sweep(c, SweepVariable::g2_over_g1, 0.02, 1.0);
      s.explicit_axis = axis;
      s.filter.bandwidth = sigmas[i] * c.kappa;
      s.delay_mode = mode;
      const SweepResult res = run_sweep(s);
      std::vector<double> ys;
      ys.reserve(res.rows.size());
      if (xs.empty()) {
        for (const SweepRow& row : res.rows) {
          xs.push_back(row.x);
          fig.table.rows.push_back({row.x});
        }
      }
      for (size_t r = 0; r < res.rows.size(); ++r) {
        fig.table.rows[r].push_back(res.rows[r].e_n);
        ys.push_back(res.rows[r].e_n);
      }
      const std::string tag = sigma_tag(sigmas[i]);
      const std::string col =
          (mode == DelayMode::zero ? "en_tau0_sigma" : "en_opt_sigma") + tag;
      merge_annotations(fig.table, res, col);
      fig.table.columns.push_back(col);
      fig.chart.add_series((mode == DelayMode::zero ? "tau=0, sigma=" : "opt delay, sigma=") +
                               tag + " kappa",
                           xs, ys, colors[i], mode == DelayMode::numeric);
    }
  }
  drop_empty_annotations(fig.table);
  return fig;
}

FigureData figure_2b(const RunConfig& c) {
  FigureData fig{{}, SvgChart("output entanglement vs coupling ratio (small bandwidth)",
                              "g2/g1", "E_N")};
  fig.table.config_echo = echo_lines(c);
  fig.table.columns = {"g2_over_g1"};

  const double sigma_b_ratio = std::sqrt(3.0) / (4.0 * c.g1_ratio * c.g1_ratio);
  struct Curve {
    double sigma_ratio;
    DelayMode mode;
    std::string label;
    const char* color;
  };
  const Curve curves[] = {
      {1e-4, DelayMode::zero, "tau=0, sigma=1e-04 kappa", "#c02020"},
      {2e-3, DelayMode::zero, "tau=0, sigma=0.002 kappa", "#c09020"},
      {sigma_b_ratio, DelayMode::zero, "tau=0, sigma=sigma_b", "#7030a0"},
      {1e-4, DelayMode::numeric, "opt delay, sigma=1e-04 kappa", "#2040c0"},
  };
  // Refine around each curve's small-bandwidth optimum.
  std::vector<double> centers;
  for (const Curve& cv : curves) {
    centers.push_back(
        g2_opt_small_bw(c.params().g1, c.kappa, cv.sigma_ratio * c.kappa) /
        c.params().g1);
  }
  const std::vector<double> axis =
      refined_axis(0.9, 1.0, c.points, centers, 1.5e-3, 30);
  std::vector<double> xs;
  for (const Curve& cv : curves) {
    SweepSpec s = base_sweep(c, SweepVariable::g2_over_g1, 0.9, 1.0);
    s.explicit_axis = axis;
    s.filter.bandwidth = cv.sigma_ratio * c.kappa;
    s.delay_mode = cv.mode;
    const SweepResult res = run_sweep(s);
    if (xs.empty()) {
      for (const SweepRow& row : res.rows) {
        xs.push_back(row.x);
        fig.table.rows.push_back({row.x});
      }
    }
    std::vector<double> ys;
    for (size_t r = 0; r < res.rows.size(); ++r) {
      fig.table.rows[r].push_back(res.rows[r].e_n);
      ys.push_back(res.rows[r].e_n);
    }
    const std::string col =
        (cv.mode == DelayMode::zero ? "en_tau0_sigma" : "en_opt_sigma") +
        sigma_tag(cv.sigma_ratio);
    merge_annotations(fig.table, res, col);
    fig.table.columns.push_back(col);
    fig.chart.add_series(cv.label, xs, ys, cv.color, cv.mode == DelayMode::numeric);
  }
  drop_empty_annotations(fig.table);
  return fig;
}

FigureData figure_2c(const RunConfig& c) {
  FigureData fig{{}, SvgChart("entanglement saturation vs drive strength",
                              "g1/kappa", "E_N")};
  fig.table.config_echo = echo_lines(c);
  fig.table.columns = {"g1_over_kappa"};

  const double sigmas[3] = {0.1, 0.5, 1.0};
  const char* colors[3] = {"#202020", "#2040c0", "#c02020"};
  std::vector<double> xs;
  for (int i = 0; i < 3; ++i) {
    SweepSpec s = base_sweep(c, SweepVariable::g1_over_kappa, 0.7, 50.0);
    s.log_spacing = true;
    s.filter.bandwidth = sigmas[i] * c.kappa;
    s.delay_mode = DelayMode::zero;
    s.coupling_rule = CouplingRule::large_bw_opt;
    const SweepResult res = run_sweep(s);
    if (xs.empty()) {
      for (const SweepRow& row : res.rows) {
        xs.push_back(row.x);
        fig.table.rows.push_back({row.x});
      }
    }
    std::vector<double> ys;
    for (size_t r = 0; r < res.rows.size(); ++r) {
      fig.table.rows[r].push_back(res.rows[r].e_n);
      ys.push_back(res.rows[r].e_n);
    }
    const std::string tag = sigma_tag(sigmas[i]);
    merge_annotations(fig.table, res, "en_sigma" + tag);
    fig.table.columns.push_back("en_sigma" + tag);
    fig.chart.add_series("sigma=" + tag + " kappa", xs, ys, colors[i], false);
  }
  drop_empty_annotations(fig.table);
  // Saturation levels as constant columns plus dashed lines.
  for (int i = 0; i < 3; ++i) {
    const double sat = e_n_saturation(sigmas[i] * c.kappa, c.kappa);
    for (auto& row : fig.table.rows) row.push_back(sat);
    fig.table.columns.push_back("en_saturation_sigma" + sigma_tag(sigmas[i]));
    fig.chart.add_hline("saturation, sigma=" + sigma_tag(sigmas[i]) + " kappa", sat,
                        "#209020");
  }
  return fig;
}

FigureData figure_3a(const RunConfig& c) {
  FigureData fig{{}, SvgChart("optimal delay vs coupling ratio", "g2/g1",
                              "tau * kappa")};
  fig.table.config_echo = echo_lines(c);
  fig.table.columns = {"g2_over_g1", "tau_formula_kappa", "tau_numeric_kappa"};

  SweepSpec s = base_sweep(c, SweepVariable::g2_over_g1, 0.05, 0.999);
  s.delay_mode = DelayMode::numeric;
  const SweepResult res = run_sweep(s);

  std::vector<double> xs, formula, numeric;
  for (const SweepRow& row : res.rows) {
    const AnalyticInputs a{c.params().kappa1, c.filter().bandwidth,
                           c.params().g1, row.x * c.params().g1};
    const double tf = tau_opt(a) * c.kappa;
    const double tn = row.tau_used * c.kappa;
    fig.table.rows.push_back({row.x, tf, tn});
    xs.push_back(row.x);
    formula.push_back(tf);
    numeric.push_back(tn);
  }
  merge_annotations(fig.table, res, "tau_numeric");
  drop_empty_annotations(fig.table);
  fig.chart.add_series("closed form", xs, formula, "#2040c0", false);
  fig.chart.add_series("numeric", xs, numeric, "#c02020", true);
  return fig;
}

FigureData figure_3b(const RunConfig& c, std::string* summary) {
  FigureData fig{{}, SvgChart("output entanglement with optimal delay", "g2/g1",
                              "E_N")};
  fig.table.config_echo = echo_lines(c);
  fig.table.columns = {"g2_over_g1", "en_delay_formula", "en_delay_numeric"};

  std::vector<double> xs, en_formula, en_numeric;
  for (DelayMode mode : {DelayMode::analytic, DelayMode::numeric}) {
    SweepSpec s = base_sweep(c, SweepVariable::g2_over_g1, 0.5, 0.9995);
    s.delay_mode = mode;
    const SweepResult res = run_sweep(s);
    if (xs.empty()) {
      for (const SweepRow& row : res.rows) {
        xs.push_back(row.x);
        fig.table.rows.push_back({row.x});
      }
    }
    for (size_t r = 0; r < res.rows.size(); ++r) {
      fig.table.rows[r].push_back(res.rows[r].e_n);
      (mode == DelayMode::analytic ? en_formula : en_numeric)
          .push_back(res.rows[r].e_n);
    }
    merge_annotations(fig.table, res,
                      mode == DelayMode::analytic ? "en_delay_formula"
                                                  : "en_delay_numeric");
  }
  drop_empty_annotations(fig.table);
  fig.chart.add_series("closed-form delay", xs, en_formula, "#2040c0", false);
  fig.chart.add_series("numeric delay", xs, en_numeric, "#c02020", true);

  // The two delay choices agree except in a small region; measure and report
  // the gap instead of asserting a bound on it.
  if (summary) {
    double worst = 0.0, worst_x = 0.0;
    for (size_t r = 0; r < xs.size(); ++r) {
      if (!std::isfinite(en_formula[r]) || !std::isfinite(en_numeric[r])) continue;
      const double gap = std::abs(en_numeric[r] - en_formula[r]);
      if (gap > worst) {
        worst = gap;
        worst_x = xs[r];
      }
    }
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "closed-form vs numeric delay: max |E_N gap| = %.3g at g2/g1 = %.4f",
                  worst, worst_x);
    *summary = buf;
  }

  // Predicted optimum of the delay-optimized curve.
  const SystemParams p = c.params();
  const double g2o = g2_opt_with_delay(p.g1, p.kappa1, c.filter().bandwidth);
  const double eno = e_n_opt_with_delay(p.g1, p.kappa1, c.filter().bandwidth);
  for (auto& row : fig.table.rows) {
    row.push_back(g2o / p.g1);
    row.push_back(eno);
  }
  fig.table.columns.push_back("g2_opt_delay_over_g1");
  fig.table.columns.push_back("en_opt_delay");
  fig.chart.add_marker("predicted optimum", g2o / p.g1, eno, "#209020");
  return fig;
}

FigureData figure_3c(const RunConfig& c) {
  FigureData fig{{}, SvgChart("output entanglement vs filter center frequency",
                              "omega/kappa", "E_N")};
  fig.table.config_echo = echo_lines(c);
  fig.table.columns = {"omega_over_kappa", "en_optimal", "en_equal_tau0"};

  std::vector<double> xs, opt, equal;
  {
    SweepSpec s = base_sweep(c, SweepVariable::omega_over_kappa, -3.0, 3.0);
    s.delay_mode = DelayMode::numeric;
    s.coupling_rule = CouplingRule::delay_opt;
    const SweepResult res = run_sweep(s);
    for (const SweepRow& row : res.rows) {
      xs.push_back(row.x);
      opt.push_back(row.e_n);
      fig.table.rows.push_back({row.x, row.e_n});
    }
    merge_annotations(fig.table, res, "en_optimal");
  }
  {
    SweepSpec s = base_sweep(c, SweepVariable::omega_over_kappa, -3.0, 3.0);
    s.delay_mode = DelayMode::zero;
    s.coupling_rule = CouplingRule::equal;
    const SweepResult res = run_sweep(s);
    for (size_t r = 0; r < res.rows.size(); ++r) {
      equal.push_back(res.rows[r].e_n);
      fig.table.rows[r].push_back(res.rows[r].e_n);
    }
    merge_annotations(fig.table, res, "en_equal_tau0");
  }
  drop_empty_annotations(fig.table);
  fig.chart.add_series("optimal coupling + delay", xs, opt, "#c02020", false);
  fig.chart.add_series("equal coupling, tau=0", xs, equal, "#2040c0", true);
  return fig;
}

int run_figure_mode(const RunConfig& c, std::ostream& out) {
  std::string summary;
  FigureData fig = [&] {
    if (c.figure_id == "2a") return figure_2a(c);
    if (c.figure_id == "2b") return figure_2b(c);
    if (c.figure_id == "2c") return figure_2c(c);
    if (c.figure_id == "3a") return figure_3a(c);
    if (c.figure_id == "3b") return figure_3b(c, &summary);
    return figure_3c(c);
  }();
  write_outputs(c, c.figure_id, fig.table, &fig.chart, out);
  if (!summary.empty()) out << summary << "\n";
  return kExitOk;
}

}  // namespace

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.mode) {
      case RunMode::point: return run_point_mode(config, out);
      case RunMode::sweep: return run_sweep_mode(config, out);
      case RunMode::optimize: return run_optimize_mode(config, out);
      case RunMode::figure: return run_figure_mode(config, out);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const InstabilityError& e) {
    err << "instability: " << e.what() << "\n";
    return kExitInstability;
  } catch (const NearSingularError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const QuadratureFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const NoMaximumError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const UnphysicalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
}

}  // namespace optomech
