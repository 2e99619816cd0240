#include "hypwave/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hypwave/errors.hpp"
#include "hypwave/evolution.hpp"
#include "hypwave/freewave.hpp"
#include "hypwave/generator.hpp"
#include "hypwave/geometry.hpp"
#include "hypwave/grid.hpp"
#include "hypwave/manifold.hpp"
#include "hypwave/projection.hpp"
#include "hypwave/report.hpp"
#include "hypwave/shoot.hpp"
#include "hypwave/specfun.hpp"
#include "hypwave/spectrum.hpp"

namespace hypwave {

namespace {

void cfg(Report& r, const std::string& key, const std::string& v) {
  r.config[key] = v;
}
void cfg(Report& r, const std::string& key, double v) {
  r.config[key] = format_double(v);
}
void cfg(Report& r, const std::string& key, int v) {
  r.config[key] = std::to_string(v);
}
void cfg(Report& r, const std::string& key, bool v) {
  r.config[key] = v ? "true" : "false";
}

std::string config_echo(const Report& r) {
  std::string s = "subcommand=" + r.subcommand;
  for (const auto& [k, v] : r.config) s += " " + k + "=" + v;
  return s;
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != text.size())
    throw validation_error(what + ": '" + text + "' is not a number");
  return v;
}

cplx parse_complex(const std::string& text, const std::string& what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_number(text, what), 0.0};
  return {parse_number(text.substr(0, comma), what),
          parse_number(text.substr(comma + 1), what)};
}

// Initial data descriptors shared by evolve/shoot/manifold:
//   zero | mode1 | mode0 | va:A | bump:A | <file.csv with columns rho,u1,u2>
// File data fixes n from the row count; otherwise n_flag is used.
ModeField load_field(const std::string& desc, int ell, int n_flag, int& n_out) {
  auto constant_pair = [&](double a, double b) {
    ModeField u;
    u.ell = ell;
    u.u1 = a * Eigen::VectorXd::Ones(n_flag);
    u.u2 = b * Eigen::VectorXd::Ones(n_flag);
    n_out = n_flag;
    return u;
  };
  if (desc == "zero") return constant_pair(0.0, 0.0);
  if (desc == "mode1") {
    if (ell != 0)
      throw validation_error("data mode1 is the radial growing pair (1, 2); "
                             "it requires ell = 0");
    return constant_pair(1.0, 2.0);
  }
  if (desc == "mode0") {
    if (ell != 1)
      throw validation_error("data mode0 is the ell = 1 neutral pair "
                             "(rho, 2 rho); it requires ell = 1");
    RadialGrid g(n_flag);
    ModeField u;
    u.ell = 1;
    u.u1 = g.rho();
    u.u2 = 2.0 * g.rho();
    n_out = n_flag;
    return u;
  }
  if (desc.rfind("va:", 0) == 0) {
    if (ell != 0)
      throw validation_error("data va:A is a radial family; it requires "
                             "ell = 0");
    const double a = parse_number(desc.substr(3), "data va:A");
    RadialGrid g(n_flag);
    n_out = n_flag;
    return exact_family_va(a, 0.0, g);
  }
  if (desc.rfind("bump:", 0) == 0) {
    const double amp = parse_number(desc.substr(5), "data bump:A");
    RadialGrid g(n_flag);
    ModeField u;
    u.ell = ell;
    u.u1.resize(n_flag);
    u.u2.resize(n_flag);
    for (int i = 0; i < n_flag; ++i) {
      const double r = g.rho()[i];
      const double s = std::pow(r, ell);
      const double q = 1.0 - r * r;
      u.u1[i] = amp * s * q * q;
      u.u2[i] = 0.5 * amp * s * q;
    }
    n_out = n_flag;
    return u;
  }
  // Anything else is a CSV path.
  const Table t = table_from_csv(read_text(desc));
  if (t.columns != std::vector<std::string>{"rho", "u1", "u2"})
    throw validation_error("data file '" + desc +
                           "': expected columns rho,u1,u2");
  const int n = (int)t.rows.size();
  if (n < 4)
    throw validation_error("data file '" + desc + "': too few rows");
  if (n_flag > 0 && n_flag != n)
    throw validation_error("data file '" + desc + "' has " +
                           std::to_string(n) + " rows but n = " +
                           std::to_string(n_flag) + " was requested");
  RadialGrid g(n);
  ModeField u;
  u.ell = ell;
  u.u1.resize(n);
  u.u2.resize(n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(t.rows[i][0] - g.rho()[i]) > 1e-9)
      throw validation_error(
          "data file '" + desc +
          "': rho column does not match the collocation nodes for n = " +
          std::to_string(n));
    u.u1[i] = t.rows[i][1];
    u.u2[i] = t.rows[i][2];
  }
  n_out = n;
  return u;
}

Table field_to_table(const ModeField& u, const RadialGrid& g) {
  Table t;
  t.columns = {"rho", "u1", "u2"};
  for (int i = 0; i < g.size(); ++i)
    t.rows.push_back({g.rho()[i], u.u1[i], u.u2[i]});
  return t;
}

// Snapshot serialization used by `evolve --save-trajectory` and read back by
// `strichartz`: one row per snapshot, state and its time derivative side by
// side so cubic Hermite evaluation works off the file alone.
Table trajectory_to_table(const Trajectory& traj, int n) {
  Table t;
  t.columns = {"tau", "ell"};
  auto add_block = [&](const std::string& prefix) {
    for (int i = 0; i < n; ++i)
      t.columns.push_back(prefix + "_" + std::to_string(i));
  };
  add_block("u1");
  add_block("u2");
  add_block("du1");
  add_block("du2");
  for (const Snapshot& s : traj.snapshots) {
    std::vector<double> row;
    row.reserve(2 + 4 * n);
    row.push_back(s.tau);
    row.push_back((double)s.u.ell);
    for (int i = 0; i < n; ++i) row.push_back(s.u.u1[i]);
    for (int i = 0; i < n; ++i) row.push_back(s.u.u2[i]);
    for (int i = 0; i < n; ++i) row.push_back(s.du.u1[i]);
    for (int i = 0; i < n; ++i) row.push_back(s.du.u2[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Trajectory trajectory_from_table(const Table& t, const std::string& origin) {
  if (t.columns.size() < 6 || t.columns[0] != "tau" || t.columns[1] != "ell" ||
      (t.columns.size() - 2) % 4 != 0)
    throw validation_error("trajectory file '" + origin +
                           "': expected columns tau,ell,u1_*,u2_*,du1_*,du2_*");
  const int n = (int)(t.columns.size() - 2) / 4;
  if (t.rows.size() < 2)
    throw validation_error("trajectory file '" + origin +
                           "': needs at least two snapshots");
  Trajectory traj;
  traj.config.n = n;
  traj.config.ell = (int)t.rows[0][1];
  for (const auto& row : t.rows) {
    Snapshot s;
    s.tau = row[0];
    s.u.ell = traj.config.ell;
    s.du.ell = traj.config.ell;
    s.u.u1.resize(n);
    s.u.u2.resize(n);
    s.du.u1.resize(n);
    s.du.u2.resize(n);
    for (int i = 0; i < n; ++i) {
      s.u.u1[i] = row[2 + i];
      s.u.u2[i] = row[2 + n + i];
      s.du.u1[i] = row[2 + 2 * n + i];
      s.du.u2[i] = row[2 + 3 * n + i];
    }
    traj.snapshots.push_back(std::move(s));
    traj.norm_history.emplace_back(s.tau, 0.0);  // filled below
  }
  RadialGrid g(n);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k)
    traj.norm_history[k].second = energy_norm(traj.snapshots[k].u, g);
  return traj;
}

// ---------------------------------------------------------------- transform

struct TransformOpts {
  std::string chart = "standard";
  std::string points_file;
  std::vector<double> point{1.0, 0.0, 0.0, 0.0};
};

SpacetimePoint to_standard(const std::string& chart,
                           const std::array<double, 4>& c) {
  if (chart == "standard") return {c[0], {c[1], c[2], c[3]}};
  if (chart == "hyperboloidal")
    return kelvin_inverse({c[0], {c[1], c[2], c[3]}});
  if (chart == "similarity") return from_similarity({c[0], {c[1], c[2], c[3]}});
  if (chart == "penrose") {
    if (c[2] != 0.0 || c[3] != 0.0)
      throw validation_error(
          "penrose input rows are radial: chart,Tp,R,0,0 (c2 = c3 = 0)");
    const auto [t, r] = penrose_inverse(c[0], c[1]);
    return {t, {r, 0.0, 0.0}};
  }
  throw validation_error("chart: unknown chart '" + chart +
                         "' (standard|hyperboloidal|similarity|penrose)");
}

void run_transform(const TransformOpts& o, Report& rep) {
  struct InputRow {
    std::string chart;
    std::array<double, 4> c;
  };
  std::vector<InputRow> inputs;
  if (!o.points_file.empty()) {
    std::istringstream is(read_text(o.points_file));
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::string cell;
      std::istringstream ls(line);
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (lineno == 1 && !cells.empty() && cells[0] == "chart") continue;
      if (cells.size() == 4) {
        inputs.push_back({o.chart,
                          {parse_number(cells[0], "points"),
                           parse_number(cells[1], "points"),
                           parse_number(cells[2], "points"),
                           parse_number(cells[3], "points")}});
      } else if (cells.size() == 5) {
        inputs.push_back({cells[0],
                          {parse_number(cells[1], "points"),
                           parse_number(cells[2], "points"),
                           parse_number(cells[3], "points"),
                           parse_number(cells[4], "points")}});
      } else {
        throw validation_error("points file '" + o.points_file + "' line " +
                               std::to_string(lineno) +
                               ": expected chart,c0,c1,c2,c3 or c0,c1,c2,c3");
      }
    }
    if (inputs.empty())
      throw validation_error("points file '" + o.points_file +
                             "' contains no rows");
  } else {
    if (o.point.size() != 4)
      throw validation_error("point: expected four coordinates c0,c1,c2,c3");
    inputs.push_back({o.chart, {o.point[0], o.point[1], o.point[2], o.point[3]}});
  }

  Table t;
  t.columns = {"t",  "x1",  "x2",  "x3",  "T",  "X1", "X2",    "X3",
               "tau", "xi1", "xi2", "xi3", "Tp", "R",  "Omega", "det"};
  for (const auto& in : inputs) {
    const SpacetimePoint p = to_standard(in.chart, in.c);
    const HyperboloidalPoint h = kelvin_forward(p);
    const SimilarityPoint s = to_similarity(p);
    const PenrosePoint pz = penrose_map(p.t, std::sqrt(norm2(p.x)));
    t.rows.push_back({p.t, p.x[0], p.x[1], p.x[2], h.T, h.X[0], h.X[1], h.X[2],
                      s.tau, s.xi[0], s.xi[1], s.xi[2], pz.Tp, pz.R, pz.Omega,
                      jacobian_det(h)});
  }
  rep.tables["charts"] = std::move(t);
  rep.scalars["points"] = (double)inputs.size();
}

// ------------------------------------------------------------------ specfun

struct SpecfunOpts {
  std::string table = "phi0";
  int ell = 0;
  std::string lambda = "0.5";
  double zmin = 0.05, zmax = 0.95;
  int samples = 19;
  bool free_family = false;
};

void run_specfun(const SpecfunOpts& o, Report& rep) {
  if (o.table == "wronskian") {
    Table t;
    t.columns = {"ell", "wronskian", "boundary_limit"};
    for (int l = 0; l <= o.ell; ++l)
      t.rows.push_back({(double)l, wronskian_constant(l),
                        phi0_boundary_limit(l)});
    rep.tables["wronskian"] = std::move(t);
    return;
  }
  if (o.table != "phi0" && o.table != "phi1")
    throw validation_error("table: unknown table '" + o.table +
                           "' (phi0|phi1|wronskian)");
  if (!(o.zmin > 0.0) || !(o.zmax < 1.0) || !(o.zmin <= o.zmax))
    throw validation_error("z range: need 0 < zmin <= zmax < 1");
  if (o.samples < 1) throw validation_error("samples: need at least 1");
  const cplx lam = parse_complex(o.lambda, "lambda");
  const HypFamily fam = mode_family(o.ell, lam, !o.free_family);
  rep.scalars["a_re"] = fam.a.real();
  rep.scalars["a_im"] = fam.a.imag();
  rep.scalars["b_re"] = fam.b.real();
  rep.scalars["b_im"] = fam.b.imag();
  rep.scalars["c_re"] = fam.c.real();
  if (!o.free_family) {
    const cplx q = quantization_function(o.ell, lam);
    rep.scalars["quantization_re"] = q.real();
    rep.scalars["quantization_im"] = q.imag();
  }
  Table t;
  t.columns = {"z", "re", "im"};
  for (int k = 0; k < o.samples; ++k) {
    const double z = o.samples == 1 ? o.zmin
                                    : o.zmin + (o.zmax - o.zmin) * k /
                                                   (double)(o.samples - 1);
    const cplx v = o.table == "phi0" ? phi0(fam, z) : phi1(fam, z);
    t.rows.push_back({z, v.real(), v.imag()});
  }
  rep.tables[o.table] = std::move(t);
}

// ----------------------------------------------------------------- spectrum

struct SpectrumOpts {
  int ell = 0;
  int n = 32;
  bool free_family = false;
  bool filtered = false;
  bool projection = false;
  double move_tol = 1e-4;
};

void run_spectrum(const SpectrumOpts& o, Report& rep) {
  Table t;
  t.columns = {"re", "im", "accepted"};
  if (o.filtered) {
    const FilteredSpectrum fs =
        filtered_spectrum(o.n, o.ell, !o.free_family, o.move_tol);
    for (const cplx& z : fs.accepted)
      t.rows.push_back({z.real(), z.imag(), 1.0});
    for (const cplx& z : fs.rejected)
      t.rows.push_back({z.real(), z.imag(), 0.0});
    rep.scalars["n_accepted"] = (double)fs.accepted.size();
    rep.scalars["n_rejected"] = (double)fs.rejected.size();
  } else {
    RadialGrid g(o.n);
    const GeneratorMatrix gen = build_generator(g, o.ell, !o.free_family);
    const Eigen::VectorXcd ev = spectrum_eigenvalues(gen);
    for (int i = 0; i < ev.size(); ++i)
      t.rows.push_back({ev[i].real(), ev[i].imag(), 1.0});
  }
  rep.tables["eigenvalues"] = std::move(t);

  if (!o.free_family) {
    const std::vector<double> roots = find_eigenvalues(o.ell);
    rep.scalars["root_count"] = (double)roots.size();
    for (std::size_t i = 0; i < roots.size(); ++i)
      rep.scalars["root_" + std::to_string(i)] = roots[i];
  }
  if (o.projection) {
    RadialGrid g(o.n);
    const GeneratorMatrix gen = build_generator(g, o.ell, !o.free_family);
    const ProjectionMatrix p =
        unstable_projection(gen, ProjectionMethod::contour);
    rep.scalars["projection_rank"] = (double)p.rank;
    rep.scalars["idempotency_defect"] = p.idempotency_defect;
    rep.scalars["commutator_defect"] = p.commutator_defect;
  }
}

// ------------------------------------------------------------------- evolve

struct EvolveOpts {
  int ell = 0;
  int n = 32;
  double dtau = -1.0;
  double tau_end = 5.0;
  std::string data = "bump:0.01";
  bool nonlinear = false;
  bool free_family = false;
  int stride = 1;
  double guard = 10.0;
  std::string save_trajectory;
  std::string save_snapshot;
};

void run_evolve(const EvolveOpts& o, Report& rep) {
  int n = 0;
  const ModeField u = load_field(o.data, o.ell, o.n, n);
  RadialGrid g(n);
  EvolutionConfig ec;
  ec.ell = o.ell;
  ec.n = n;
  ec.dtau = o.dtau;
  ec.tau_end = o.tau_end;
  ec.nonlinear = o.nonlinear;
  ec.with_potential = !o.free_family;
  ec.guard = o.guard;
  ec.snapshot_stride = o.stride;
  const Trajectory traj = evolve_mode(u, g, ec);

  Table nh;
  nh.columns = {"tau", "norm"};
  for (const auto& [tau, nrm] : traj.norm_history) nh.rows.push_back({tau, nrm});
  rep.tables["norm_history"] = std::move(nh);
  rep.scalars["final_tau"] = traj.norm_history.back().first;
  rep.scalars["final_norm"] = traj.norm_history.back().second;
  rep.scalars["blowup"] = traj.blowup ? 1.0 : 0.0;
  if (traj.blowup) rep.scalars["blowup_tau"] = traj.blowup_tau;
  rep.scalars["instability"] = traj.instability ? 1.0 : 0.0;
  if (!traj.blowup) {
    const double hi = traj.norm_history.back().first;
    const double lo = hi * 0.2;
    bool positive = true;
    for (const auto& [tau, nrm] : traj.norm_history)
      if (tau >= lo && tau <= hi && !(nrm > 0.0)) positive = false;
    if (positive && hi > lo) {
      const RateFit fit = measure_decay_rate(traj, lo, hi);
      rep.scalars["fit_slope"] = fit.slope;
      rep.scalars["fit_residual"] = fit.residual;
    }
  }
  if (!o.save_trajectory.empty())
    write_text_atomic(o.save_trajectory,
                      table_to_csv(trajectory_to_table(traj, n)));
  if (!o.save_snapshot.empty())
    write_text_atomic(o.save_snapshot,
                      table_to_csv(field_to_table(traj.snapshots.back().u, g)));
}

// --------------------------------------------------------------------- flux

struct FluxOpts {
  std::string profile = "gaussian:0.45,0.08";
  int cells = 400;
  double t0 = -1.0;
  double t_end = -0.125;
  bool ingoing = false;
};

void run_flux(const FluxOpts& o, Report& rep) {
  if (o.profile.rfind("gaussian:", 0) != 0)
    throw validation_error("profile: expected gaussian:center,width");
  const std::string spec = o.profile.substr(9);
  const auto comma = spec.find(',');
  if (comma == std::string::npos)
    throw validation_error("profile: expected gaussian:center,width");
  const double center = parse_number(spec.substr(0, comma), "profile center");
  const double width = parse_number(spec.substr(comma + 1), "profile width");
  const FreeWave1p1State s =
      gaussian_pulse_state(o.t0, o.cells, center, width, !o.ingoing);
  const FluxRecord fr = free_wave_1p1_evolve(s, o.t_end);

  Table t;
  t.columns = {"T", "energy", "decrement", "flux_formula", "flux_est"};
  for (std::size_t k = 0; k < fr.T.size(); ++k)
    t.rows.push_back({fr.T[k], fr.energy[k], fr.decrement[k],
                      fr.flux_formula[k], fr.flux_est[k]});
  rep.tables["flux"] = std::move(t);
  rep.scalars["initial_energy"] = fr.energy.front();
  rep.scalars["final_energy"] = fr.energy.back();
  double max_inc = 0.0;
  for (double d : fr.decrement) max_inc = std::max(max_inc, d);
  rep.scalars["max_step_increase"] = max_inc;
}

// --------------------------------------------------------------- strichartz

struct StrichartzOpts {
  std::string trajectory;
  double delta = 0.05;
  double t0 = 16.0;
  int doublings = 3;
};

void run_strichartz(const StrichartzOpts& o, Report& rep) {
  if (o.trajectory.empty())
    throw validation_error("trajectory: a stored trajectory file is required");
  if (o.doublings < 1)
    throw validation_error("doublings: need at least one dyadic step");
  const Trajectory traj =
      trajectory_from_table(table_from_csv(read_text(o.trajectory)),
                            o.trajectory);
  RadialGrid g(traj.config.n);
  Table t;
  t.columns = {"t", "value"};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k <= o.doublings; ++k) {
    const double tk = o.t0 * std::pow(2.0, k);
    const double v = strichartz_norm(traj, g, tk, o.delta);
    t.rows.push_back({tk, v});
    if (!(v > 0.0))
      throw numerical_error("strichartz value vanished at t = " +
                            format_double(tk) + "; no exponent can be fitted");
    const double x = std::log(tk), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = (double)(o.doublings + 1);
  rep.tables["strichartz"] = std::move(t);
  rep.scalars["exponent"] = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  rep.scalars["points"] = m;
}

// -------------------------------------------------------------------- shoot

struct ShootOpts {
  std::string data = "zero";
  std::string family = "affine";
  int ell = 0;  // fixed; kept for the config echo
  int n = 48;
  double alpha_min = -0.1;
  double alpha_max = 0.1;
  double tol = 1e-6;
  double tau_end = 16.0;
  double guard = 10.0;
};

void run_shoot(const ShootOpts& o, Report& rep) {
  ShootConfig sc;
  sc.tol = o.tol;
  sc.tau_end = o.tau_end;
  sc.guard = o.guard;
  ShootResult r;
  if (o.family == "va") {
    sc.n = o.n;
    RadialGrid g(o.n);
    r = shoot_radial([&g](double b) { return exact_family_va(b, 0.0, g); },
                     o.alpha_min, o.alpha_max, g, sc);
  } else if (o.family == "affine") {
    int n = 0;
    const ModeField f = load_field(o.data, 0, o.n, n);
    sc.n = n;
    RadialGrid g(n);
    r = shoot_radial(f, o.alpha_min, o.alpha_max, g, sc);
  } else {
    throw validation_error("family: unknown family '" + o.family +
                           "' (affine|va)");
  }
  rep.scalars["alpha_star"] = r.alpha;
  rep.scalars["bracket_lo"] = r.bracket_lo;
  rep.scalars["bracket_hi"] = r.bracket_hi;
  rep.scalars["evaluations"] = (double)r.evaluations;
  rep.scalars["outcome_code"] = (double)(int)r.at_alpha.outcome;
  rep.config["outcome"] = to_string(r.at_alpha.outcome);
  if (std::isfinite(r.at_alpha.slope))
    rep.scalars["slope_at_alpha"] = r.at_alpha.slope;
  rep.scalars["mean_u1_final"] = r.at_alpha.mean_u1_final;
}

// ----------------------------------------------------------------- manifold

struct ManifoldOpts {
  std::string data = "bump:0.002";
  int ell = 0;
  int n = 32;
  double delta = 0.05;
  double eps = 0.05;
  double horizon = 12.2;
  int stride = 5;
  int max_iters = 25;
  double fix_tol = 1e-10;
  bool linearized = false;
  bool project = false;
};

void run_manifold(const ManifoldOpts& o, Report& rep) {
  IterationConfig mc;
  mc.ell = o.ell;
  mc.delta = o.delta;
  mc.eps = o.eps;
  mc.tau_horizon = o.horizon;
  mc.snapshot_stride = o.stride;
  mc.max_iters = o.max_iters;
  mc.fix_tol = o.fix_tol;
  mc.linearized = o.linearized;
  int n = 0;
  ModeField u = load_field(o.data, o.ell, o.n, n);
  mc.n = n;
  RadialGrid g(n);
  if (o.project) u = remove_unstable(u, g, mc);
  const DuhamelResult r = duhamel_iterate(u, g, mc);

  for (int i = 0; i < 4; ++i)
    rep.scalars["c" + std::to_string(i)] = r.correction.c[i];
  rep.scalars["iters"] = (double)r.iters;
  rep.scalars["residual"] = r.residual;
  rep.scalars["weighted_norm"] = weighted_sup_norm(r.phi, g, mc.eps);
  rep.scalars["data_norm"] = energy_norm(u, g);

  Table ct;
  ct.columns = {"iter", "step_norm", "ratio"};
  for (std::size_t k = 0; k < r.step_norms.size(); ++k)
    ct.rows.push_back({(double)(k + 1), r.step_norms[k],
                       k > 0 ? r.contraction[k - 1] : 0.0});
  rep.tables["contraction"] = std::move(ct);

  Table nh;
  nh.columns = {"tau", "norm"};
  for (const Snapshot& s : r.phi.snapshots)
    nh.rows.push_back({s.tau, energy_norm(s.u, g)});
  rep.tables["norm_history"] = std::move(nh);
}

// -------------------------------------------------------------------- check

struct CheckOpts {
  std::string report;
  std::string golden;
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "numerical laboratory for hyperboloidal evolution of the focusing "
      "cubic wave equation"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value file mirroring the flags ([subcommand] sections)");

  std::string out_dir = ".";
  std::uint64_t seed = 12345;
  app.add_option("--out", out_dir, "directory for report files")
      ->capture_default_str();
  app.add_option("--seed", seed, "seed echoed into reports")
      ->capture_default_str();

  // Each subcommand fills its Report inside `body`; shared plumbing below
  // handles the config echo, timing, atomic writes, and error wrapping.
  struct Pending {
    std::string name;
    std::function<void(Report&)> body;
    std::function<void(Report&)> echo;
  };
  auto pending = std::make_shared<Pending>();

  {
    auto o = std::make_shared<TransformOpts>();
    CLI::App* c = app.add_subcommand(
        "transform", "convert events between the four charts");
    c->add_option("--chart", o->chart,
                  "input chart (standard|hyperboloidal|similarity|penrose)")
        ->capture_default_str();
    c->add_option("--points", o->points_file,
                  "CSV of rows chart,c0,c1,c2,c3 (or c0..c3 using --chart)");
    c->add_option("--point", o->point, "single event c0,c1,c2,c3")
        ->delimiter(',')
        ->expected(4);
    c->callback([o, pending]() {
      pending->name = "transform";
      pending->body = [o](Report& r) { run_transform(*o, r); };
      pending->echo = [o](Report& r) {
        cfg(r, "chart", o->chart);
        if (!o->points_file.empty()) cfg(r, "points", o->points_file);
      };
    });
  }
  {
    auto o = std::make_shared<SpecfunOpts>();
    CLI::App* c = app.add_subcommand(
        "specfun", "sample the hypergeometric mode solutions");
    c->add_option("--table", o->table, "phi0|phi1|wronskian")
        ->capture_default_str();
    c->add_option("--ell", o->ell, "mode number")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    c->add_option("--lambda", o->lambda, "spectral parameter RE[,IM]")
        ->capture_default_str();
    c->add_option("--zmin", o->zmin)->capture_default_str();
    c->add_option("--zmax", o->zmax)->capture_default_str();
    c->add_option("--n", o->samples, "number of z samples")
        ->capture_default_str();
    c->add_flag("--free", o->free_family, "use the potential-free family");
    c->callback([o, pending]() {
      pending->name = "specfun";
      pending->body = [o](Report& r) { run_specfun(*o, r); };
      pending->echo = [o](Report& r) {
        cfg(r, "table", o->table);
        cfg(r, "ell", o->ell);
        cfg(r, "lambda", o->lambda);
        cfg(r, "zmin", o->zmin);
        cfg(r, "zmax", o->zmax);
        cfg(r, "samples", o->samples);
        cfg(r, "free", o->free_family);
      };
    });
  }
  {
    auto o = std::make_shared<SpectrumOpts>();
    CLI::App* c = app.add_subcommand(
        "spectrum", "eigenvalues of the discretized mode generator");
    c->add_option("--ell", o->ell)->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    c->add_option("--n", o->n, "radial resolution")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c->add_flag("--free", o->free_family, "drop the potential term");
    c->add_flag("--filtered", o->filtered,
                "apply the resolution-doubling filter");
    c->add_flag("--projection", o->projection,
                "also emit unstable-projection rank and defects");
    c->add_option("--move-tol", o->move_tol,
                  "filter acceptance radius under doubling")
        ->capture_default_str();
    c->callback([o, pending]() {
      pending->name = "spectrum";
      pending->body = [o](Report& r) { run_spectrum(*o, r); };
      pending->echo = [o](Report& r) {
        cfg(r, "ell", o->ell);
        cfg(r, "n", o->n);
        cfg(r, "free", o->free_family);
        cfg(r, "filtered", o->filtered);
        cfg(r, "projection", o->projection);
        cfg(r, "move_tol", o->move_tol);
      };
    });
  }
  {
    auto o = std::make_shared<EvolveOpts>();
    CLI::App* c =
        app.add_subcommand("evolve", "evolve one mode in the slow time");
    c->add_option("--ell", o->ell)->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    c->add_option("--n", o->n, "radial resolution (data files override)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c->add_option("--dtau", o->dtau, "time step (<= 0 selects 2/n^2)")
        ->capture_default_str();
    c->add_option("--tau-end", o->tau_end)->capture_default_str();
    c->add_option("--data", o->data,
                  "zero|mode1|mode0|va:A|bump:A|file.csv (columns rho,u1,u2)")
        ->capture_default_str();
    c->add_flag("--nonlinear", o->nonlinear,
                "include the cubic nonlinearity (ell = 0 only)");
    c->add_flag("--free", o->free_family, "drop the potential term");
    c->add_option("--stride", o->stride, "snapshot stride")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c->add_option("--guard", o->guard, "blowup guard on max |u1|")
        ->capture_default_str();
    c->add_option("--save-trajectory", o->save_trajectory,
                  "write snapshots (with derivatives) to this CSV");
    c->add_option("--save-snapshot", o->save_snapshot,
                  "write the final state to this CSV (columns rho,u1,u2)");
    c->callback([o, pending]() {
      pending->name = "evolve";
      pending->body = [o](Report& r) { run_evolve(*o, r); };
      pending->echo = [o](Report& r) {
        cfg(r, "ell", o->ell);
        cfg(r, "n", o->n);
        cfg(r, "dtau", o->dtau);
        cfg(r, "tau_end", o->tau_end);
        cfg(r, "data", o->data);
        cfg(r, "nonlinear", o->nonlinear);
        cfg(r, "free", o->free_family);
        cfg(r, "stride", o->stride);
        cfg(r, "guard", o->guard);
      };
    });
  }
  {
    auto o = std::make_shared<FluxOpts>();
    CLI::App* c = app.add_subcommand(
        "flux", "1+1 free-wave boundary-flux energy balance");
    c->add_option("--profile", o->profile, "gaussian:center,width")
        ->capture_default_str();
    c->add_option("--cells", o->cells, "radial cells at T0")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c->add_option("--t0", o->t0, "initial slice time (negative)")
        ->capture_default_str();
    c->add_option("--t-end", o->t_end, "final slice time in (t0, 0)")
        ->capture_default_str();
    c->add_flag("--ingoing", o->ingoing, "launch the pulse inward");
    c->callback([o, pending]() {
      pending->name = "flux";
      pending->body = [o](Report& r) { run_flux(*o, r); };
      pending->echo = [o](Report& r) {
        cfg(r, "profile", o->profile);
        cfg(r, "cells", o->cells);
        cfg(r, "t0", o->t0);
        cfg(r, "t_end", o->t_end);
        cfg(r, "ingoing", o->ingoing);
      };
    });
  }
  {
    auto o = std::make_shared<StrichartzOpts>();
    CLI::App* c = app.add_subcommand(
        "strichartz", "localized space-time norm of a stored trajectory");
    c->add_option("--trajectory", o->trajectory,
                  "CSV written by evolve --save-trajectory")
        ->required();
    c->add_option("--delta", o->delta, "spatial cutoff parameter")
        ->capture_default_str();
    c->add_option("--t0", o->t0, "first window time")->capture_default_str();
    c->add_option("--doublings", o->doublings, "number of dyadic steps")
        ->capture_default_str();
    c->callback([o, pending]() {
      pending->name = "strichartz";
      pending->body = [o](Report& r) { run_strichartz(*o, r); };
      pending->echo = [o](Report& r) {
        cfg(r, "trajectory", o->trajectory);
        cfg(r, "delta", o->delta);
        cfg(r, "t0", o->t0);
        cfg(r, "doublings", o->doublings);
      };
    });
  }
  {
    auto o = std::make_shared<ShootOpts>();
    CLI::App* c = app.add_subcommand(
        "shoot", "bisect the decay/blowup threshold along a data family");
    c->add_option("--data", o->data,
                  "base data (family affine): zero|bump:A|file.csv")
        ->capture_default_str();
    c->add_option("--family", o->family,
                  "affine (data + alpha * growing mode) or va")
        ->capture_default_str();
    c->add_option("--n", o->n)->check(CLI::PositiveNumber)
        ->capture_default_str();
    c->add_option("--alpha-min", o->alpha_min)->capture_default_str();
    c->add_option("--alpha-max", o->alpha_max)->capture_default_str();
    c->add_option("--tol", o->tol, "bisection bracket tolerance")
        ->capture_default_str();
    c->add_option("--tau-end", o->tau_end, "trust horizon per evolution")
        ->capture_default_str();
    c->add_option("--guard", o->guard)->capture_default_str();
    c->callback([o, pending]() {
      pending->name = "shoot";
      pending->body = [o](Report& r) { run_shoot(*o, r); };
      pending->echo = [o](Report& r) {
        cfg(r, "data", o->data);
        cfg(r, "family", o->family);
        cfg(r, "n", o->n);
        cfg(r, "alpha_min", o->alpha_min);
        cfg(r, "alpha_max", o->alpha_max);
        cfg(r, "tol", o->tol);
        cfg(r, "tau_end", o->tau_end);
        cfg(r, "guard", o->guard);
      };
    });
  }
  {
    auto o = std::make_shared<ManifoldOpts>();
    CLI::App* c = app.add_subcommand(
        "manifold", "data-correction fixed point on the stable surface");
    c->add_option("--data", o->data, "zero|bump:A|file.csv (columns rho,u1,u2)")
        ->capture_default_str();
    c->add_option("--ell", o->ell)->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    c->add_option("--n", o->n)->check(CLI::PositiveNumber)
        ->capture_default_str();
    c->add_option("--delta", o->delta, "ball radius")->capture_default_str();
    c->add_option("--eps", o->eps, "weight exponent offset")
        ->capture_default_str();
    c->add_option("--horizon", o->horizon, "tail truncation time")
        ->capture_default_str();
    c->add_option("--stride", o->stride, "snapshot stride")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c->add_option("--max-iters", o->max_iters)->check(CLI::PositiveNumber)
        ->capture_default_str();
    c->add_option("--fix-tol", o->fix_tol, "fixed-point stopping tolerance")
        ->capture_default_str();
    c->add_flag("--linearized", o->linearized, "drop the nonlinearity");
    c->add_flag("--project", o->project,
                "remove the growing component from the data first");
    c->callback([o, pending]() {
      pending->name = "manifold";
      pending->body = [o](Report& r) { run_manifold(*o, r); };
      pending->echo = [o](Report& r) {
        cfg(r, "data", o->data);
        cfg(r, "ell", o->ell);
        cfg(r, "n", o->n);
        cfg(r, "delta", o->delta);
        cfg(r, "eps", o->eps);
        cfg(r, "horizon", o->horizon);
        cfg(r, "stride", o->stride);
        cfg(r, "max_iters", o->max_iters);
        cfg(r, "fix_tol", o->fix_tol);
        cfg(r, "linearized", o->linearized);
        cfg(r, "project", o->project);
      };
    });
  }
  {
    auto o = std::make_shared<CheckOpts>();
    CLI::App* c = app.add_subcommand(
        "check", "compare a report against a golden report");
    c->add_option("--report", o->report, "report JSON to check")->required();
    c->add_option("--golden", o->golden, "golden report JSON")->required();
    c->add_option("--abs-tol", o->abs_tol)->capture_default_str();
    c->add_option("--rel-tol", o->rel_tol)->capture_default_str();
    c->callback([o, pending]() {
      pending->name = "check";
      pending->body = [o](Report& r) {
        const GoldenDiff d = golden_check(read_report(o->report),
                                          read_report(o->golden), o->abs_tol,
                                          o->rel_tol);
        r.scalars["pass"] = d.pass ? 1.0 : 0.0;
        r.config["result"] = d.message;
      };
      pending->echo = [o](Report& r) {
        cfg(r, "report", o->report);
        cfg(r, "golden", o->golden);
        cfg(r, "abs_tol", o->abs_tol);
        cfg(r, "rel_tol", o->rel_tol);
      };
    });
  }

  // CLI11 wants argv order reversed.
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "argument error: " << e.what() << "\n";
    return 1;
  }

  Report rep;
  rep.subcommand = pending->name;
  pending->echo(rep);
  cfg(rep, "seed", std::to_string(seed));
  cfg(rep, "out", out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    try {
      pending->body(rep);
    } catch (const validation_error& e) {
      throw validation_error(std::string(e.what()) + "  [" + config_echo(rep) +
                             "]");
    } catch (const numerical_error& e) {
      throw numerical_error(std::string(e.what()) + "  [" + config_echo(rep) +
                            "]");
    } catch (const io_error& e) {
      throw io_error(std::string(e.what()) + "  [" + config_echo(rep) + "]");
    }
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (pending->name == "check") {
      const bool pass = rep.scalars.at("pass") == 1.0;
      out << rep.config.at("result") << "\n";
      return pass ? 0 : 1;
    }
    const std::string path = write_report(rep, out_dir, rep.subcommand);
    out << rep.subcommand << ": wrote " << path << "\n";
    for (const auto& [k, v] : rep.scalars)
      out << "  " << k << " = " << format_double(v) << "\n";
    return 0;
  } catch (const validation_error& e) {
    err << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const numerical_error& e) {
    err << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace hypwave
