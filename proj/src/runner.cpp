#include "wavelab/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wavelab/csv.hpp"
#include "wavelab/diagnostics.hpp"
#include "wavelab/divcurl.hpp"
#include "wavelab/parallel.hpp"
#include "wavelab/spectral.hpp"
#include "wavelab/swe.hpp"
#include "wavelab/waterwaves.hpp"

namespace wavelab {

namespace {

constexpr const char* kVersion = "0.1.0";

namespace fs = std::filesystem;

struct Prepared {
  Grid grid;
  Params params;
  HField b;
  PressureForcing forcing;
  double dt = 0.0;
  int nsteps = 0;
  bool has_ww = false, has_sw = false;
  WaterWavesState ww0;
  SweState sw0;
  double init_div_violation = 0.0;
};

PressureForcing make_forcing(const ForcingSpec& f, const Grid& g) {
  if (f.type == "none") return PressureForcing::none();
  if (f.width < 4.0 * g.dx())
    throw ConfigError("forcing width must be at least 4 dx to stay band-limited");
  if (f.type == "traveling_bump") return PressureForcing::traveling_bump(f.p0, f.speed, f.width);
  return PressureForcing::smooth_step(f.p0, f.width);
}

Prepared prepare(const ScenarioConfig& c) {
  Grid grid(c.nx, c.nz, c.mu, c.period);
  Params params = c.make_checked_params();
  HField b = evaluate(c.bathymetry, grid, c.seed);

  Prepared prep{grid,  params, b, make_forcing(c.forcing, grid), 0.0, 0,
                false, false,  WaterWavesState{}, SweState{}, 0.0};

  prep.has_ww = (c.model == "waterwaves" || c.model == "both");
  prep.has_sw = (c.model == "swe" || c.model == "both");

  HField zeta0 = evaluate(c.zeta0, grid, c.seed + 1);
  DepthFloor floor = depth_floor(zeta0, b, params);
  if (floor.flagged)
    throw ConfigError("initial data violates the depth floor, min depth = " +
                      std::to_string(floor.min_depth));

  if (prep.has_ww) {
    prep.ww0.zeta = zeta0;
    prep.ww0.psi = evaluate(c.psi0, grid, c.seed + 2);
    project_zero_mean(prep.ww0.psi);
    SigmaMap m = build_sigma(zeta0, b, params, grid);
    prep.ww0.omega = build_omega(c.omega0, m, grid);
    prep.ww0.omega = project_divergence_free(prep.ww0.omega, m, grid, &prep.init_div_violation);
  } else {
    prep.ww0.omega = StripVec3(c.nx, c.nz);
  }

  if (prep.has_sw) {
    prep.sw0.zeta = zeta0;
    if (c.model == "both") {
      // Saint-Venant initial data from the water-waves solve: Vbar0 is the
      // depth average, Q0 = Q[eps zeta0, beta b](psi0, omega0).
      DivCurlSolution sol = solve_divcurl(prep.ww0.zeta, b, prep.ww0.psi, prep.ww0.omega, params,
                                          grid, prep.ww0.tangential_mean);
      prep.sw0.v_bar = sol.v_bar;
      SigmaMap m = build_sigma(zeta0, b, params, grid);
      prep.sw0.q = q_from_omega(prep.ww0.omega, m, grid);
    } else {
      prep.sw0.v_bar = HVec(c.nx);
      prep.sw0.q = HVec(c.nx);
      prep.sw0.v_bar.x = evaluate(c.vbar0_x, grid, c.seed + 3);
      prep.sw0.v_bar.y = evaluate(c.vbar0_y, grid, c.seed + 4);
      prep.sw0.q.x = evaluate(c.q0_x, grid, c.seed + 5);
      prep.sw0.q.y = evaluate(c.q0_y, grid, c.seed + 6);
    }
  }

  double dt;
  if (c.dt) {
    dt = *c.dt;
  } else if (prep.has_ww) {
    WaterWavesStepper stepper(grid, b, params, prep.forcing);
    dt = stepper.auto_dt(prep.ww0);
  } else {
    SweStepper stepper(grid, b, params, prep.forcing);
    dt = stepper.auto_dt(prep.sw0);
  }
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  prep.nsteps = std::max(1, static_cast<int>(std::ceil(c.t_end / dt - 1e-12)));
  prep.dt = c.t_end / prep.nsteps;
  return prep;
}

std::string timestamp_utc() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

std::string field_spec_echo(const FieldSpec& spec) {
  if (spec.empty()) return "0";
  std::ostringstream os;
  for (size_t i = 0; i < spec.size(); ++i) {
    const auto& t = spec[i];
    if (i) os << " + ";
    switch (t.kind) {
      case FieldTerm::Kind::constant: os << format_full(t.amp); break;
      case FieldTerm::Kind::cosine: os << format_full(t.amp) << "*cos(" << t.k << ")"; break;
      case FieldTerm::Kind::sine: os << format_full(t.amp) << "*sin(" << t.k << ")"; break;
      case FieldTerm::Kind::random:
        os << "random(" << format_full(t.amp) << "," << t.k << ")";
        break;
    }
  }
  return os.str();
}

void write_manifest(const fs::path& path, const ScenarioConfig& c, const Prepared& p,
                    const std::string& extra) {
  std::ofstream out(path);
  out << "version = " << kVersion << "\n";
  out << "model = " << c.model << "\n";
  out << "eps = " << format_full(c.eps) << "\n";
  out << "beta = " << format_full(c.beta) << "\n";
  out << "mu = " << format_full(c.mu) << "\n";
  out << "ro = " << format_full(c.ro) << "\n";
  out << "mu_max = " << format_full(c.mu_max) << "\n";
  out << "h_min = " << format_full(c.h_min) << "\n";
  out << "a_min = " << format_full(c.a_min) << "\n";
  out << "nx = " << c.nx << "\n";
  out << "nz = " << c.nz << "\n";
  out << "period = " << format_full(c.period) << "\n";
  out << "zeta0 = " << field_spec_echo(c.zeta0) << "\n";
  out << "psi0 = " << field_spec_echo(c.psi0) << "\n";
  out << "bathymetry = " << field_spec_echo(c.bathymetry) << "\n";
  out << "forcing = " << c.forcing.type << "\n";
  out << "forcing_p0 = " << format_full(c.forcing.p0) << "\n";
  out << "forcing_speed = " << format_full(c.forcing.speed) << "\n";
  out << "forcing_width = " << format_full(c.forcing.width) << "\n";
  out << "t_end = " << format_full(c.t_end) << "\n";
  out << "dt = " << format_full(p.dt) << "\n";
  out << "nsteps = " << p.nsteps << "\n";
  out << "output_every = " << c.output_every << "\n";
  out << "seed = " << c.seed << "\n";
  out << "init_div_violation = " << format_full(p.init_div_violation) << "\n";
  if (!extra.empty()) out << extra;
  out << "timestamp = " << timestamp_utc() << "\n";
}

const std::vector<std::string> kRunHeader = {
    "t",    "zeta_linf", "zeta_l2",   "zeta_h3",  "vbar_linf", "min_depth",
    "min_rt", "mass",    "energy",    "enstrophy", "omega_l2",  "omega_div"};

void write_ww_series(const fs::path& path, const WwRun& run, const Grid& g) {
  CsvWriter csv(path.string(), kRunHeader);
  const double nan = std::nan("");
  for (const auto& r : run.records) {
    csv.row({r.t, linf(r.zeta), l2_norm(r.zeta, g), r.zeta_h3, linf(r.v_bar), r.min_depth,
             r.min_rt, r.mass, nan, nan, r.omega_l2, r.omega_div});
  }
}

void write_sw_series(const fs::path& path, const SweRun& run, const Grid& g) {
  CsvWriter csv(path.string(), kRunHeader);
  const double nan = std::nan("");
  for (const auto& r : run.records) {
    csv.row({r.t, linf(r.zeta), l2_norm(r.zeta, g), h_norm(r.zeta, 3.0, g), linf(r.v_bar),
             r.min_depth, nan, r.mass, r.energy, r.enstrophy, nan, nan});
  }
}

void write_ww_fields(const fs::path& dir, const WwRun& run, const Grid& g) {
  const std::vector<std::string> header = {"x",   "zeta",     "vbar_x",   "vbar_y", "q_x",
                                           "q_y", "v_surf_x", "v_surf_y", "w_surf"};
  for (size_t r = 0; r < run.records.size(); ++r) {
    char name[32];
    std::snprintf(name, sizeof(name), "fields_%06zu.csv", r);
    CsvWriter csv((dir / name).string(), header);
    const auto& rec = run.records[r];
    for (int i = 0; i < g.nx(); ++i)
      csv.row({g.x_nodes()[static_cast<size_t>(i)], rec.zeta[i], rec.v_bar.x[i], rec.v_bar.y[i],
               rec.q.x[i], rec.q.y[i], rec.v_surf.x[i], rec.v_surf.y[i], rec.w_surf[i]});
  }
}

void write_sw_fields(const fs::path& dir, const SweRun& run, const Grid& g) {
  const std::vector<std::string> header = {"x",   "zeta",     "vbar_x",   "vbar_y", "q_x",
                                           "q_y", "v_surf_x", "v_surf_y", "w_surf"};
  const double nan = std::nan("");
  for (size_t r = 0; r < run.records.size(); ++r) {
    char name[32];
    std::snprintf(name, sizeof(name), "fields_%06zu.csv", r);
    CsvWriter csv((dir / name).string(), header);
    const auto& rec = run.records[r];
    for (int i = 0; i < g.nx(); ++i)
      csv.row({g.x_nodes()[static_cast<size_t>(i)], rec.zeta[i], rec.v_bar.x[i], rec.v_bar.y[i],
               rec.q.x[i], rec.q.y[i], nan, nan, nan});
  }
}

void write_compare(const fs::path& path, const WwRun& ww, const SweRun& sw, const Grid& g) {
  CsvWriter csv(path.string(),
                {"t", "err_zeta", "err_vbar", "err_sqrtmu_q", "err_vsurf_wkb"});
  const double smu = std::sqrt(g.mu());
  size_t n = std::min(ww.records.size(), sw.records.size());
  for (size_t r = 0; r < n; ++r) {
    const auto& a = ww.records[r];
    const auto& b = sw.records[r];
    double ez = 0, ev = 0, eq = 0, ew = 0;
    for (int i = 0; i < g.nx(); ++i) {
      ez = std::max(ez, std::abs(a.zeta[i] - b.zeta[i]));
      ev = std::max(ev, std::max(std::abs(a.v_bar.x[i] - b.v_bar.x[i]),
                                 std::abs(a.v_bar.y[i] - b.v_bar.y[i])));
      eq = std::max(eq, smu * std::max(std::abs(a.q.x[i] - b.q.x[i]),
                                       std::abs(a.q.y[i] - b.q.y[i])));
      double wx = a.v_surf.x[i] - (a.v_bar.x[i] - smu * a.q.x[i]);
      double wy = a.v_surf.y[i] - (a.v_bar.y[i] - smu * a.q.y[i]);
      ew = std::max(ew, std::max(std::abs(wx), std::abs(wy)));
    }
    csv.row({a.t, ez, ev, eq, ew});
  }
}

}  // namespace

int run_scenario(const ScenarioConfig& config, const std::string& out_dir) {
  Prepared prep = prepare(config);
  fs::create_directories(out_dir);
  fs::path dir(out_dir);

  WwRun ww;
  SweRun sw;
  if (prep.has_ww)
    ww = run_waterwaves(prep.ww0, prep.b, prep.params, prep.grid, prep.forcing, prep.dt,
                        prep.nsteps, config.output_every, nullptr);
  if (prep.has_sw)
    sw = run_swe(prep.sw0, prep.b, prep.params, prep.grid, prep.forcing, prep.dt, prep.nsteps,
                 config.output_every);

  bool tripped = (prep.has_ww && ww.tripped) || (prep.has_sw && sw.tripped);
  std::string extra;
  if (tripped) {
    const std::string kind = prep.has_ww && ww.tripped ? ww.trip_kind : sw.trip_kind;
    const double t = prep.has_ww && ww.tripped ? ww.trip_t : sw.trip_t;
    extra = "trip = " + kind + "\ntrip_t = " + format_full(t) + "\n";
  }
  write_manifest(dir / "manifest.txt", config, prep, extra);

  if (prep.has_ww) {
    write_ww_series(dir / "run.csv", ww, prep.grid);
    write_ww_fields(dir, ww, prep.grid);
  }
  if (prep.has_sw) {
    write_sw_series(dir / (prep.has_ww ? "run_swe.csv" : "run.csv"), sw, prep.grid);
    if (!prep.has_ww) write_sw_fields(dir, sw, prep.grid);
  }
  if (prep.has_ww && prep.has_sw) write_compare(dir / "compare.csv", ww, sw, prep.grid);

  return tripped ? 2 : 0;
}

int run_sweep(const ScenarioConfig& config, const std::string& out_dir) {
  if (!config.sweep) throw ConfigError("sweep requires a [sweep] block");
  const SweepSpec& sw = *config.sweep;
  const size_t n = sw.values.size();
  if (n < 3) throw ConfigError("fewer than 3 sweep points for a slope fit");
  for (size_t i = 0; i + 1 < n; ++i)
    if (!(sw.values[i] > sw.values[i + 1]))
      throw ConfigError("sweep values must be strictly decreasing");

  fs::create_directories(out_dir);
  fs::path dir(out_dir);

  struct PointResult {
    std::vector<double> errs;
    std::string error;
  };
  std::vector<PointResult> results(n);

  auto eval_point = [&](size_t i) {
    ScenarioConfig c = config;
    c.sweep.reset();
    double v = sw.values[i];
    if (sw.parameter == "mu") c.mu = v;
    else if (sw.parameter == "dt") c.dt = v;
    else if (sw.parameter == "eps") c.eps = v;
    else throw ConfigError("sweep parameter must be mu | dt | eps");

    if (sw.metric == "model_error") {
      c.model = "both";
      Prepared prep = prepare(c);
      WwRun ww = run_waterwaves(prep.ww0, prep.b, prep.params, prep.grid, prep.forcing, prep.dt,
                                prep.nsteps, c.output_every, nullptr);
      SweRun swr = run_swe(prep.sw0, prep.b, prep.params, prep.grid, prep.forcing, prep.dt,
                           prep.nsteps, c.output_every);
      ModelError e = compare_models(ww, swr, prep.params, prep.grid);
      return std::vector<double>{e.zeta, e.v_bar, e.sqrtmu_q, e.combined};
    }
    if (sw.metric == "q_residual") {
      c.model = "waterwaves";
      c.output_every = 1;
      Prepared prep = prepare(c);
      WwRun ww = run_waterwaves(prep.ww0, prep.b, prep.params, prep.grid, prep.forcing, prep.dt,
                                prep.nsteps, 1, nullptr);
      auto res = q_equation_residual(ww, prep.params, prep.grid);
      double m = 0.0;
      for (double r : res) m = std::max(m, r);
      return std::vector<double>{m};
    }
    if (sw.metric == "dispersion") {
      Grid g(c.nx, c.nz, c.mu, c.period);
      double w = dispersion_ww_frequency(sw.mode, c.mu, c.nx, c.nz, c.period);
      return std::vector<double>{std::abs(w - g.wavenumber(sw.mode))};
    }
    if (sw.metric == "inertial_return") {
      return std::vector<double>{inertial_return_error(c.eps, c.ro, v)};
    }
    throw ConfigError("unknown sweep metric '" + sw.metric + "'");
  };

  parallel_for(static_cast<int>(n), [&](int i) {
    try {
      results[static_cast<size_t>(i)].errs = eval_point(static_cast<size_t>(i));
    } catch (const std::exception& e) {
      results[static_cast<size_t>(i)].error = e.what();
    }
  });
  for (const auto& r : results)
    if (!r.error.empty()) throw std::runtime_error("sweep point failed: " + r.error);

  std::vector<std::string> err_names;
  if (sw.metric == "model_error")
    err_names = {"err_zeta", "err_vbar", "err_sqrtmu_q", "err_combined"};
  else if (sw.metric == "q_residual")
    err_names = {"err_q_residual"};
  else if (sw.metric == "dispersion")
    err_names = {"err_dispersion"};
  else
    err_names = {"err_return"};

  {
    std::vector<std::string> header = {"parameter_value"};
    header.insert(header.end(), err_names.begin(), err_names.end());
    CsvWriter csv((dir / "sweep.csv").string(), header);
    for (size_t i = 0; i < n; ++i) {
      std::vector<double> row = {sw.values[i]};
      row.insert(row.end(), results[i].errs.begin(), results[i].errs.end());
      csv.row(row);
    }
  }
  {
    std::ofstream slopes(dir / "slopes.csv");
    slopes << "metric,slope,intercept,log_residual\r\n";
    for (size_t col = 0; col < err_names.size(); ++col) {
      std::vector<double> ys(n);
      for (size_t i = 0; i < n; ++i) ys[i] = results[i].errs[col];
      SlopeFit fit = loglog_fit(sw.values, ys);
      slopes << err_names[col] << ',' << format_full(fit.slope) << ',' << format_full(fit.intercept)
             << ',' << format_full(fit.residual) << "\r\n";
    }
  }
  {
    Prepared prep = prepare([&] {
      ScenarioConfig c = config;
      c.sweep.reset();
      return c;
    }());
    write_manifest(dir / "manifest.txt", config, prep,
                   "sweep_parameter = " + sw.parameter + "\nsweep_metric = " + sw.metric + "\n");
  }
  return 0;
}

int run_check() {
  struct Check {
    const char* name;
    bool (*fn)();
  };

  auto report = [](const char* name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    return ok;
  };

  int failures = 0;
  const double mu = 0.25;
  Grid g(64, 16, mu);
  Params p = make_params(0.1, 0.1, mu, 2.0);

  // Hodge round trip
  {
    HVec u(g.nx());
    for (int i = 0; i < g.nx(); ++i) {
      double x = g.x_nodes()[static_cast<size_t>(i)];
      u.x[i] = 0.3 + std::sin(x) + 0.2 * std::cos(2 * x);
      u.y[i] = -0.1 + 0.5 * std::cos(x);
    }
    HodgeParts parts = hodge_decompose(u, g);
    HField gx = fourier_d_dx(parts.psi, g);
    HField gy = fourier_d_dx(parts.psi_tilde, g);
    double err = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
      err = std::max(err, std::abs(u.x[i] - parts.mean[0] - gx[i]));
      err = std::max(err, std::abs(u.y[i] - parts.mean[1] - gy[i]));
    }
    if (!report("hodge decomposition reassembles the field", err < 1e-12)) ++failures;
  }

  // frak_P symmetry on zero-mean fields
  {
    HField f(g.nx()), h(g.nx());
    for (int i = 0; i < g.nx(); ++i) {
      double x = g.x_nodes()[static_cast<size_t>(i)];
      f[i] = std::sin(x) + 0.3 * std::cos(3 * x);
      h[i] = std::cos(2 * x) - 0.2 * std::sin(x);
    }
    HField pf = frak_P(f, mu, g), ph = frak_P(h, mu, g);
    double a = 0, b2 = 0, self = 0;
    for (int i = 0; i < g.nx(); ++i) {
      a += pf[i] * h[i];
      b2 += f[i] * ph[i];
      self += pf[i] * f[i];
    }
    bool ok = std::abs(a - b2) < 1e-10 && self >= -1e-12;
    if (!report("frak_P symmetric and nonnegative", ok)) ++failures;
  }

  // flat-strip Laplace cosh profile
  {
    HField zeta(g.nx()), b(g.nx()), psi(g.nx());
    for (int i = 0; i < g.nx(); ++i) psi[i] = std::cos(g.x_nodes()[static_cast<size_t>(i)]);
    StripField phi = solve_laplace(zeta, b, psi, p, g);
    double smu = std::sqrt(mu);
    double err = 0.0;
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.nz(); ++j) {
        double x = g.x_nodes()[static_cast<size_t>(i)], z = g.z_nodes()[static_cast<size_t>(j)];
        double exact = std::cos(x) * std::cosh(smu * (z + 1.0)) / std::cosh(smu);
        err = std::max(err, std::abs(phi.at(i, j) - exact));
      }
    if (!report("flat-strip Laplace matches cosh profile", err < 1e-10)) ++failures;
  }

  // linear shear div-curl
  {
    HField zeta(g.nx()), b(g.nx()), psi(g.nx());
    StripVec3 omega(g.nx(), g.nz());
    for (double& v : omega.y.v) v = 0.7;
    DivCurlSolution sol = solve_divcurl(zeta, b, psi, omega, p, g);
    double err = 0.0;
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.nz(); ++j) {
        double z = g.z_nodes()[static_cast<size_t>(j)];
        err = std::max(err, std::abs(sol.u_mu.x.at(i, j) - mu * 0.7 * z));
        err = std::max(err, std::abs(sol.u_mu.y.at(i, j)));
        err = std::max(err, std::abs(sol.u_mu.z.at(i, j)));
      }
    if (!report("constant-shear div-curl solution", err < 1e-10)) ++failures;
  }

  // flux identity on a curved instance
  {
    HField zeta(g.nx()), b(g.nx()), psi(g.nx());
    for (int i = 0; i < g.nx(); ++i) {
      double x = g.x_nodes()[static_cast<size_t>(i)];
      zeta[i] = 0.5 * std::cos(x);
      b[i] = 0.4 * std::sin(x);
      psi[i] = 0.3 * std::sin(x);
    }
    SigmaMap m = build_sigma(zeta, b, p, g);
    OmegaSpec os{OmegaSpec::Kind::smooth, 0.4, 1};
    StripVec3 omega = build_omega(os, m, g);
    DivCurlSolution sol = solve_divcurl(zeta, b, psi, omega, p, g);
    double r = flux_identity_check(sol, m, g);
    if (!report("flux identity U.N = -mu div(h Vbar)", r < 1e-8)) ++failures;
  }

  // lake at rest
  {
    HField b(g.nx());
    for (int i = 0; i < g.nx(); ++i) b[i] = 0.5 * std::cos(g.x_nodes()[static_cast<size_t>(i)]);
    SweStepper stepper(g, b, p, PressureForcing::none());
    SweState s{HField(g.nx()), HVec(g.nx()), HVec(g.nx()), 0.0};
    SweRhs r = stepper.rhs(s);
    bool ok = linf(r.dzeta) == 0.0 && linf(r.dv) == 0.0 && linf(r.dq) == 0.0;
    if (!report("lake at rest is an exact fixed point", ok)) ++failures;
  }

  // mass conservation over a short nonlinear run
  {
    HField b(g.nx()), zeta(g.nx());
    for (int i = 0; i < g.nx(); ++i)
      zeta[i] = 0.3 * std::cos(g.x_nodes()[static_cast<size_t>(i)]);
    SweState s{zeta, HVec(g.nx(), 0.1, 0.0), HVec(g.nx()), 0.0};
    SweRun run = run_swe(s, b, p, g, PressureForcing::none(), 0.02, 100, 100);
    double drift = std::abs(run.records.back().mass - run.records.front().mass);
    if (!report("mass conserved over 100 steps", drift < 1e-13)) ++failures;
  }

  // serial/parallel kernel agreement
  {
    StripField f(g.nx(), g.nz());
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.nz(); ++j)
        f.at(i, j) = std::sin(g.x_nodes()[static_cast<size_t>(i)]) *
                     (1.0 + g.z_nodes()[static_cast<size_t>(j)]);
    threads::set_enabled(true);
    StripField a = cheb_d_dz(f, g);
    threads::set_enabled(false);
    StripField b2 = cheb_d_dz(f, g);
    threads::set_enabled(true);
    bool ok = a.v == b2.v;
    if (!report("parallel kernels match the serial path bit for bit", ok)) ++failures;
  }

  return failures;
}

}  // namespace wavelab
