#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "wavelab/csv.hpp"
#include "wavelab/runner.hpp"
#include "wavelab/scenario.hpp"
#include "wavelab/spectral.hpp"

using namespace wavelab;
namespace fs = std::filesystem;

namespace {

// Column-named CSV reader: tests parse by name, never by position.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const {
    size_t idx = header.size();
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) idx = i;
    REQUIRE(idx < header.size());
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[idx]);
    return out;
  }
};

Csv read_csv(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  Csv csv;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (first) {
      while (std::getline(ss, cell, ',')) csv.header.push_back(cell);
      first = false;
    } else {
      std::vector<double> row;
      while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
      csv.rows.push_back(row);
    }
  }
  return csv;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_timestamp(const std::string& text) {
  std::stringstream in(text), out;
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("timestamp =", 0) != 0) out << line << "\n";
  return out.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("wavelab_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("field spec grammar") {
  Grid g(16, 4, 0.25);
  FieldSpec spec = parse_field_spec("0.1*cos(1) + 0.05*sin(2) - 0.3");
  HField f = evaluate(spec, g);
  for (int i = 0; i < 16; ++i) {
    double x = g.x_nodes()[static_cast<size_t>(i)];
    CHECK(f[i] ==
          doctest::Approx(0.1 * std::cos(x) + 0.05 * std::sin(2 * x) - 0.3).epsilon(1e-14));
  }
  CHECK(parse_field_spec("").empty());
  CHECK(parse_field_spec("none").empty());
  CHECK_THROWS_AS(parse_field_spec("0.1*tan(1)"), ConfigError);
  CHECK_THROWS_AS(parse_field_spec("0.1*cos(1"), ConfigError);

  // random terms are deterministic given the seed
  FieldSpec r = parse_field_spec("random(0.2, 5)");
  HField a = evaluate(r, g, 42), b = evaluate(r, g, 42), c = evaluate(r, g, 43);
  CHECK(a.v == b.v);
  CHECK(a.v != c.v);
}

TEST_CASE("config parsing") {
  const std::string text = R"(
[model]
model = both

[params]
eps = 0.1
beta = 0.05
mu = 0.04
ro = 1.0

[grid]
nx = 32
nz = 8

[initial]
zeta0 = 0.4*cos(1)
psi0 = 0.3*sin(1)
omega0 = smooth 0.4 1

[bathymetry]
b = 0.5*cos(1)

[time]
t_end = 0.5
dt = 0.01
output_every = 5
)";
  ScenarioConfig c = parse_config_text(text);
  CHECK(c.model == "both");
  CHECK(c.eps == 0.1);
  CHECK(c.mu == 0.04);
  CHECK(c.nx == 32);
  CHECK(c.omega0.kind == OmegaSpec::Kind::smooth);
  CHECK(c.omega0.amp == 0.4);
  CHECK(c.t_end == 0.5);
  REQUIRE(c.dt.has_value());
  CHECK(*c.dt == 0.01);
  CHECK_FALSE(c.sweep.has_value());

  CHECK_THROWS_WITH_AS(parse_config_text("[params]\nepsilon = 0.1\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[model]\nmodel = magic\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[grid]\nnx\n"), ConfigError);
}

TEST_CASE("rest-state scenario writes constant-zero series") {
  ScenarioConfig c = parse_config_text(R"(
[model]
model = waterwaves
[params]
eps = 0.1
beta = 0.0
mu = 0.25
ro = inf
[grid]
nx = 16
nz = 8
[time]
t_end = 0.2
dt = 0.05
output_every = 1
)");
  fs::path dir = fresh_dir("rest");
  CHECK(run_scenario(c, dir.string()) == 0);
  Csv run = read_csv(dir / "run.csv");
  CHECK(run.rows.size() == 5);  // t = 0 plus 4 steps
  for (double v : run.column("zeta_linf")) CHECK(v == 0.0);
  for (double v : run.column("mass")) CHECK(v == 0.0);
  for (double v : run.column("min_depth")) CHECK(v == 1.0);
  CHECK(fs::exists(dir / "manifest.txt"));
  CHECK(fs::exists(dir / "fields_000000.csv"));
  fs::remove_all(dir);
}

TEST_CASE("inertial oscillation preset traces a circle of constant radius") {
  const double eps = 0.5, ro = 1.0;
  double period = two_pi * ro / eps;
  std::ostringstream cfg;
  cfg << R"(
[model]
model = swe
[params]
eps = 0.5
beta = 0.0
mu = 0.04
ro = 1.0
[initial]
vbar0_x = 0.3
vbar0_y = 0.0
[grid]
nx = 8
nz = 4
[time]
)";
  cfg << "t_end = " << format_full(period) << "\n";
  cfg << "dt = " << format_full(period / 512) << "\n";
  cfg << "output_every = 8\n";
  ScenarioConfig c = parse_config_text(cfg.str());
  fs::path dir = fresh_dir("inertial");
  CHECK(run_scenario(c, dir.string()) == 0);
  // the radius is the vector magnitude, read from the field snapshots
  int nsnaps = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("fields_", 0) != 0) continue;
    ++nsnaps;
    Csv snap = read_csv(entry.path());
    auto vx = snap.column("vbar_x");
    auto vy = snap.column("vbar_y");
    for (size_t i = 0; i < vx.size(); ++i)
      CHECK(std::hypot(vx[i], vy[i]) == doctest::Approx(0.3).epsilon(1e-10));
  }
  CHECK(nsnaps >= 64);
  fs::remove_all(dir);
}

TEST_CASE("both-models scenario emits the comparison series") {
  ScenarioConfig c = parse_config_text(R"(
[model]
model = both
[params]
eps = 0.1
beta = 0.05
mu = 0.04
ro = 1.0
[grid]
nx = 32
nz = 8
[initial]
zeta0 = 0.3*cos(1)
psi0 = 0.2*sin(1)
omega0 = shear 0.5
[bathymetry]
b = 0.4*cos(1)
[time]
t_end = 0.1
dt = 0.02
output_every = 1
)");
  fs::path dir = fresh_dir("both");
  CHECK(run_scenario(c, dir.string()) == 0);
  CHECK(fs::exists(dir / "run.csv"));
  CHECK(fs::exists(dir / "run_swe.csv"));
  Csv cmp = read_csv(dir / "compare.csv");
  CHECK(cmp.rows.size() == 6);
  auto ez = cmp.column("err_zeta");
  CHECK(ez.front() == 0.0);        // identical initial data
  CHECK(ez.back() < 0.05);         // short horizon, small mu
  CHECK(ez.back() > 0.0);
  fs::remove_all(dir);
}

TEST_CASE("re-running a config reproduces outputs byte-identically") {
  ScenarioConfig c = parse_config_text(R"(
[model]
model = both
[params]
eps = 0.1
beta = 0.05
mu = 0.04
ro = 1.0
[grid]
nx = 32
nz = 8
[initial]
zeta0 = 0.3*cos(1) + random(0.05, 3)
psi0 = 0.2*sin(1)
omega0 = smooth 0.4 1
[bathymetry]
b = 0.4*cos(1)
[time]
t_end = 0.1
dt = 0.02
[run]
seed = 7
)");
  fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
  CHECK(run_scenario(c, d1.string()) == 0);
  CHECK(run_scenario(c, d2.string()) == 0);
  for (const auto& entry : fs::directory_iterator(d1)) {
    fs::path other = d2 / entry.path().filename();
    REQUIRE(fs::exists(other));
    std::string a = slurp(entry.path()), b = slurp(other);
    if (entry.path().filename() == "manifest.txt") {
      CHECK(strip_timestamp(a) == strip_timestamp(b));
    } else {
      CHECK(a == b);
    }
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("monitor trip exits nonzero and is recorded in the manifest") {
  ScenarioConfig c = parse_config_text(R"(
[model]
model = waterwaves
[params]
eps = 0.5
beta = 0.0
mu = 0.09
ro = inf
h_min = 0.9
[grid]
nx = 32
nz = 10
[forcing]
type = traveling_bump
p0 = 1.0
speed = 1.0
width = 1.0
[time]
t_end = 8.0
dt = 0.02
output_every = 10
)");
  fs::path dir = fresh_dir("trip");
  CHECK(run_scenario(c, dir.string()) == 2);
  std::string manifest = slurp(dir / "manifest.txt");
  CHECK(manifest.find("trip = depth") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("sweep driver") {
  SUBCASE("dt sweep on the inertial oscillation fits slope 4") {
    ScenarioConfig c = parse_config_text(R"(
[model]
model = swe
[params]
eps = 0.5
beta = 0.0
mu = 0.04
ro = 1.0
[grid]
nx = 8
nz = 4
[sweep]
parameter = dt
values = 0.1, 0.05, 0.025
metric = inertial_return
)");
    fs::path dir = fresh_dir("sweep_dt");
    CHECK(run_sweep(c, dir.string()) == 0);
    Csv slopes = read_csv(dir / "slopes.csv");
    double slope = slopes.column("slope")[0];
    CHECK(slope == doctest::Approx(4.0).epsilon(0.05));
    Csv table = read_csv(dir / "sweep.csv");
    CHECK(table.rows.size() == 3);
    fs::remove_all(dir);
  }
  SUBCASE("sweeps reject non-decreasing or short value lists") {
    ScenarioConfig c = parse_config_text(R"(
[model]
model = swe
[params]
eps = 0.5
mu = 0.04
ro = 1.0
[sweep]
parameter = eps
values = 0.1, 0.1, 0.05
metric = inertial_return
)");
    CHECK_THROWS_AS(run_sweep(c, fresh_dir("dup").string()), ConfigError);
    c.sweep->values = {0.1, 0.05};
    CHECK_THROWS_AS(run_sweep(c, fresh_dir("short").string()), ConfigError);
  }
}

TEST_CASE("forcing width must stay band-limited") {
  ScenarioConfig c = parse_config_text(R"(
[model]
model = swe
[params]
eps = 0.1
mu = 0.04
ro = inf
[grid]
nx = 16
nz = 4
[forcing]
type = traveling_bump
p0 = 1.0
speed = 1.0
width = 0.1
[time]
t_end = 0.1
dt = 0.05
)");
  CHECK_THROWS_AS(run_scenario(c, fresh_dir("width").string()), ConfigError);
}

TEST_CASE("mu sweep on the linear dispersion error fits slope close to 1") {
  ScenarioConfig c = parse_config_text(R"(
[model]
model = waterwaves
[params]
eps = 0.1
beta = 0.0
mu = 0.04
ro = inf
[grid]
nx = 32
nz = 12
[sweep]
parameter = mu
values = 0.04, 0.01, 0.0025
metric = dispersion
mode = 2
)");
  fs::path dir = fresh_dir("sweep_disp");
  CHECK(run_sweep(c, dir.string()) == 0);
  Csv slopes = read_csv(dir / "slopes.csv");
  double slope = slopes.column("slope")[0];
  CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
  fs::remove_all(dir);
}
