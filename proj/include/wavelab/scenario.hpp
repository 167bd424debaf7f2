#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wavelab/fields.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/params.hpp"
#include "wavelab/strip.hpp"

namespace wavelab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One additive term of a horizontal field: a*cos(k), a*sin(k), a bare
// constant a, or random(a,kmax) (seeded band-limited noise with 1/k^2 decay).
struct FieldTerm {
  enum class Kind { cosine, sine, constant, random } kind = Kind::constant;
  double amp = 0.0;
  int k = 0;
};
using FieldSpec = std::vector<FieldTerm>;

FieldSpec parse_field_spec(const std::string& text);
HField evaluate(const FieldSpec& spec, const Grid& g, uint64_t seed = 0);

// Initial vorticity presets. "shear" is the constant transverse vorticity
// (0, w0, 0); "smooth" builds a divergence-free in-plane pair from a stream
// potential plus a smooth transverse component.
struct OmegaSpec {
  enum class Kind { none, shear, smooth } kind = Kind::none;
  double amp = 0.0;
  int k = 1;
};
StripVec3 build_omega(const OmegaSpec& spec, const SigmaMap& m, const Grid& g);

struct ForcingSpec {
  std::string type = "none";  // none | traveling_bump | smooth_step
  double p0 = 0.0, speed = 1.0, width = 1.0;
};

struct SweepSpec {
  std::string parameter;       // mu | dt | eps
  std::vector<double> values;  // strictly decreasing for slope fits
  std::string metric;          // model_error | q_residual | dispersion | inertial_return
  int mode = 1;                // mode index for the dispersion metric
};

struct ScenarioConfig {
  std::string model = "waterwaves";  // waterwaves | swe | both

  double eps = 0.1, beta = 0.0, mu = 0.1, ro = INFINITY;
  double mu_max = 1.0, h_min = 0.05, a_min = 0.1;

  int nx = 64, nz = 16;
  double period = two_pi;

  FieldSpec zeta0, psi0, bathymetry;
  FieldSpec vbar0_x, vbar0_y, q0_x, q0_y;
  bool vbar0_given = false, q0_given = false;
  OmegaSpec omega0;

  ForcingSpec forcing;

  double t_end = 1.0;
  std::optional<double> dt;
  int output_every = 1;
  std::uint64_t seed = 0;

  std::optional<SweepSpec> sweep;

  Params make_checked_params() const;
};

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

}  // namespace wavelab
