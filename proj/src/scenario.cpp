#include "wavelab/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "wavelab/strip.hpp"

namespace wavelab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  std::string t = trim(s);
  if (t == "inf" || t == "Inf" || t == "INF") return INFINITY;
  try {
    size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (...) {
    throw ConfigError("cannot parse number for " + what + ": '" + s + "'");
  }
}

int to_int(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(trim(s), &pos);
    if (pos != trim(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw ConfigError("cannot parse integer for " + what + ": '" + s + "'");
  }
}

}  // namespace

FieldSpec parse_field_spec(const std::string& text) {
  FieldSpec spec;
  std::string t = trim(text);
  if (t.empty() || t == "0" || t == "none") return spec;

  // split on '+' and '-' kept as sign
  std::vector<std::pair<double, std::string>> terms;
  size_t i = 0;
  double sign = 1.0;
  std::string cur;
  auto flush = [&]() {
    if (!trim(cur).empty()) terms.push_back({sign, trim(cur)});
    cur.clear();
  };
  // leading sign
  while (i < t.size()) {
    char c = t[i];
    if ((c == '+' || c == '-') && trim(cur).empty() && cur.find_first_not_of(" \t") == std::string::npos) {
      sign = (c == '-') ? -sign : sign;
      ++i;
      continue;
    }
    if (c == '+' || c == '-') {
      // not inside parentheses or exponent
      bool exponent = i > 0 && (t[i - 1] == 'e' || t[i - 1] == 'E');
      if (!exponent) {
        flush();
        sign = (c == '-') ? -1.0 : 1.0;
        ++i;
        continue;
      }
    }
    cur += c;
    ++i;
  }
  flush();

  for (auto& [sgn, term] : terms) {
    FieldTerm ft;
    size_t star = term.find('*');
    std::string ampstr = (star == std::string::npos) ? term : term.substr(0, star);
    std::string func = (star == std::string::npos) ? "" : trim(term.substr(star + 1));
    if (func.empty()) {
      // bare constant or bare function with amplitude 1
      if (term.find('(') != std::string::npos) {
        func = term;
        ampstr = "1";
      }
    }
    if (func.empty()) {
      ft.kind = FieldTerm::Kind::constant;
      ft.amp = sgn * to_double(ampstr, "field term");
      spec.push_back(ft);
      continue;
    }
    size_t open = func.find('('), close = func.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
      throw ConfigError("malformed field term: '" + term + "'");
    std::string name = trim(func.substr(0, open));
    std::string args = func.substr(open + 1, close - open - 1);
    ft.amp = sgn * to_double(ampstr, "field term amplitude");
    if (name == "cos") {
      ft.kind = FieldTerm::Kind::cosine;
      ft.k = to_int(args, "cos mode");
    } else if (name == "sin") {
      ft.kind = FieldTerm::Kind::sine;
      ft.k = to_int(args, "sin mode");
    } else if (name == "random") {
      auto parts = split(args, ',');
      if (parts.size() != 2) throw ConfigError("random(amp,kmax) takes two arguments");
      ft.kind = FieldTerm::Kind::random;
      ft.amp = sgn * to_double(parts[0], "random amplitude");
      ft.k = to_int(parts[1], "random kmax");
    } else {
      throw ConfigError("unknown field function '" + name + "'");
    }
    spec.push_back(ft);
  }
  return spec;
}

HField evaluate(const FieldSpec& spec, const Grid& g, uint64_t seed) {
  HField out(g.nx());
  for (const auto& term : spec) {
    switch (term.kind) {
      case FieldTerm::Kind::constant:
        for (int i = 0; i < g.nx(); ++i) out[i] += term.amp;
        break;
      case FieldTerm::Kind::cosine:
        for (int i = 0; i < g.nx(); ++i)
          out[i] += term.amp * std::cos(g.wavenumber(term.k) * g.x_nodes()[static_cast<size_t>(i)]);
        break;
      case FieldTerm::Kind::sine:
        for (int i = 0; i < g.nx(); ++i)
          out[i] += term.amp * std::sin(g.wavenumber(term.k) * g.x_nodes()[static_cast<size_t>(i)]);
        break;
      case FieldTerm::Kind::random: {
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        int kmax = std::min(term.k, g.dealias_keep());
        for (int k = 1; k <= kmax; ++k) {
          double ac = u(rng) / (k * k), as = u(rng) / (k * k);
          for (int i = 0; i < g.nx(); ++i) {
            double ph = g.wavenumber(k) * g.x_nodes()[static_cast<size_t>(i)];
            out[i] += term.amp * (ac * std::cos(ph) + as * std::sin(ph));
          }
        }
        break;
      }
    }
  }
  return out;
}

StripVec3 build_omega(const OmegaSpec& spec, const SigmaMap& m, const Grid& g) {
  const int nx = g.nx(), nz = g.nz();
  StripVec3 w(nx, nz);
  if (spec.kind == OmegaSpec::Kind::none) return w;
  if (spec.kind == OmegaSpec::Kind::shear) {
    for (double& v : w.y.v) v = spec.amp;
    return w;
  }
  // smooth: in-plane pair from the stream potential chi, transverse component
  // free; divergence-free by construction.
  StripField chi(nx, nz);
  const auto& zs = g.z_nodes();
  double kp = g.wavenumber(spec.k);
  for (int ix = 0; ix < nx; ++ix) {
    double x = g.x_nodes()[static_cast<size_t>(ix)];
    for (int j = 0; j < nz; ++j) {
      double z = zs[static_cast<size_t>(j)];
      double zp = (1.0 + z) * (1.0 + z);
      chi.at(ix, j) = spec.amp * (std::cos(kp * x) * zp + 0.5 * std::sin(kp * x) * zp * (1.0 + z));
      w.y.at(ix, j) = spec.amp * (0.5 + std::cos(kp * x) * (z + 0.5));
    }
  }
  StripField cz = sigma_dz(chi, m, g);
  StripField cx = sigma_dx(chi, m, g);
  const double smu = std::sqrt(g.mu());
  for (size_t i = 0; i < w.x.v.size(); ++i) {
    w.x.v[i] = cz.v[i];
    w.z.v[i] = -smu * cx.v[i];
  }
  return w;
}

Params ScenarioConfig::make_checked_params() const {
  return make_params(eps, beta, mu, ro, mu_max, h_min, a_min);
}

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  bool sweep_seen = false;
  SweepSpec sweep;

  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      if (section == "sweep") sweep_seen = true;
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value, got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    std::string where = "line " + std::to_string(lineno) + " [" + section + "] " + key;

    try {
      if (section == "model") {
        if (key == "model") {
          if (val != "waterwaves" && val != "swe" && val != "both")
            throw ConfigError("model must be waterwaves | swe | both");
          c.model = val;
        } else
          throw ConfigError("unknown key");
      } else if (section == "params") {
        if (key == "eps") c.eps = to_double(val, where);
        else if (key == "beta") c.beta = to_double(val, where);
        else if (key == "mu") c.mu = to_double(val, where);
        else if (key == "ro") c.ro = to_double(val, where);
        else if (key == "mu_max") c.mu_max = to_double(val, where);
        else if (key == "h_min") c.h_min = to_double(val, where);
        else if (key == "a_min") c.a_min = to_double(val, where);
        else throw ConfigError("unknown key");
      } else if (section == "grid") {
        if (key == "nx") c.nx = to_int(val, where);
        else if (key == "nz") c.nz = to_int(val, where);
        else if (key == "period") c.period = to_double(val, where);
        else throw ConfigError("unknown key");
      } else if (section == "initial") {
        if (key == "zeta0") c.zeta0 = parse_field_spec(val);
        else if (key == "psi0") c.psi0 = parse_field_spec(val);
        else if (key == "vbar0_x") { c.vbar0_x = parse_field_spec(val); c.vbar0_given = true; }
        else if (key == "vbar0_y") { c.vbar0_y = parse_field_spec(val); c.vbar0_given = true; }
        else if (key == "q0_x") { c.q0_x = parse_field_spec(val); c.q0_given = true; }
        else if (key == "q0_y") { c.q0_y = parse_field_spec(val); c.q0_given = true; }
        else if (key == "omega0") {
          auto parts = split(val, ' ');
          parts.erase(std::remove(parts.begin(), parts.end(), std::string()), parts.end());
          if (parts.empty() || parts[0] == "none") c.omega0.kind = OmegaSpec::Kind::none;
          else if (parts[0] == "shear") {
            if (parts.size() != 2) throw ConfigError("omega0 = shear <w0>");
            c.omega0.kind = OmegaSpec::Kind::shear;
            c.omega0.amp = to_double(parts[1], where);
          } else if (parts[0] == "smooth") {
            if (parts.size() != 3) throw ConfigError("omega0 = smooth <amp> <k>");
            c.omega0.kind = OmegaSpec::Kind::smooth;
            c.omega0.amp = to_double(parts[1], where);
            c.omega0.k = to_int(parts[2], where);
          } else
            throw ConfigError("omega0 must be none | shear <w0> | smooth <amp> <k>");
        } else
          throw ConfigError("unknown key");
      } else if (section == "bathymetry") {
        if (key == "b") c.bathymetry = parse_field_spec(val);
        else throw ConfigError("unknown key");
      } else if (section == "forcing") {
        if (key == "type") {
          if (val != "none" && val != "traveling_bump" && val != "smooth_step")
            throw ConfigError("forcing type must be none | traveling_bump | smooth_step");
          c.forcing.type = val;
        } else if (key == "p0") c.forcing.p0 = to_double(val, where);
        else if (key == "speed") c.forcing.speed = to_double(val, where);
        else if (key == "width") c.forcing.width = to_double(val, where);
        else throw ConfigError("unknown key");
      } else if (section == "time") {
        if (key == "t_end") c.t_end = to_double(val, where);
        else if (key == "dt") c.dt = to_double(val, where);
        else if (key == "output_every") c.output_every = to_int(val, where);
        else throw ConfigError("unknown key");
      } else if (section == "sweep") {
        if (key == "parameter") sweep.parameter = val;
        else if (key == "metric") sweep.metric = val;
        else if (key == "mode") sweep.mode = to_int(val, where);
        else if (key == "values") {
          for (const auto& s : split(val, ',')) sweep.values.push_back(to_double(s, where));
        } else
          throw ConfigError("unknown key");
      } else if (section == "run") {
        if (key == "seed") c.seed = static_cast<uint64_t>(to_double(val, where));
        else throw ConfigError("unknown key");
      } else {
        throw ConfigError("unknown section '" + section + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }

  if (sweep_seen) {
    if (sweep.parameter.empty() || sweep.metric.empty() || sweep.values.empty())
      throw ConfigError("[sweep] needs parameter, metric and values");
    c.sweep = sweep;
  }
  return c;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace wavelab
