#include "wavelab/forcing.hpp"

#include <cmath>
#include <stdexcept>

namespace wavelab {

PressureForcing PressureForcing::none() { return PressureForcing{}; }

PressureForcing PressureForcing::traveling_bump(double p0, double speed, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("forcing: width must be positive");
  PressureForcing f;
  f.kind_ = Kind::traveling_bump;
  f.p0_ = p0;
  f.speed_ = speed;
  f.width_ = width;
  return f;
}

PressureForcing PressureForcing::smooth_step(double p0, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("forcing: width must be positive");
  PressureForcing f;
  f.kind_ = Kind::smooth_step;
  f.p0_ = p0;
  f.width_ = width;
  return f;
}

HField PressureForcing::pressure(double t, const Grid& g) const {
  HField out(g.nx());
  if (is_zero()) return out;
  const double L = g.period();
  if (kind_ == Kind::traveling_bump) {
    double center = std::fmod(speed_ * t, L);
    for (int i = 0; i < g.nx(); ++i) {
      double x = g.x_nodes()[static_cast<size_t>(i)];
      double s = 0.0;
      for (int im = -3; im <= 3; ++im) {
        double d = x - center + im * L;
        s += std::exp(-d * d / (width_ * width_));
      }
      out[i] = p0_ * s;
    }
  } else {
    // plateau between L/4 and 3L/4 with tanh edges
    for (int i = 0; i < g.nx(); ++i) {
      double x = g.x_nodes()[static_cast<size_t>(i)];
      out[i] = 0.5 * p0_ *
               (std::tanh((x - 0.25 * L) / width_) - std::tanh((x - 0.75 * L) / width_));
    }
  }
  return out;
}

HField PressureForcing::pressure_dx(double t, const Grid& g) const {
  HField out(g.nx());
  if (is_zero()) return out;
  const double L = g.period();
  if (kind_ == Kind::traveling_bump) {
    double center = std::fmod(speed_ * t, L);
    for (int i = 0; i < g.nx(); ++i) {
      double x = g.x_nodes()[static_cast<size_t>(i)];
      double s = 0.0;
      for (int im = -3; im <= 3; ++im) {
        double d = x - center + im * L;
        s += -2.0 * d / (width_ * width_) * std::exp(-d * d / (width_ * width_));
      }
      out[i] = p0_ * s;
    }
  } else {
    for (int i = 0; i < g.nx(); ++i) {
      double x = g.x_nodes()[static_cast<size_t>(i)];
      double c1 = std::cosh((x - 0.25 * L) / width_);
      double c2 = std::cosh((x - 0.75 * L) / width_);
      out[i] = 0.5 * p0_ / width_ * (1.0 / (c1 * c1) - 1.0 / (c2 * c2));
    }
  }
  return out;
}

}  // namespace wavelab
