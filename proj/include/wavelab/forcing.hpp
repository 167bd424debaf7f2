#pragma once

#include "wavelab/fields.hpp"
#include "wavelab/grid.hpp"

namespace wavelab {

// Surface pressure disturbance P(t,x) and its gradient. Presets: none, a
// periodized traveling Gaussian bump, and a smoothed pressure-jump plateau
// (two tanh edges, static in time). Widths should satisfy ell >= 4 dx to stay
// band-limited on the grid; the scenario layer enforces this.
class PressureForcing {
 public:
  enum class Kind { none, traveling_bump, smooth_step };

  static PressureForcing none();
  static PressureForcing traveling_bump(double p0, double speed, double width);
  static PressureForcing smooth_step(double p0, double width);

  HField pressure(double t, const Grid& g) const;
  HField pressure_dx(double t, const Grid& g) const;
  bool is_zero() const { return kind_ == Kind::none || p0_ == 0.0; }

  Kind kind() const { return kind_; }
  double p0() const { return p0_; }
  double speed() const { return speed_; }
  double width() const { return width_; }

 private:
  Kind kind_ = Kind::none;
  double p0_ = 0.0, speed_ = 0.0, width_ = 1.0;
};

}  // namespace wavelab
