#pragma once

#include <vector>

#include "tdde/errors.hpp"

namespace tdde {

// Ordered time knots t_0 < ... < t_N with t_0 = 0. Derived step sizes
// dt_j = t_j - t_{j-1} and midpoints tbar_j = t_{j-1} + dt_j / 2 drive both
// training and density reconstruction.
struct TimeGrid {
  enum class Kind { Linear, Logarithmic, Explicit };

  Kind kind = Kind::Linear;
  std::vector<double> times;  // size N + 1

  std::size_t n_steps() const { return times.size() - 1; }
  double t_min() const { return times.front(); }
  double t_max() const { return times.back(); }

  // j in 1..N
  double dt(std::size_t j) const { return times[j] - times[j - 1]; }
  double midpoint(std::size_t j) const { return times[j - 1] + 0.5 * dt(j); }
  double max_dt() const;

  // Largest knot index j' with t_{j'} <= t (clamped to N).
  std::size_t knot_at_or_before(double t) const;
};

// Linear: t_j = j/N on [0,1]. Logarithmic: t_0 = 0, then t_min..1 geometric
// with constant ratio. Explicit grids are validated, not generated.
TimeGrid make_grid(TimeGrid::Kind kind, std::size_t n_steps, double t_min = 0.01);
TimeGrid make_explicit_grid(std::vector<double> times);

}  // namespace tdde
