#include "tdde/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tdde {

double TimeGrid::max_dt() const {
  double m = 0.0;
  for (std::size_t j = 1; j < times.size(); ++j) m = std::max(m, dt(j));
  return m;
}

std::size_t TimeGrid::knot_at_or_before(double t) const {
  if (t < times.front() || t > times.back() + 1e-12)
    throw ArgumentError("time " + std::to_string(t) + " outside grid [" +
                        std::to_string(times.front()) + ", " +
                        std::to_string(times.back()) + "]");
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t idx = static_cast<std::size_t>(it - times.begin());
  return idx == 0 ? 0 : std::min(idx - 1, n_steps());
}

TimeGrid make_grid(TimeGrid::Kind kind, std::size_t n_steps, double t_min) {
  if (n_steps < 1) throw ArgumentError("make_grid: need at least one step");
  TimeGrid g;
  g.kind = kind;
  switch (kind) {
    case TimeGrid::Kind::Linear: {
      g.times.resize(n_steps + 1);
      for (std::size_t j = 0; j <= n_steps; ++j)
        g.times[j] = static_cast<double>(j) / static_cast<double>(n_steps);
      break;
    }
    case TimeGrid::Kind::Logarithmic: {
      if (!(t_min > 0.0 && t_min < 1.0))
        throw ArgumentError("make_grid: logarithmic grid needs 0 < t_min < 1");
      g.times.resize(n_steps + 1);
      g.times[0] = 0.0;
      if (n_steps == 1) {
        g.times[1] = 1.0;
        break;
      }
      // t_1 = t_min, t_1..t_N geometric with ratio (1/t_min)^{1/(N-1)}
      const double log_ratio = -std::log(t_min) / static_cast<double>(n_steps - 1);
      for (std::size_t j = 1; j <= n_steps; ++j)
        g.times[j] = t_min * std::exp(log_ratio * static_cast<double>(j - 1));
      g.times[n_steps] = 1.0;
      break;
    }
    case TimeGrid::Kind::Explicit:
      throw ArgumentError("make_grid: explicit grids must supply their times");
  }
  return g;
}

TimeGrid make_explicit_grid(std::vector<double> times) {
  if (times.size() < 2) throw ArgumentError("explicit grid: need at least two knots");
  if (times.front() != 0.0)
    throw ArgumentError("explicit grid: first knot must be t=0");
  for (std::size_t j = 1; j < times.size(); ++j)
    if (!(times[j] > times[j - 1]))
      throw ArgumentError("explicit grid: times must be strictly increasing (knot " +
                          std::to_string(j) + ")");
  TimeGrid g;
  g.kind = TimeGrid::Kind::Explicit;
  g.times = std::move(times);
  return g;
}

}  // namespace tdde
