#include "tdde/density_model.hpp"

#include <cmath>
#include <string>

namespace tdde {
namespace {

void check_knot(const DensityModel& dm, std::size_t j_knot) {
  if (j_knot > dm.grid.n_steps())
    throw ArgumentError("density: knot index " + std::to_string(j_knot) +
                        " out of range (N=" + std::to_string(dm.grid.n_steps()) + ")");
}

// Terms f(x, tbar_j) dt_j for j in [j_lo, j_hi], one row per input point.
Matrix midpoint_terms(const DensityModel& dm, const Matrix& x, std::size_t j_lo,
                      std::size_t j_hi) {
  const std::size_t n_terms = j_hi >= j_lo ? j_hi - j_lo + 1 : 0;
  Matrix terms(x.rows, n_terms);
  for (std::size_t j = j_lo; j <= j_hi; ++j) {
    const std::vector<double> f = dm.model.f_eval_batch(x, dm.grid.midpoint(j));
    const double dt = dm.grid.dt(j);
    for (std::size_t i = 0; i < x.rows; ++i) terms.at(i, j - j_lo) = f[i] * dt;
  }
  return terms;
}

}  // namespace

double pairwise_sum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = v[0];
    for (std::size_t i = 1; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

std::vector<double> log_density_at_knot_batch(const DensityModel& dm, const Matrix& x,
                                              std::size_t j_knot) {
  check_knot(dm, j_knot);
  std::vector<double> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    out[i] = dm.base.log_pdf(x.values.data() + i * x.cols);

  if (dm.direction == AnchorDirection::Forward) {
    if (j_knot >= 1) {
      Matrix terms = midpoint_terms(dm, x, 1, j_knot);
      for (std::size_t i = 0; i < x.rows; ++i)
        out[i] += pairwise_sum(terms.row(i).data(), terms.cols);
    }
  } else {
    if (j_knot < dm.grid.n_steps()) {
      Matrix terms = midpoint_terms(dm, x, j_knot + 1, dm.grid.n_steps());
      for (std::size_t i = 0; i < x.rows; ++i)
        out[i] -= pairwise_sum(terms.row(i).data(), terms.cols);
    }
  }
  return out;
}

double log_density_at_knot(const DensityModel& dm, const std::vector<double>& x,
                           std::size_t j_knot) {
  Matrix xm(1, x.size());
  xm.values = x;
  return log_density_at_knot_batch(dm, xm, j_knot)[0];
}

std::vector<double> log_density_at_batch(const DensityModel& dm, const Matrix& x,
                                         double t) {
  const std::size_t j_knot = dm.grid.knot_at_or_before(t);
  std::vector<double> out = log_density_at_knot_batch(dm, x, j_knot);
  if (j_knot < dm.grid.n_steps() && t > dm.grid.times[j_knot]) {
    const double partial = t - dm.grid.times[j_knot];
    const std::vector<double> f = dm.model.f_eval_batch(x, dm.grid.midpoint(j_knot + 1));
    for (std::size_t i = 0; i < x.rows; ++i) out[i] += f[i] * partial;
  }
  return out;
}

double log_density_at(const DensityModel& dm, const std::vector<double>& x, double t) {
  Matrix xm(1, x.size());
  xm.values = x;
  return log_density_at_batch(dm, xm, t)[0];
}

std::vector<double> log_density_data_batch(const DensityModel& dm, const Matrix& x) {
  if (std::abs(dm.grid.t_max() - 1.0) > 1e-12)
    throw ArgumentError("log_density_data: grid does not end at t=1 (static mode)");
  return log_density_at_knot_batch(dm, x, dm.grid.n_steps());
}

double log_density_data(const DensityModel& dm, const std::vector<double>& x) {
  Matrix xm(1, x.size());
  xm.values = x;
  return log_density_data_batch(dm, xm)[0];
}

Matrix score_batch(const DensityModel& dm, const Matrix& x, double t) {
  const std::size_t j_knot = dm.grid.knot_at_or_before(t);
  Matrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    dm.base.log_pdf_grad(x.values.data() + i * x.cols, out.values.data() + i * x.cols);

  auto accumulate = [&](std::size_t j, double weight) {
    Matrix g = dm.model.grad_f_x_batch(x, dm.grid.midpoint(j));
    for (std::size_t i = 0; i < g.values.size(); ++i) out.values[i] += weight * g.values[i];
  };

  if (dm.direction == AnchorDirection::Forward) {
    for (std::size_t j = 1; j <= j_knot; ++j) accumulate(j, dm.grid.dt(j));
  } else {
    for (std::size_t j = j_knot + 1; j <= dm.grid.n_steps(); ++j)
      accumulate(j, -dm.grid.dt(j));
  }
  if (j_knot < dm.grid.n_steps() && t > dm.grid.times[j_knot])
    accumulate(j_knot + 1, t - dm.grid.times[j_knot]);
  return out;
}

std::vector<double> score(const DensityModel& dm, const std::vector<double>& x, double t) {
  Matrix xm(1, x.size());
  xm.values = x;
  return score_batch(dm, xm, t).values;
}

KlEstimates kl_estimates(const DensityModel& dm, const Matrix& samples_base,
                         const Matrix& samples_t, std::size_t j_knot) {
  check_knot(dm, j_knot);
  if (samples_base.rows == 0 || samples_t.rows == 0)
    throw ArgumentError("kl_estimates: sample sets must be non-empty");
  KlEstimates kl;
  for (std::size_t j = 1; j <= j_knot; ++j) {
    const double dt = dm.grid.dt(j);
    const double tbar = dm.grid.midpoint(j);
    const std::vector<double> f0 = dm.model.f_eval_batch(samples_base, tbar);
    const std::vector<double> ft = dm.model.f_eval_batch(samples_t, tbar);
    double m0 = 0.0, mt = 0.0;
    for (double v : f0) m0 += v;
    for (double v : ft) mt += v;
    kl.forward -= dt * m0 / static_cast<double>(f0.size());
    kl.reverse += dt * mt / static_cast<double>(ft.size());
  }
  return kl;
}

}  // namespace tdde
