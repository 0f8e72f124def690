#pragma once

#include <vector>

#include "tdde/classifier.hpp"
#include "tdde/latent_density.hpp"
#include "tdde/time_grid.hpp"

namespace tdde {

// Which end of the grid the analytic base density is anchored to. Forward
// accumulates f*dt from t_0; Reverse subtracts from t_N.
enum class AnchorDirection { Forward, Reverse };

// Trained network + time grid + analytic base density. Evaluates log rho_t
// via the telescoping sum over midpoints and its exact spatial gradient.
struct DensityModel {
  ClassifierModel model;
  TimeGrid grid;
  LatentDensity base = LatentDensity::std_normal(1);
  AnchorDirection direction = AnchorDirection::Forward;

  std::size_t dim() const { return model.data_dim(); }
};

// log rho_{t_{j'}}(x) = log base(x) + sum_{j<=j'} f(x, tbar_j) dt_j.
double log_density_at_knot(const DensityModel& dm, const std::vector<double>& x,
                           std::size_t j_knot);
std::vector<double> log_density_at_knot_batch(const DensityModel& dm, const Matrix& x,
                                              std::size_t j_knot);

// Knot value at the largest t_{j'} <= t plus f(x, tbar_{j'+1}) * (t - t_{j'}).
double log_density_at(const DensityModel& dm, const std::vector<double>& x, double t);
std::vector<double> log_density_at_batch(const DensityModel& dm, const Matrix& x,
                                         double t);

// log rho_1 for static models (grid must end at t=1).
double log_density_data(const DensityModel& dm, const std::vector<double>& x);
std::vector<double> log_density_data_batch(const DensityModel& dm, const Matrix& x);

// Exact gradient of log_density_at with respect to x.
std::vector<double> score(const DensityModel& dm, const std::vector<double>& x, double t);
Matrix score_batch(const DensityModel& dm, const Matrix& x, double t);

// Sample-mean KL estimates between the base and rho_{t_{j'}}:
//   forward:  KL(base || rho_{t_j'}) = -sum_j E_base[f(., tbar_j)] dt_j
//   reverse:  KL(rho_{t_j'} || base) = +sum_j E_rho[f(., tbar_j)] dt_j
struct KlEstimates {
  double forward = 0.0;
  double reverse = 0.0;
};
KlEstimates kl_estimates(const DensityModel& dm, const Matrix& samples_base,
                         const Matrix& samples_t, std::size_t j_knot);

// Cascaded pairwise summation; bounds accumulation error for long grids.
double pairwise_sum(const double* v, std::size_t n);

}  // namespace tdde
