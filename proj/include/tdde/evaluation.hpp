#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tdde/matrix.hpp"

namespace tdde {

// Gaussian product-kernel density estimate with per-dimension Silverman
// bandwidths h_i = sigma_i (4 / ((d+2) N))^{1/(d+4)}.
struct KdeModel {
  Matrix data;
  std::vector<double> bandwidth;  // one entry per dimension

  double log_pdf(const double* x) const;
  double log_pdf(const std::vector<double>& x) const { return log_pdf(x.data()); }
};

KdeModel kde_fit_silverman(const Matrix& data);
double silverman_bandwidth(double sigma, std::size_t dim, std::size_t n);

// Entropic OT between two point clouds with squared-Euclidean cost, uniform
// marginals, and log-domain Sinkhorn iterations. The returned cost excludes
// the entropy term. Sets larger than max_points per side are subsampled
// deterministically first.
struct SinkhornResult {
  double cost = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t used_a = 0, used_b = 0;  // point counts after any subsampling
};

SinkhornResult sinkhorn_ot(const Matrix& a, const Matrix& b, double epsilon,
                           std::size_t max_iter = 5000, double tol = 1e-5,
                           std::size_t max_points = 2000,
                           std::uint64_t subsample_seed = 0);

// sqrt(sum (exp p - exp q)^2 * cell_volume) over matching grids of log-values.
double grid_l2(const std::vector<double>& p_logvals, const std::vector<double>& q_logvals,
               double cell_volume);

// Two-sample Kolmogorov-Smirnov statistic plus the ECDF point lists used for
// CSV export.
struct EcdfDistance {
  double ks = 0.0;
  std::vector<std::pair<double, double>> ecdf_a;
  std::vector<std::pair<double, double>> ecdf_b;
};
EcdfDistance ecdf_distance(std::vector<double> samples_a, std::vector<double> samples_b);

// ROC from scores (larger = stronger rare-event call); AUC via the
// Mann-Whitney rank statistic with ties averaged.
struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (FPR, TPR), (0,0) to (1,1)
  double auc = 0.0;
};
RocCurve roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

}  // namespace tdde
