#pragma once

#include <vector>

#include "tdde/matrix.hpp"
#include "tdde/rng.hpp"

namespace tdde {

// Analytic base density: evaluable log-pdf, log-pdf gradient, and sampling.
// Covers the standard-normal latent of static estimation and the Gaussian
// initial conditions of the path-data experiments.
class LatentDensity {
 public:
  static LatentDensity std_normal(std::size_t dim);
  // General Gaussian; covariance must be symmetric positive definite.
  static LatentDensity gaussian(std::vector<double> mean, Matrix covariance);

  std::size_t dim() const { return mean_.size(); }
  bool is_std_normal() const { return std_normal_; }
  const std::vector<double>& mean() const { return mean_; }
  const Matrix& covariance() const { return cov_; }

  double log_pdf(const double* x) const;
  double log_pdf(const std::vector<double>& x) const { return log_pdf(x.data()); }
  void log_pdf_grad(const double* x, double* grad_out) const;
  std::vector<double> log_pdf_grad(const std::vector<double>& x) const;

  void sample(Rng& rng, double* out) const;
  Matrix sample(Rng& rng, std::size_t n) const;

 private:
  LatentDensity() = default;

  bool std_normal_ = true;
  std::vector<double> mean_;
  Matrix cov_;
  Matrix chol_;           // lower-triangular factor of cov
  Matrix precision_;      // cov^{-1}
  double log_norm_ = 0.0; // -0.5 * (n log 2pi + log det cov)
};

}  // namespace tdde
