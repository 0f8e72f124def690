#include "tdde/latent_density.hpp"

#include <cmath>
#include <string>

namespace tdde {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// Plain Cholesky; dimensions here are small (n <= a few dozen).
Matrix cholesky(const Matrix& a) {
  const std::size_t n = a.rows;
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a.at(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
      if (i == j) {
        if (s <= 0.0)
          throw ArgumentError("covariance is not positive definite (pivot " +
                              std::to_string(i) + ")");
        l.at(i, i) = std::sqrt(s);
      } else {
        l.at(i, j) = s / l.at(j, j);
      }
    }
  }
  return l;
}

// Inverse from the Cholesky factor: solves L L^T X = I column by column.
Matrix spd_inverse(const Matrix& l) {
  const std::size_t n = l.rows;
  Matrix inv(n, n);
  std::vector<double> y(n), x(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = (i == c) ? 1.0 : 0.0;
      for (std::size_t k = 0; k < i; ++k) s -= l.at(i, k) * y[k];
      y[i] = s / l.at(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= l.at(k, ii) * x[k];
      x[ii] = s / l.at(ii, ii);
    }
    for (std::size_t i = 0; i < n; ++i) inv.at(i, c) = x[i];
  }
  return inv;
}

}  // namespace

LatentDensity LatentDensity::std_normal(std::size_t dim) {
  if (dim == 0) throw ArgumentError("std_normal: dimension must be positive");
  LatentDensity d;
  d.std_normal_ = true;
  d.mean_.assign(dim, 0.0);
  d.log_norm_ = -0.5 * static_cast<double>(dim) * kLog2Pi;
  return d;
}

LatentDensity LatentDensity::gaussian(std::vector<double> mean, Matrix covariance) {
  const std::size_t n = mean.size();
  if (covariance.rows != n || covariance.cols != n)
    throw ShapeError("gaussian: covariance must be " + std::to_string(n) + "x" +
                     std::to_string(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(covariance.at(i, j) - covariance.at(j, i)) > 1e-12)
        throw ArgumentError("gaussian: covariance must be symmetric");
  LatentDensity d;
  d.std_normal_ = false;
  d.mean_ = std::move(mean);
  d.cov_ = std::move(covariance);
  d.chol_ = cholesky(d.cov_);
  d.precision_ = spd_inverse(d.chol_);
  double log_det = 0.0;
  for (std::size_t i = 0; i < n; ++i) log_det += 2.0 * std::log(d.chol_.at(i, i));
  d.log_norm_ = -0.5 * (static_cast<double>(n) * kLog2Pi + log_det);
  return d;
}

double LatentDensity::log_pdf(const double* x) const {
  const std::size_t n = dim();
  if (std_normal_) {
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) q += x[i] * x[i];
    return log_norm_ - 0.5 * q;
  }
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double di = x[i] - mean_[i];
    for (std::size_t j = 0; j < n; ++j) q += di * precision_.at(i, j) * (x[j] - mean_[j]);
  }
  return log_norm_ - 0.5 * q;
}

void LatentDensity::log_pdf_grad(const double* x, double* grad_out) const {
  const std::size_t n = dim();
  if (std_normal_) {
    for (std::size_t i = 0; i < n; ++i) grad_out[i] = -x[i];
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += precision_.at(i, j) * (x[j] - mean_[j]);
    grad_out[i] = -s;
  }
}

std::vector<double> LatentDensity::log_pdf_grad(const std::vector<double>& x) const {
  std::vector<double> g(dim());
  log_pdf_grad(x.data(), g.data());
  return g;
}

void LatentDensity::sample(Rng& rng, double* out) const {
  const std::size_t n = dim();
  if (std_normal_) {
    for (std::size_t i = 0; i < n; ++i) out[i] = rng.normal();
    return;
  }
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = rng.normal();
  for (std::size_t i = 0; i < n; ++i) {
    double s = mean_[i];
    for (std::size_t k = 0; k <= i; ++k) s += chol_.at(i, k) * z[k];
    out[i] = s;
  }
}

Matrix LatentDensity::sample(Rng& rng, std::size_t n) const {
  Matrix out(n, dim());
  for (std::size_t i = 0; i < n; ++i) sample(rng, out.values.data() + i * out.cols);
  return out;
}

}  // namespace tdde
