#include "tdde/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "tdde/rng.hpp"

namespace tdde {
namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

double column_std(const Matrix& m, std::size_t j) {
  double mean = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) mean += m.at(i, j);
  mean /= static_cast<double>(m.rows);
  double ss = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double d = m.at(i, j) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(m.rows - 1));
}

Matrix subsample(const Matrix& m, std::size_t cap, Rng& rng) {
  if (m.rows <= cap) return m;
  // partial Fisher-Yates over row indices
  std::vector<std::size_t> idx(m.rows);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < cap; ++i)
    std::swap(idx[i], idx[i + rng.uniform_index(m.rows - i)]);
  Matrix out(cap, m.cols);
  for (std::size_t i = 0; i < cap; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out.at(i, j) = m.at(idx[i], j);
  return out;
}

double logsumexp(const std::vector<double>& v) {
  double best = -std::numeric_limits<double>::infinity();
  for (double x : v) best = std::max(best, x);
  if (!std::isfinite(best)) return best;
  double s = 0.0;
  for (double x : v) s += std::exp(x - best);
  return best + std::log(s);
}

std::vector<std::pair<double, double>> ecdf_points(const std::vector<double>& sorted) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(sorted.size());
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    pts.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
  return pts;
}

}  // namespace

double silverman_bandwidth(double sigma, std::size_t dim, std::size_t n) {
  const double d = static_cast<double>(dim);
  return sigma * std::pow(4.0 / ((d + 2.0) * static_cast<double>(n)), 1.0 / (d + 4.0));
}

KdeModel kde_fit_silverman(const Matrix& data) {
  if (data.rows < 2)
    throw ArgumentError("kde: need at least two data points");
  KdeModel kde;
  kde.data = data;
  kde.bandwidth.resize(data.cols);
  for (std::size_t j = 0; j < data.cols; ++j) {
    double h = silverman_bandwidth(column_std(data, j), data.cols, data.rows);
    if (h < 1e-6) {
      std::fprintf(stderr, "kde: dimension %zu has (near-)zero variance, flooring "
                           "bandwidth at 1e-6\n", j);
      h = 1e-6;
    }
    kde.bandwidth[j] = h;
  }
  return kde;
}

double KdeModel::log_pdf(const double* x) const {
  const std::size_t n = data.rows;
  const std::size_t d = data.cols;
  double log_norm = -std::log(static_cast<double>(n));
  for (std::size_t j = 0; j < d; ++j)
    log_norm -= kLogSqrt2Pi + std::log(bandwidth[j]);

  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> expo(n);
  for (std::size_t i = 0; i < n; ++i) {
    double q = 0.0;
    const double* row = data.values.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) {
      const double z = (x[j] - row[j]) / bandwidth[j];
      q += z * z;
    }
    expo[i] = -0.5 * q;
    best = std::max(best, expo[i]);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(expo[i] - best);
  return log_norm + best + std::log(s);
}

SinkhornResult sinkhorn_ot(const Matrix& a_in, const Matrix& b_in, double epsilon,
                           std::size_t max_iter, double tol, std::size_t max_points,
                           std::uint64_t subsample_seed) {
  if (a_in.rows == 0 || b_in.rows == 0)
    throw ArgumentError("sinkhorn: point sets must be non-empty");
  if (a_in.cols != b_in.cols)
    throw ShapeError("sinkhorn: point sets have different widths");
  if (!(epsilon > 0.0)) throw ArgumentError("sinkhorn: epsilon must be positive");

  Rng rng(subsample_seed, /*stream=*/0x5eedULL);
  const Matrix a = subsample(a_in, max_points, rng);
  const Matrix b = subsample(b_in, max_points, rng);
  const std::size_t na = a.rows, nb = b.rows, d = a.cols;

  Matrix cost(na, nb);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(na); ++i) {
    const double* ai = a.values.data() + i * d;
    for (std::size_t j = 0; j < nb; ++j) {
      const double* bj = b.values.data() + j * d;
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = ai[k] - bj[k];
        s += diff * diff;
      }
      cost.at(i, j) = s;
    }
  }

  // log-domain iterations on the dual potentials, uniform marginals
  const double log_ma = -std::log(static_cast<double>(na));
  const double log_mb = -std::log(static_cast<double>(nb));
  std::vector<double> f(na, 0.0), g(nb, 0.0);
  SinkhornResult res;
  res.used_a = na;
  res.used_b = nb;

  std::vector<double> buf_a(na), buf_b(nb);
  for (std::size_t it = 0; it < max_iter; ++it) {
    res.iterations = it + 1;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(na); ++i) {
      double best = -std::numeric_limits<double>::infinity();
      const double* ci = cost.values.data() + i * nb;
      for (std::size_t j = 0; j < nb; ++j)
        best = std::max(best, (g[j] - ci[j]) / epsilon);
      double s = 0.0;
      for (std::size_t j = 0; j < nb; ++j)
        s += std::exp((g[j] - ci[j]) / epsilon - best);
      f[i] = epsilon * (log_ma - best - std::log(s));
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(nb); ++j) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < na; ++i)
        best = std::max(best, (f[i] - cost.at(i, j)) / epsilon);
      double s = 0.0;
      for (std::size_t i = 0; i < na; ++i)
        s += std::exp((f[i] - cost.at(i, j)) / epsilon - best);
      g[j] = epsilon * (log_mb - best - std::log(s));
    }

    // row-marginal violation of P_ij = exp((f_i + g_j - C_ij)/eps), checked
    // every few sweeps to keep the exp() traffic down
    if ((it + 1) % 10 == 0 || it + 1 == max_iter) {
      double violation = 0.0;
#pragma omp parallel for schedule(static) reduction(max : violation)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(na); ++i) {
        double row = 0.0;
        const double* ci = cost.values.data() + i * nb;
        for (std::size_t j = 0; j < nb; ++j)
          row += std::exp((f[i] + g[j] - ci[j]) / epsilon);
        violation = std::max(violation, std::abs(row - std::exp(log_ma)) /
                                            std::exp(log_ma));
      }
      if (violation < tol) {
        res.converged = true;
        break;
      }
    }
  }

  double transport = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : transport)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(na); ++i) {
    const double* ci = cost.values.data() + i * nb;
    for (std::size_t j = 0; j < nb; ++j)
      transport += std::exp((f[i] + g[j] - ci[j]) / epsilon) * ci[j];
  }
  res.cost = transport;
  return res;
}

double grid_l2(const std::vector<double>& p_logvals, const std::vector<double>& q_logvals,
               double cell_volume) {
  if (p_logvals.size() != q_logvals.size())
    throw ShapeError("grid_l2: grids have different sizes");
  if (!(cell_volume > 0.0)) throw ArgumentError("grid_l2: cell_volume must be positive");
  double s = 0.0;
  for (std::size_t i = 0; i < p_logvals.size(); ++i) {
    const double d = std::exp(p_logvals[i]) - std::exp(q_logvals[i]);
    s += d * d;
  }
  return std::sqrt(s * cell_volume);
}

EcdfDistance ecdf_distance(std::vector<double> samples_a, std::vector<double> samples_b) {
  if (samples_a.empty() || samples_b.empty())
    throw ArgumentError("ecdf_distance: samples must be non-empty");
  std::sort(samples_a.begin(), samples_a.end());
  std::sort(samples_b.begin(), samples_b.end());

  EcdfDistance out;
  const double na = static_cast<double>(samples_a.size());
  const double nb = static_cast<double>(samples_b.size());
  std::size_t ia = 0, ib = 0;
  double ks = 0.0;
  while (ia < samples_a.size() && ib < samples_b.size()) {
    const double v = std::min(samples_a[ia], samples_b[ib]);
    while (ia < samples_a.size() && samples_a[ia] == v) ++ia;
    while (ib < samples_b.size() && samples_b[ib] == v) ++ib;
    ks = std::max(ks, std::abs(static_cast<double>(ia) / na -
                               static_cast<double>(ib) / nb));
  }
  out.ks = ks;
  out.ecdf_a = ecdf_points(samples_a);
  out.ecdf_b = ecdf_points(samples_b);
  return out;
}

RocCurve roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty())
    throw ArgumentError("roc_auc: scores/labels must be non-empty and equal length");
  std::size_t n_pos = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) throw ArgumentError("roc_auc: labels must be 0/1");
    n_pos += static_cast<std::size_t>(l);
  }
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw ArgumentError("roc_auc: AUC undefined with a single class");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return scores[i] < scores[j]; });

  // Mann-Whitney with averaged ranks over ties
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      if (labels[order[k]] == 1) rank_sum_pos += avg_rank;
    i = j + 1;
  }
  RocCurve roc;
  roc.auc = (rank_sum_pos - 0.5 * static_cast<double>(n_pos) *
                                static_cast<double>(n_pos + 1)) /
            (static_cast<double>(n_pos) * static_cast<double>(n_neg));

  // sweep thresholds from high to low
  roc.points.emplace_back(0.0, 0.0);
  std::size_t tp = 0, fp = 0;
  std::size_t k = order.size();
  while (k > 0) {
    std::size_t j = k;
    const double v = scores[order[k - 1]];
    while (j > 0 && scores[order[j - 1]] == v) {
      if (labels[order[j - 1]] == 1)
        ++tp;
      else
        ++fp;
      --j;
    }
    k = j;
    roc.points.emplace_back(static_cast<double>(fp) / static_cast<double>(n_neg),
                            static_cast<double>(tp) / static_cast<double>(n_pos));
  }
  return roc;
}

}  // namespace tdde
