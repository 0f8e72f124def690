#include "tdde/simdata.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace tdde {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kBlowupLimit = 1e6;

Matrix correlated_gaussian_cov(std::size_t n, double corr) {
  Matrix cov(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cov.at(i, j) = (i == j) ? 1.0 : corr;
  return cov;
}

// Shared driver: RK4 drift step, then a Gaussian kick on the velocity state.
// drift(state, out) writes the time derivative; velocity_index names the
// coordinate receiving the white-noise excitation.
PathDataset simulate_sde(std::size_t dim, const LatentDensity& initial, double s0,
                         std::size_t velocity_index,
                         const std::function<void(const double*, double*)>& drift,
                         std::size_t n_paths, double dt_sim,
                         const std::vector<double>& t_record, Rng& rng,
                         std::size_t* n_resampled) {
  if (n_paths == 0) throw ArgumentError("simulate: need at least one path");
  if (!(dt_sim > 0.0)) throw ArgumentError("simulate: dt_sim must be positive");
  if (t_record.empty()) throw ArgumentError("simulate: no recording times");
  for (std::size_t j = 1; j < t_record.size(); ++j)
    if (!(t_record[j] > t_record[j - 1]))
      throw ArgumentError("simulate: recording times must be strictly increasing");
  if (dt_sim > t_record.front() + 1e-12 && t_record.front() > 0.0)
    throw ArgumentError("simulate: dt_sim exceeds first recording time");

  // map recording times onto the step lattice
  std::vector<std::size_t> record_steps(t_record.size());
  for (std::size_t j = 0; j < t_record.size(); ++j) {
    const double steps = t_record[j] / dt_sim;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-6)
      throw ArgumentError("simulate: recording time " + std::to_string(t_record[j]) +
                          " is not a multiple of dt_sim");
    record_steps[j] = static_cast<std::size_t>(rounded);
  }
  const std::size_t total_steps = record_steps.back();

  PathDataset ds;
  ds.times = t_record;
  ds.paired = true;
  ds.samples.assign(t_record.size(), Matrix(n_paths, dim));

  const double noise_std = std::sqrt(kTwoPi * s0 * dt_sim);
  std::vector<double> x(dim), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  std::size_t resampled = 0;

  for (std::size_t path = 0; path < n_paths; ++path) {
    Rng stream = rng.split(path);
    bool ok = false;
    for (std::size_t attempt = 0; attempt < 100 && !ok; ++attempt) {
      if (attempt > 0) ++resampled;
      initial.sample(stream, x.data());
      ok = true;
      std::size_t rec = 0;
      if (record_steps[0] == 0) {
        for (std::size_t c = 0; c < dim; ++c) ds.samples[0].at(path, c) = x[c];
        rec = 1;
      }
      for (std::size_t s = 1; s <= total_steps && ok; ++s) {
        drift(x.data(), k1.data());
        for (std::size_t c = 0; c < dim; ++c) tmp[c] = x[c] + 0.5 * dt_sim * k1[c];
        drift(tmp.data(), k2.data());
        for (std::size_t c = 0; c < dim; ++c) tmp[c] = x[c] + 0.5 * dt_sim * k2[c];
        drift(tmp.data(), k3.data());
        for (std::size_t c = 0; c < dim; ++c) tmp[c] = x[c] + dt_sim * k3[c];
        drift(tmp.data(), k4.data());
        for (std::size_t c = 0; c < dim; ++c)
          x[c] += dt_sim / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        if (s0 > 0.0) x[velocity_index] += stream.normal(0.0, noise_std);

        for (std::size_t c = 0; c < dim; ++c) {
          if (!std::isfinite(x[c]) || std::abs(x[c]) > kBlowupLimit) {
            ok = false;
            break;
          }
        }
        if (ok && rec < record_steps.size() && s == record_steps[rec]) {
          for (std::size_t c = 0; c < dim; ++c) ds.samples[rec].at(path, c) = x[c];
          ++rec;
        }
      }
    }
    if (!ok)
      throw DataError("simulate: path " + std::to_string(path) +
                      " kept blowing up after 100 attempts");
  }
  if (n_resampled) *n_resampled = resampled;
  return ds;
}

}  // namespace

DuffingParams DuffingParams::paper_defaults() {
  DuffingParams p;
  p.initial = LatentDensity::gaussian({0.0, 0.0}, correlated_gaussian_cov(2, 0.5));
  return p;
}

BoucWenParams BoucWenParams::paper_defaults() {
  BoucWenParams p;
  p.initial = LatentDensity::gaussian({0.0, 0.0, 0.0}, correlated_gaussian_cov(3, 0.8));
  return p;
}

PathDataset simulate_duffing(const DuffingParams& p, std::size_t n_paths, double dt_sim,
                             const std::vector<double>& t_record, Rng& rng,
                             std::size_t* n_resampled) {
  if (!(p.zeta > 0.0 && p.omega0 > 0.0 && p.s0 >= 0.0))
    throw ArgumentError("duffing: zeta, omega0 must be positive and s0 >= 0");
  const double w2 = p.omega0 * p.omega0;
  auto drift = [&](const double* x, double* dx) {
    dx[0] = x[1];
    dx[1] = -2.0 * p.zeta * p.omega0 * x[1] - w2 * (x[0] + p.eps_nl * x[0] * x[0] * x[0]);
  };
  return simulate_sde(2, p.initial, p.s0, 1, drift, n_paths, dt_sim, t_record, rng,
                      n_resampled);
}

PathDataset simulate_bouc_wen(const BoucWenParams& p, std::size_t n_paths, double dt_sim,
                              const std::vector<double>& t_record, Rng& rng,
                              std::size_t* n_resampled) {
  if (!(p.alpha_e >= 0.0 && p.alpha_e <= 1.0))
    throw ArgumentError("bouc_wen: alpha_e must lie in [0,1]");
  if (!(p.zeta > 0.0 && p.omega0 > 0.0 && p.s0 >= 0.0))
    throw ArgumentError("bouc_wen: zeta, omega0 must be positive and s0 >= 0");
  const double w2 = p.omega0 * p.omega0;
  // state (y, z, v)
  auto drift = [&](const double* x, double* dx) {
    const double y = x[0], z = x[1], v = x[2];
    const double abs_z_pow = (p.nu_exp == 1.0) ? std::abs(z)
                                               : std::pow(std::abs(z), p.nu_exp);
    const double z_pow_signed = (p.nu_exp == 1.0) ? z
                                                  : std::pow(std::abs(z), p.nu_exp - 1.0) * z;
    dx[0] = v;
    dx[1] = p.a_bw * v - p.gamma * std::abs(v) * z_pow_signed - p.beta * v * abs_z_pow;
    dx[2] = -2.0 * p.zeta * p.omega0 * v - w2 * (p.alpha_e * y + (1.0 - p.alpha_e) * z);
  };
  return simulate_sde(3, p.initial, p.s0, 2, drift, n_paths, dt_sim, t_record, rng,
                      n_resampled);
}

double ou_mean(const OuParams& p, double t) { return p.m0 * std::exp(-p.theta * t); }

double ou_variance(const OuParams& p, double t) {
  const double e2 = std::exp(-2.0 * p.theta * t);
  return p.v0 * e2 + p.sigma * p.sigma * (1.0 - e2) / (2.0 * p.theta);
}

double ou_log_density(const OuParams& p, double x, double t) {
  if (t < 0.0) throw ArgumentError("ou_log_density: t must be >= 0");
  const double m = ou_mean(p, t);
  const double v = ou_variance(p, t);
  const double d = x - m;
  return -0.5 * d * d / v - 0.5 * std::log(kTwoPi * v);
}

PathDataset simulate_ou(const OuParams& p, std::size_t n_paths,
                        const std::vector<double>& t_record, Rng& rng) {
  if (!(p.theta > 0.0 && p.sigma > 0.0 && p.v0 > 0.0))
    throw ArgumentError("ou: theta, sigma, v0 must be positive");
  if (t_record.empty()) throw ArgumentError("ou: no recording times");
  for (std::size_t j = 1; j < t_record.size(); ++j)
    if (!(t_record[j] > t_record[j - 1]))
      throw ArgumentError("ou: recording times must be strictly increasing");

  PathDataset ds;
  ds.times = t_record;
  ds.paired = true;
  ds.samples.assign(t_record.size(), Matrix(n_paths, 1));
  for (std::size_t path = 0; path < n_paths; ++path) {
    Rng stream = rng.split(path);
    double t_prev = 0.0;
    double x = stream.normal(p.m0, std::sqrt(p.v0));
    for (std::size_t j = 0; j < t_record.size(); ++j) {
      const double gap = t_record[j] - t_prev;
      if (gap > 0.0) {
        const double decay = std::exp(-p.theta * gap);
        const double var = p.sigma * p.sigma * (1.0 - decay * decay) / (2.0 * p.theta);
        x = x * decay + stream.normal(0.0, std::sqrt(var));
      }
      ds.samples[j].at(path, 0) = x;
      t_prev = t_record[j];
    }
  }
  return ds;
}

Matrix gen_circles(std::size_t n_data, Rng& rng, double noise) {
  if (n_data == 0) throw ArgumentError("gen_circles: n_data must be positive");
  Matrix x(n_data, 2);
  for (std::size_t i = 0; i < n_data; ++i) {
    const double theta = rng.uniform(0.0, kTwoPi);
    const double p = rng.uniform() < 0.5 ? 0.0 : 1.0;
    const double r = 1.0 - 0.5 * p;
    x.at(i, 0) = r * std::cos(theta) + noise * rng.normal();
    x.at(i, 1) = r * std::sin(theta) + noise * rng.normal();
  }
  return x;
}

Matrix gen_moons(std::size_t n_data, Rng& rng, double noise) {
  if (n_data == 0) throw ArgumentError("gen_moons: n_data must be positive");
  Matrix x(n_data, 2);
  for (std::size_t i = 0; i < n_data; ++i) {
    const double theta = rng.uniform(0.0, 0.5 * kTwoPi);
    const bool p = rng.uniform() < 0.5;
    const double c = std::cos(theta), s = std::sin(theta);
    const double u = p ? 1.0 - c : c;
    const double v = p ? 0.5 - s : s;
    x.at(i, 0) = 2.0 * u + noise * rng.normal() - 1.0;
    x.at(i, 1) = 2.0 * v + noise * rng.normal() - 1.0;
  }
  return x;
}

Matrix gen_checkerboard(std::size_t n_data, Rng& rng) {
  if (n_data == 0) throw ArgumentError("gen_checkerboard: n_data must be positive");
  Matrix x(n_data, 2);
  for (std::size_t i = 0; i < n_data; ++i) {
    const double x1 = 2.0 * rng.uniform() - 1.0;
    const double p = rng.uniform() < 0.5 ? 0.0 : 1.0;
    const long long fl = static_cast<long long>(std::floor(x1));
    const double modulo = static_cast<double>(((fl % 2) + 2) % 2);
    x.at(i, 0) = x1;
    x.at(i, 1) = 0.5 * (p * rng.uniform() + modulo);
  }
  return x;
}

Matrix gen_semisphere(std::size_t n_dim, std::size_t n_data, double alpha, Rng& rng) {
  if (n_dim < 2) throw ArgumentError("gen_semisphere: need n_dim >= 2");
  if (!(alpha > 0.0)) throw ArgumentError("gen_semisphere: alpha must be positive");
  if (n_data == 0) throw ArgumentError("gen_semisphere: n_data must be positive");
  Matrix x(n_data, n_dim);
  std::vector<double> y(n_dim);
  for (std::size_t i = 0; i < n_data; ++i) {
    for (std::size_t c = 0; c < n_dim; ++c) y[c] = rng.normal();
    y[n_dim - 1] = alpha * std::abs(y[n_dim - 1]);
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    const double scale = (1.0 + rng.uniform(0.0, 0.01)) / norm;
    for (std::size_t c = 0; c < n_dim; ++c) x.at(i, c) = y[c] * scale;
  }
  return x;
}

}  // namespace tdde
