#pragma once

#include "tdde/latent_density.hpp"
#include "tdde/path_dataset.hpp"
#include "tdde/rng.hpp"

namespace tdde {

// Duffing oscillator driven by white noise of power spectral density s0:
//   y'' + 2 zeta omega0 y' + omega0^2 (y + eps_nl y^3) = xi.
// State is (y, y').
struct DuffingParams {
  double zeta = 0.25;
  double omega0 = 1.0;
  double eps_nl = 1.0;
  double s0 = 0.5;
  LatentDensity initial = LatentDensity::std_normal(2);

  static DuffingParams paper_defaults();  // corr-0.5 unit-variance initial
};

// Hysteretic oscillator with the Bouc-Wen restoring force:
//   y'' + 2 zeta omega0 y' + omega0^2 [alpha_e y + (1 - alpha_e) z] = xi,
//   z'  = A y' - gamma |y'| |z|^{nu-1} z - beta y' |z|^nu.
// State is (y, z, y'). nu_exp is the Bouc-Wen shape exponent, unrelated to
// the contrastive class weight.
struct BoucWenParams {
  double zeta = 0.05;
  double omega0 = 1.0;
  double alpha_e = 0.01;
  double gamma = 1.0;
  double beta = 1.0;
  double nu_exp = 1.0;
  double a_bw = 1.0;
  double s0 = 0.5;
  LatentDensity initial = LatentDensity::std_normal(3);

  static BoucWenParams paper_defaults();  // corr-0.8 unit-variance initial
};

// Ornstein-Uhlenbeck test oracle: dX = -theta X dt + sigma dW with Gaussian
// initial condition N(m0, v0); marginals stay Gaussian in closed form.
struct OuParams {
  double theta = 1.0;
  double sigma = 1.0;
  double m0 = 0.0;
  double v0 = 1.0;
};

// RK4 on the drift plus an Euler-Maruyama noise increment of variance
// 2 pi s0 dt on the velocity each step. Paths exceeding |state| = 1e6 are
// resampled; the count is reported through *n_resampled when non-null.
PathDataset simulate_duffing(const DuffingParams& p, std::size_t n_paths, double dt_sim,
                             const std::vector<double>& t_record, Rng& rng,
                             std::size_t* n_resampled = nullptr);
PathDataset simulate_bouc_wen(const BoucWenParams& p, std::size_t n_paths, double dt_sim,
                              const std::vector<double>& t_record, Rng& rng,
                              std::size_t* n_resampled = nullptr);

// Exact Gaussian transitions; no discretization error.
PathDataset simulate_ou(const OuParams& p, std::size_t n_paths,
                        const std::vector<double>& t_record, Rng& rng);
double ou_mean(const OuParams& p, double t);
double ou_variance(const OuParams& p, double t);
double ou_log_density(const OuParams& p, double x, double t);

// Synthetic 2D generators with the stated noise scales and Bernoulli(0.5)
// mode choices.
Matrix gen_circles(std::size_t n_data, Rng& rng, double noise = 0.01);
Matrix gen_moons(std::size_t n_data, Rng& rng, double noise = 0.1);
Matrix gen_checkerboard(std::size_t n_data, Rng& rng);

// Radially perturbed semisphere: Y = [Z_1..Z_{n-1}, alpha |Z_n|],
// X = (1 + beta) Y / |Y| with beta ~ U(0, 0.01).
Matrix gen_semisphere(std::size_t n_dim, std::size_t n_data, double alpha, Rng& rng);

}  // namespace tdde
