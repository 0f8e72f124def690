#pragma once

#include <functional>
#include <vector>

#include "tdde/matrix.hpp"
#include "tdde/rng.hpp"

namespace tdde {

// Batched callbacks: one row per chain. The density module's evaluations are
// pure, so chains can share a model and step together.
using BatchScoreFn = std::function<Matrix(const Matrix&)>;
using BatchLogpFn = std::function<std::vector<double>(const Matrix&)>;

// How chains are initialized: an axis-aligned box, perturbed dataset rows
// ("data initialization"), or one replicated point.
struct SeedStrategy {
  enum class Kind { UniformBox, DataInit, Fixed };

  Kind kind = Kind::UniformBox;
  std::vector<double> lower, upper;   // UniformBox
  const Matrix* dataset = nullptr;    // DataInit
  double noise_std = 0.0;             // DataInit
  std::vector<double> point;          // Fixed

  static SeedStrategy uniform_box(std::vector<double> lower, std::vector<double> upper);
  static SeedStrategy data_init(const Matrix& dataset, double noise_std);
  static SeedStrategy fixed(std::vector<double> point);
};

Matrix seed_chains(const SeedStrategy& strategy, std::size_t n_chains, Rng& rng);

struct ChainOutput {
  Matrix samples;        // final state of every surviving chain
  Matrix trajectory;     // kept states (empty unless thin > 0), iteration-major
  double acceptance_rate = 1.0;
  std::size_t n_flagged = 0;  // chains dropped after reaching a non-finite state
};

// Unadjusted Langevin: x <- x + step * score(x) + sqrt(2 step) * xi. Chains
// that leave the finite range are frozen, excluded from the output, and
// counted in n_flagged. Each chain draws from its own counter-based stream.
ChainOutput ula(const BatchScoreFn& score_fn, const Matrix& seeds, double step,
                std::size_t n_steps, Rng& rng, std::size_t thin = 0);

// HMC with unit mass, Gaussian momenta, leapfrog integration and Metropolis
// correction; per-chain draws after burn-in are recorded every `thin`
// iterations. Proposals with energy error above 1000 are rejected outright.
ChainOutput hmc(const BatchLogpFn& logp_fn, const BatchScoreFn& grad_fn,
                const Matrix& seeds, double step, std::size_t n_leapfrog,
                std::size_t n_samples, std::size_t burn_in, Rng& rng,
                std::size_t thin = 1);

}  // namespace tdde
