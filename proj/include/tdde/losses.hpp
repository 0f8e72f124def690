#pragma once

#include <vector>

namespace tdde {

enum class ScoreType { Brier, Logarithmic };

struct LossResult {
  double loss = 0.0;
  std::vector<double> d_prev_grad;  // dL / dd_prev
  std::vector<double> d_next_grad;  // dL / dd_next
};

// Brier score over one time pair: (1/2N_b) sum_i [d_prev_i^2 + (1-d_next_i)^2].
LossResult brier_loss(const std::vector<double>& d_prev,
                      const std::vector<double>& d_next);

// Logarithmic score: (1/2N_b) sum_i [-log(1-d_prev_i) - log d_next_i], with
// probabilities clamped at 1e-12 inside the logs.
LossResult log_loss(const std::vector<double>& d_prev,
                    const std::vector<double>& d_next);

// Class terms weighted 1 : nu under the prior 1/(1+nu) on the earlier class:
// (1/((1+nu) N_b)) sum_i [c(d_prev_i, 0) + nu * c(d_next_i, 1)].
// Reduces exactly to the unweighted loss at nu = 1. Training with nu != 1
// pairs this with the offset classifier sigmoid(f*dt + log nu), whose optimum
// assigns the earlier class probability rho_prev / (rho_prev + nu*rho_next)
// while keeping f*dt = log(rho_next/rho_prev) unbiased.
LossResult nu_weighted_loss(const std::vector<double>& d_prev,
                            const std::vector<double>& d_next, double nu,
                            ScoreType score);

}  // namespace tdde
