#include "tdde/losses.hpp"

#include <cmath>
#include <string>

#include "tdde/errors.hpp"

namespace tdde {
namespace {

constexpr double kProbFloor = 1e-12;

void check_probs(const std::vector<double>& d, const char* side) {
  for (double v : d)
    if (!(v > 0.0 && v < 1.0))
      throw ArgumentError(std::string("loss: ") + side +
                          " entry outside (0,1): " + std::to_string(v));
}

}  // namespace

LossResult nu_weighted_loss(const std::vector<double>& d_prev,
                            const std::vector<double>& d_next, double nu,
                            ScoreType score) {
  if (!(nu > 0.0)) throw ArgumentError("loss: nu must be positive");
  if (d_prev.size() != d_next.size() || d_prev.empty())
    throw ArgumentError("loss: class arrays must be non-empty and equal length");
  check_probs(d_prev, "d_prev");
  check_probs(d_next, "d_next");

  const std::size_t nb = d_prev.size();
  const double norm = (1.0 + nu) * static_cast<double>(nb);
  LossResult r;
  r.d_prev_grad.resize(nb);
  r.d_next_grad.resize(nb);
  double acc = 0.0;
  if (score == ScoreType::Brier) {
    for (std::size_t i = 0; i < nb; ++i) {
      acc += d_prev[i] * d_prev[i] + nu * (1.0 - d_next[i]) * (1.0 - d_next[i]);
      r.d_prev_grad[i] = 2.0 * d_prev[i] / norm;
      r.d_next_grad[i] = -2.0 * nu * (1.0 - d_next[i]) / norm;
    }
  } else {
    for (std::size_t i = 0; i < nb; ++i) {
      const double p0 = 1.0 - d_prev[i];  // probability credited to the true class
      const double p1 = d_next[i];
      acc += -std::log(p0 < kProbFloor ? kProbFloor : p0) -
             nu * std::log(p1 < kProbFloor ? kProbFloor : p1);
      r.d_prev_grad[i] = p0 < kProbFloor ? 0.0 : 1.0 / (p0 * norm);
      r.d_next_grad[i] = p1 < kProbFloor ? 0.0 : -nu / (p1 * norm);
    }
  }
  r.loss = acc / norm;
  return r;
}

LossResult brier_loss(const std::vector<double>& d_prev,
                      const std::vector<double>& d_next) {
  return nu_weighted_loss(d_prev, d_next, 1.0, ScoreType::Brier);
}

LossResult log_loss(const std::vector<double>& d_prev,
                    const std::vector<double>& d_next) {
  return nu_weighted_loss(d_prev, d_next, 1.0, ScoreType::Logarithmic);
}

}  // namespace tdde
