#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tdde/classifier.hpp"
#include "tdde/losses.hpp"
#include "tdde/pair_batch.hpp"

namespace tdde {

struct TrainConfig {
  ScoreType score = ScoreType::Brier;
  double nu = 1.0;
  std::size_t epochs = 500;
  std::size_t batch = 512;       // N_b per class side
  double lr = 1e-3;
  double lr_decay = 1.0;         // per-epoch multiplier, 1 = none
  double weight_decay = 0.0;
  std::uint64_t seed = 0;
  bool verbose = false;

  void validate() const;
};

struct TrainReport {
  std::vector<double> epoch_loss;  // mean loss per epoch
  double final_loss = 0.0;
  double wall_time_seconds = 0.0;
};

// Where contrastive pairs come from: recorded sample paths, or the linear
// interpolant between a latent density and a fixed dataset.
struct TrainSource {
  const PathDataset* paths = nullptr;
  const Matrix* data = nullptr;
  const LatentDensity* latent = nullptr;

  static TrainSource from_paths(const PathDataset& p);
  static TrainSource from_static(const Matrix& data, const LatentDensity& latent);
  bool is_paths() const { return paths != nullptr; }
};

// Contrastive training: one pass per epoch over all time pairs j in shuffled
// order, one Adam step per pair. With nu != 1 the classifier is evaluated as
// sigmoid(f*dt + log nu); the density formulas stay unchanged.
TrainReport train(ClassifierModel& model, const TrainSource& source,
                  const TimeGrid& grid, const TrainConfig& cfg);

// Maximum-likelihood mode: minimizes
//   mean_data[-sum_j f(x, tbar_j) dt_j] + lambda * mean_latent[(sum_j f(z, tbar_j) dt_j)^2]
// with one Adam step per epoch on fresh batches.
TrainReport ml_train(ClassifierModel& model, const Matrix& data,
                     const LatentDensity& latent, const TimeGrid& grid, double lambda,
                     const TrainConfig& cfg);

}  // namespace tdde
