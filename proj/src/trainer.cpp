#include "tdde/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

namespace tdde {
namespace {

void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[rng.uniform_index(i)]);
}

}  // namespace

void TrainConfig::validate() const {
  if (!(nu > 0.0)) throw ArgumentError("train config: nu must be positive");
  if (epochs == 0) throw ArgumentError("train config: epochs must be positive");
  if (batch == 0) throw ArgumentError("train config: batch must be positive");
  if (!(lr > 0.0)) throw ArgumentError("train config: lr must be positive");
  if (!(lr_decay > 0.0)) throw ArgumentError("train config: lr_decay must be positive");
  if (weight_decay < 0.0) throw ArgumentError("train config: weight_decay must be >= 0");
}

TrainSource TrainSource::from_paths(const PathDataset& p) {
  TrainSource s;
  s.paths = &p;
  return s;
}

TrainSource TrainSource::from_static(const Matrix& data, const LatentDensity& latent) {
  TrainSource s;
  s.data = &data;
  s.latent = &latent;
  return s;
}

TrainReport train(ClassifierModel& model, const TrainSource& source,
                  const TimeGrid& grid, const TrainConfig& cfg) {
  cfg.validate();
  if (source.is_paths()) {
    source.paths->validate();
    // every grid knot must be backed by recorded samples
    for (double t : grid.times) source.paths->time_index(t);
  } else if (source.data == nullptr || source.latent == nullptr) {
    throw ArgumentError("train: source must supply paths or data+latent");
  } else if (source.data->rows == 0) {
    throw ArgumentError("train: empty dataset");
  }

  const auto t_start = std::chrono::steady_clock::now();
  const std::size_t n_pairs = grid.n_steps();
  const double log_nu = std::log(cfg.nu);

  AdamState adam = AdamState::init(model.net);
  Rng rng(cfg.seed, /*stream=*/2);
  std::vector<std::size_t> order(n_pairs);
  std::iota(order.begin(), order.end(), std::size_t{1});

  TrainReport report;
  report.epoch_loss.reserve(cfg.epochs);
  double lr = cfg.lr;

  std::vector<double> d_prev(cfg.batch), d_next(cfg.batch);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_indices(order, rng);
    double loss_sum = 0.0;
    for (std::size_t jj = 0; jj < n_pairs; ++jj) {
      const std::size_t j = order[jj];
      PairBatch pb = source.is_paths()
                         ? path_pair_batch(*source.paths, grid, j, cfg.batch, rng)
                         : static_pair_batch(*source.data, *source.latent, grid, j,
                                             cfg.batch, rng);

      // stacked forward: rows [0, N_b) are x_prev, [N_b, 2N_b) are x_next
      Matrix stacked(2 * cfg.batch, pb.x_prev.cols);
      std::copy(pb.x_prev.values.begin(), pb.x_prev.values.end(), stacked.values.begin());
      std::copy(pb.x_next.values.begin(), pb.x_next.values.end(),
                stacked.values.begin() + pb.x_prev.values.size());

      ForwardCache cache;
      std::vector<double> f = mlp_forward(model.net, model.assemble_input(stacked, pb.t_mid),
                                          &cache);
      for (std::size_t i = 0; i < cfg.batch; ++i) {
        d_prev[i] = sigmoid_clamped(f[i] * pb.dt + log_nu);
        d_next[i] = sigmoid_clamped(f[cfg.batch + i] * pb.dt + log_nu);
      }

      LossResult lr_res = nu_weighted_loss(d_prev, d_next, cfg.nu, cfg.score);
      if (!std::isfinite(lr_res.loss))
        throw TrainingError("train: non-finite loss at epoch " + std::to_string(epoch) +
                            ", pair j=" + std::to_string(j));
      loss_sum += lr_res.loss;

      // chain through d = sigmoid(f*dt + log nu)
      std::vector<double> dl_df(2 * cfg.batch);
      for (std::size_t i = 0; i < cfg.batch; ++i) {
        dl_df[i] = lr_res.d_prev_grad[i] * d_prev[i] * (1.0 - d_prev[i]) * pb.dt;
        dl_df[cfg.batch + i] =
            lr_res.d_next_grad[i] * d_next[i] * (1.0 - d_next[i]) * pb.dt;
      }
      MlpGradients g = mlp_backward(model.net, cache, dl_df);
      adam_step(model.net, g.param_grads, adam, lr, cfg.weight_decay);
    }
    const double mean_loss = loss_sum / static_cast<double>(n_pairs);
    report.epoch_loss.push_back(mean_loss);
    if (cfg.verbose)
      std::printf("epoch %zu  loss %.6f  lr %.3e\n", epoch, mean_loss, lr);
    lr *= cfg.lr_decay;
  }

  report.final_loss = report.epoch_loss.back();
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

TrainReport ml_train(ClassifierModel& model, const Matrix& data,
                     const LatentDensity& latent, const TimeGrid& grid, double lambda,
                     const TrainConfig& cfg) {
  cfg.validate();
  if (lambda < 0.0) throw ArgumentError("ml_train: lambda must be >= 0");
  if (data.rows == 0) throw ArgumentError("ml_train: empty dataset");
  if (data.cols != latent.dim())
    throw ShapeError("ml_train: data and latent dimensions differ");

  const auto t_start = std::chrono::steady_clock::now();
  const std::size_t n_pairs = grid.n_steps();
  const std::size_t nb = cfg.batch;
  const std::size_t n = data.cols;

  AdamState adam = AdamState::init(model.net);
  Rng rng(cfg.seed, /*stream=*/3);
  TrainReport report;
  report.epoch_loss.reserve(cfg.epochs);
  double lr = cfg.lr;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    // rows [0, nb): data draws; rows [nb, 2nb): latent draws
    Matrix batch(2 * nb, n);
    for (std::size_t i = 0; i < nb; ++i) {
      const double* row = data.values.data() + rng.uniform_index(data.rows) * n;
      std::copy(row, row + n, batch.values.data() + i * n);
    }
    for (std::size_t i = nb; i < 2 * nb; ++i)
      latent.sample(rng, batch.values.data() + i * n);

    // g(x) = sum_j f(x, tbar_j) dt_j, assembled over all pairs
    std::vector<ForwardCache> caches(n_pairs);
    std::vector<std::vector<double>> f_vals(n_pairs);
    std::vector<double> g_acc(2 * nb, 0.0);
    for (std::size_t j = 1; j <= n_pairs; ++j) {
      f_vals[j - 1] = mlp_forward(model.net,
                                  model.assemble_input(batch, grid.midpoint(j)),
                                  &caches[j - 1]);
      const double dt = grid.dt(j);
      for (std::size_t i = 0; i < 2 * nb; ++i) g_acc[i] += f_vals[j - 1][i] * dt;
    }

    double loss = 0.0;
    for (std::size_t i = 0; i < nb; ++i) loss -= g_acc[i];
    loss /= static_cast<double>(nb);
    double penalty = 0.0;
    for (std::size_t i = nb; i < 2 * nb; ++i) penalty += g_acc[i] * g_acc[i];
    loss += lambda * penalty / static_cast<double>(nb);

    if (!std::isfinite(loss) || loss < -1e6)
      throw TrainingError("ml_train: objective diverging at epoch " +
                          std::to_string(epoch) + " (loss=" + std::to_string(loss) +
                          "); with lambda=" + std::to_string(lambda) +
                          " the data term is unbounded below");
    report.epoch_loss.push_back(loss);

    MlpParams grad_acc = model.net.zeros_like();
    for (std::size_t j = 1; j <= n_pairs; ++j) {
      const double dt = grid.dt(j);
      std::vector<double> dl_df(2 * nb);
      for (std::size_t i = 0; i < nb; ++i)
        dl_df[i] = -dt / static_cast<double>(nb);
      for (std::size_t i = nb; i < 2 * nb; ++i)
        dl_df[i] = 2.0 * lambda * g_acc[i] * dt / static_cast<double>(nb);
      MlpGradients g = mlp_backward(model.net, caches[j - 1], dl_df);
      for (std::size_t k = 0; k < grad_acc.layers.size(); ++k) {
        auto& dst = grad_acc.layers[k];
        const auto& src = g.param_grads.layers[k];
        for (std::size_t ii = 0; ii < dst.weight.values.size(); ++ii)
          dst.weight.values[ii] += src.weight.values[ii];
        for (std::size_t ii = 0; ii < dst.bias.size(); ++ii)
          dst.bias[ii] += src.bias[ii];
      }
    }
    adam_step(model.net, grad_acc, adam, lr, cfg.weight_decay);
    if (cfg.verbose)
      std::printf("epoch %zu  loss %.6f  lr %.3e\n", epoch, loss, lr);
    lr *= cfg.lr_decay;
  }

  report.final_loss = report.epoch_loss.back();
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

}  // namespace tdde
