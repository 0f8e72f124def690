#pragma once

#include <cstdint>
#include <vector>

#include "tdde/mlp.hpp"

namespace tdde {

// Maps a scalar time to the feature vector appended to the spatial input.
// RawAppend passes t through; Fourier uses random Fourier features with
// frequencies drawn once at construction and frozen afterwards.
struct TimeEmbedding {
  enum class Mode { RawAppend, Fourier };

  Mode mode = Mode::RawAppend;
  std::size_t n_freq = 16;
  double scale = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> freqs;  // fixed after construction (Fourier only)

  static TimeEmbedding raw_append();
  static TimeEmbedding fourier(std::size_t n_freq, double scale, std::uint64_t seed);

  std::size_t dim() const { return mode == Mode::RawAppend ? 1 : 2 * n_freq; }
  void embed(double t, double* out) const;
  std::vector<double> embed(double t) const;
};

// Time-dependent network f(x, t) and classifier d(x, t, dt) = sigmoid(f * dt).
struct ClassifierModel {
  TimeEmbedding embedding;
  MlpParams net;  // input_dim = data_dim + embedding.dim()

  std::size_t data_dim() const { return net.input_dim() - embedding.dim(); }

  // [x | embed(t)] rows for a batch sharing the same t.
  Matrix assemble_input(const Matrix& x, double t) const;

  double f_eval(const std::vector<double>& x, double t) const;
  std::vector<double> f_eval_batch(const Matrix& x, double t) const;

  // d in (0, 1); the pre-sigmoid argument f*dt is clamped to +-30.
  double d_eval(const std::vector<double>& x, double t, double dt) const;

  // d f / d x, the embedding slots' gradients are dropped.
  std::vector<double> grad_f_x(const std::vector<double>& x, double t) const;
  Matrix grad_f_x_batch(const Matrix& x, double t) const;
};

ClassifierModel make_classifier(std::size_t data_dim, const std::vector<std::size_t>& hidden,
                                Activation act, const TimeEmbedding& emb, std::uint64_t seed);

double sigmoid_clamped(double z);  // arg clamped to +-30

}  // namespace tdde
