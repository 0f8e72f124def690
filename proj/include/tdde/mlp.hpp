#pragma once

#include <cstdint>
#include <vector>

#include "tdde/matrix.hpp"
#include "tdde/rng.hpp"

namespace tdde {

enum class Activation { ReLU, SiLU };

// Feed-forward network with scalar output: affine layers with ReLU/SiLU on
// all but the last. Weights are d_out x d_in, so a layer maps
// X (batch x d_in) -> X * W^T + b.
struct MlpParams {
  struct Layer {
    Matrix weight;             // d_out x d_in
    std::vector<double> bias;  // d_out
  };
  std::vector<Layer> layers;
  Activation activation = Activation::ReLU;

  std::size_t input_dim() const { return layers.front().weight.cols; }
  std::size_t n_layers() const { return layers.size(); }
  std::size_t n_params() const;
  void validate() const;  // dimension chaining, scalar output

  // Zero-filled copy with identical shapes (gradient / moment buffers).
  MlpParams zeros_like() const;
};

// Kaiming-uniform fan-in initialization, deterministic under `rng`.
MlpParams make_mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                   Activation act, Rng& rng);

// Per-layer pre-activations and activations for one batch.
struct ForwardCache {
  Matrix input;                      // batch x d_in
  std::vector<Matrix> pre;           // z_k = a_{k-1} W_k^T + b_k
  std::vector<Matrix> post;          // a_k = act(z_k), last layer affine
  std::size_t batch() const { return input.rows; }
};

// y[i] = f(params, X row i); cache retained for the backward pass.
std::vector<double> mlp_forward(const MlpParams& params, const Matrix& x,
                                ForwardCache* cache = nullptr);

struct MlpGradients {
  MlpParams param_grads;  // same shapes as params
  Matrix input_grads;     // batch x d_in
};

// Exact reverse-mode gradients of sum_i dl_dy[i] * y[i] with respect to the
// parameters and the inputs.
MlpGradients mlp_backward(const MlpParams& params, const ForwardCache& cache,
                          const std::vector<double>& dl_dy);

// Input gradients only; skips the parameter-gradient matmuls (score paths).
Matrix mlp_input_grads(const MlpParams& params, const ForwardCache& cache,
                       const std::vector<double>& dl_dy);

struct AdamState {
  MlpParams m;  // first moments
  MlpParams v;  // second moments
  std::int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState init(const MlpParams& params);
};

// Adam with decoupled weight decay: the decay shrink is applied to the
// parameters before the moment update.
void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state,
               double lr, double weight_decay);

}  // namespace tdde
