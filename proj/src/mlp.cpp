#include "tdde/mlp.hpp"

#include <cmath>
#include <string>

namespace tdde {
namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double act_value(Activation a, double z) {
  if (a == Activation::ReLU) return z > 0.0 ? z : 0.0;
  return z * sigmoid(z);  // SiLU
}

// ReLU subgradient at 0 is taken as 0.
inline double act_deriv(Activation a, double z) {
  if (a == Activation::ReLU) return z > 0.0 ? 1.0 : 0.0;
  const double s = sigmoid(z);
  return s + z * s * (1.0 - s);
}

}  // namespace

std::size_t MlpParams::n_params() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.values.size() + l.bias.size();
  return n;
}

void MlpParams::validate() const {
  if (layers.empty()) throw ShapeError("mlp: no layers");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& l = layers[k];
    if (l.weight.rows != l.bias.size())
      throw ShapeError("mlp: layer " + std::to_string(k) + " bias/weight mismatch");
    if (k > 0 && l.weight.cols != layers[k - 1].weight.rows)
      throw ShapeError("mlp: layer " + std::to_string(k) + " input dim does not chain");
  }
  if (layers.back().weight.rows != 1)
    throw ShapeError("mlp: output layer must produce a scalar");
}

MlpParams MlpParams::zeros_like() const {
  MlpParams z;
  z.activation = activation;
  z.layers.reserve(layers.size());
  for (const auto& l : layers) {
    MlpParams::Layer zl;
    zl.weight = Matrix(l.weight.rows, l.weight.cols);
    zl.bias.assign(l.bias.size(), 0.0);
    z.layers.push_back(std::move(zl));
  }
  return z;
}

MlpParams make_mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                   Activation act, Rng& rng) {
  if (input_dim == 0) throw ArgumentError("make_mlp: input_dim must be positive");
  MlpParams p;
  p.activation = act;
  std::size_t d_in = input_dim;
  std::vector<std::size_t> dims = hidden;
  dims.push_back(1);
  for (std::size_t d_out : dims) {
    if (d_out == 0) throw ArgumentError("make_mlp: zero-width layer");
    MlpParams::Layer l;
    l.weight = Matrix(d_out, d_in);
    l.bias.assign(d_out, 0.0);
    const double wb = std::sqrt(6.0 / static_cast<double>(d_in));
    const double bb = 1.0 / std::sqrt(static_cast<double>(d_in));
    for (double& w : l.weight.values) w = rng.uniform(-wb, wb);
    for (double& b : l.bias) b = rng.uniform(-bb, bb);
    p.layers.push_back(std::move(l));
    d_in = d_out;
  }
  return p;
}

std::vector<double> mlp_forward(const MlpParams& params, const Matrix& x,
                                ForwardCache* cache) {
  params.validate();
  if (x.cols != params.input_dim())
    throw ShapeError("mlp_forward: input has " + std::to_string(x.cols) +
                     " columns, network expects " + std::to_string(params.input_dim()));
  const std::size_t n_layers = params.layers.size();
  if (cache) {
    cache->input = x;
    cache->pre.assign(n_layers, Matrix{});
    cache->post.assign(n_layers, Matrix{});
  }
  Matrix a = x;
  for (std::size_t k = 0; k < n_layers; ++k) {
    const auto& l = params.layers[k];
    Matrix z = matmul_bt(a, l.weight);
    for (std::size_t i = 0; i < z.rows; ++i) {
      double* zi = z.values.data() + i * z.cols;
      for (std::size_t j = 0; j < z.cols; ++j) zi[j] += l.bias[j];
    }
    if (cache) cache->pre[k] = z;
    if (k + 1 < n_layers) {
      for (double& v : z.values) v = act_value(params.activation, v);
    }
    if (cache) cache->post[k] = z;
    a = std::move(z);
  }
  std::vector<double> y(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) y[i] = a.at(i, 0);
  return y;
}

MlpGradients mlp_backward(const MlpParams& params, const ForwardCache& cache,
                          const std::vector<double>& dl_dy) {
  const std::size_t n_layers = params.layers.size();
  if (cache.pre.size() != n_layers || cache.input.cols != params.input_dim())
    throw ShapeError("mlp_backward: cache does not match network");
  if (dl_dy.size() != cache.batch())
    throw ShapeError("mlp_backward: dl_dy has wrong batch size");

  MlpGradients g;
  g.param_grads = params.zeros_like();

  // delta = dL/dz for the current layer, starting from the affine output.
  Matrix delta(cache.batch(), 1);
  for (std::size_t i = 0; i < cache.batch(); ++i) delta.at(i, 0) = dl_dy[i];

  for (std::size_t k = n_layers; k-- > 0;) {
    const Matrix& a_prev = (k == 0) ? cache.input : cache.post[k - 1];
    auto& gl = g.param_grads.layers[k];
    gl.weight = matmul_at(delta, a_prev);  // d_out x d_in
    for (std::size_t j = 0; j < gl.bias.size(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < delta.rows; ++i) s += delta.at(i, j);
      gl.bias[j] = s;
    }
    Matrix back = matmul(delta, params.layers[k].weight);  // batch x d_in(k)
    if (k == 0) {
      g.input_grads = std::move(back);
    } else {
      const Matrix& z_prev = cache.pre[k - 1];
      check_same_shape(back, z_prev, "mlp_backward");
      for (std::size_t i = 0; i < back.values.size(); ++i)
        back.values[i] *= act_deriv(params.activation, z_prev.values[i]);
      delta = std::move(back);
    }
  }
  return g;
}

Matrix mlp_input_grads(const MlpParams& params, const ForwardCache& cache,
                       const std::vector<double>& dl_dy) {
  const std::size_t n_layers = params.layers.size();
  if (cache.pre.size() != n_layers || cache.input.cols != params.input_dim())
    throw ShapeError("mlp_input_grads: cache does not match network");
  if (dl_dy.size() != cache.batch())
    throw ShapeError("mlp_input_grads: dl_dy has wrong batch size");

  Matrix delta(cache.batch(), 1);
  for (std::size_t i = 0; i < cache.batch(); ++i) delta.at(i, 0) = dl_dy[i];
  for (std::size_t k = n_layers; k-- > 0;) {
    Matrix back = matmul(delta, params.layers[k].weight);
    if (k == 0) return back;
    const Matrix& z_prev = cache.pre[k - 1];
    check_same_shape(back, z_prev, "mlp_input_grads");
    for (std::size_t i = 0; i < back.values.size(); ++i)
      back.values[i] *= act_deriv(params.activation, z_prev.values[i]);
    delta = std::move(back);
  }
  return delta;  // unreachable: validate() guarantees at least one layer
}

AdamState AdamState::init(const MlpParams& params) {
  AdamState s;
  s.m = params.zeros_like();
  s.v = params.zeros_like();
  return s;
}

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state,
               double lr, double weight_decay) {
  if (params.layers.size() != grads.layers.size())
    throw ShapeError("adam_step: params/grads layer count mismatch");
  for (std::size_t k = 0; k < grads.layers.size(); ++k) {
    if (!grads.layers[k].weight.all_finite())
      throw TrainingError("adam_step: non-finite gradient in layer " + std::to_string(k));
    for (double b : grads.layers[k].bias)
      if (!std::isfinite(b))
        throw TrainingError("adam_step: non-finite bias gradient in layer " +
                            std::to_string(k));
  }

  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

  auto update = [&](double& p, double g, double& m, double& v) {
    p -= lr * weight_decay * p;  // decoupled decay before the moment update
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g * g;
    const double mhat = m / bc1;
    const double vhat = v / bc2;
    p -= lr * mhat / (std::sqrt(vhat) + state.eps);
  };

  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    auto& pl = params.layers[k];
    const auto& gl = grads.layers[k];
    auto& ml = state.m.layers[k];
    auto& vl = state.v.layers[k];
    check_same_shape(pl.weight, gl.weight, "adam_step");
    for (std::size_t i = 0; i < pl.weight.values.size(); ++i)
      update(pl.weight.values[i], gl.weight.values[i], ml.weight.values[i],
             vl.weight.values[i]);
    for (std::size_t i = 0; i < pl.bias.size(); ++i)
      update(pl.bias[i], gl.bias[i], ml.bias[i], vl.bias[i]);
  }
}

}  // namespace tdde
