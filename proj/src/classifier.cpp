#include "tdde/classifier.hpp"

#include <cmath>

namespace tdde {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TimeEmbedding TimeEmbedding::raw_append() {
  TimeEmbedding e;
  e.mode = Mode::RawAppend;
  return e;
}

TimeEmbedding TimeEmbedding::fourier(std::size_t n_freq, double scale, std::uint64_t seed) {
  if (n_freq == 0) throw ArgumentError("fourier embedding: n_freq must be positive");
  TimeEmbedding e;
  e.mode = Mode::Fourier;
  e.n_freq = n_freq;
  e.scale = scale;
  e.seed = seed;
  Rng rng(seed, /*stream=*/0x0f0f0f0fULL);
  e.freqs.resize(n_freq);
  for (double& f : e.freqs) f = rng.normal(0.0, scale);
  return e;
}

void TimeEmbedding::embed(double t, double* out) const {
  if (mode == Mode::RawAppend) {
    out[0] = t;
    return;
  }
  for (std::size_t k = 0; k < n_freq; ++k) {
    out[k] = std::cos(kTwoPi * freqs[k] * t);
    out[n_freq + k] = std::sin(kTwoPi * freqs[k] * t);
  }
}

std::vector<double> TimeEmbedding::embed(double t) const {
  std::vector<double> out(dim());
  embed(t, out.data());
  return out;
}

double sigmoid_clamped(double z) {
  if (z > 30.0) z = 30.0;
  if (z < -30.0) z = -30.0;
  return 1.0 / (1.0 + std::exp(-z));
}

Matrix ClassifierModel::assemble_input(const Matrix& x, double t) const {
  const std::size_t n = data_dim();
  if (x.cols != n)
    throw ShapeError("classifier: input has " + std::to_string(x.cols) +
                     " columns, model expects " + std::to_string(n));
  const std::size_t e = embedding.dim();
  std::vector<double> emb(e);
  embedding.embed(t, emb.data());
  Matrix full(x.rows, n + e);
  for (std::size_t i = 0; i < x.rows; ++i) {
    double* dst = full.values.data() + i * full.cols;
    const double* src = x.values.data() + i * x.cols;
    for (std::size_t j = 0; j < n; ++j) dst[j] = src[j];
    for (std::size_t j = 0; j < e; ++j) dst[n + j] = emb[j];
  }
  return full;
}

double ClassifierModel::f_eval(const std::vector<double>& x, double t) const {
  Matrix xm(1, x.size());
  xm.values = x;
  return f_eval_batch(xm, t)[0];
}

std::vector<double> ClassifierModel::f_eval_batch(const Matrix& x, double t) const {
  return mlp_forward(net, assemble_input(x, t));
}

double ClassifierModel::d_eval(const std::vector<double>& x, double t, double dt) const {
  if (dt < 0.0) throw ArgumentError("d_eval: dt must be non-negative");
  return sigmoid_clamped(f_eval(x, t) * dt);
}

std::vector<double> ClassifierModel::grad_f_x(const std::vector<double>& x, double t) const {
  Matrix xm(1, x.size());
  xm.values = x;
  Matrix g = grad_f_x_batch(xm, t);
  return g.values;
}

Matrix ClassifierModel::grad_f_x_batch(const Matrix& x, double t) const {
  ForwardCache cache;
  mlp_forward(net, assemble_input(x, t), &cache);
  std::vector<double> ones(x.rows, 1.0);
  Matrix full = mlp_input_grads(net, cache, ones);
  const std::size_t n = data_dim();
  Matrix out(x.rows, n);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = full.at(i, j);
  return out;
}

ClassifierModel make_classifier(std::size_t data_dim, const std::vector<std::size_t>& hidden,
                                Activation act, const TimeEmbedding& emb, std::uint64_t seed) {
  if (data_dim == 0) throw ArgumentError("make_classifier: data_dim must be positive");
  ClassifierModel m;
  m.embedding = emb;
  Rng rng(seed, /*stream=*/1);
  m.net = make_mlp(data_dim + emb.dim(), hidden, act, rng);
  return m;
}

}  // namespace tdde
