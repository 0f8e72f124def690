#include <doctest.h>

#include "tdde/mlp.hpp"
#include "test_util.hpp"

using namespace tdde;
using namespace tdde::testing;

TEST_CASE("single affine layer composes inputs") {
  MlpParams p;
  p.layers.push_back({Matrix::from_rows({{1.0, 1.0}}), {0.0}});
  Matrix x(1, 2);
  x.at(0, 0) = 2.0;
  x.at(0, 1) = 3.0;
  CHECK(mlp_forward(p, x)[0] == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("zero-weight relu net returns the final bias") {
  Rng rng(1);
  MlpParams p = make_mlp(3, {8, 8}, Activation::ReLU, rng);
  for (auto& l : p.layers) {
    std::fill(l.weight.values.begin(), l.weight.values.end(), 0.0);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
  p.layers.back().bias[0] = -1.75;
  Matrix x(2, 3, 0.4);
  auto y = mlp_forward(p, x);
  CHECK(y[0] == -1.75);
  CHECK(y[1] == -1.75);
}

TEST_CASE("random silu net matches naive per-sample evaluation") {
  Rng rng(7);
  MlpParams p = make_mlp(2, {16}, Activation::SiLU, rng);
  Matrix x(5, 2);
  for (double& v : x.values) v = rng.uniform(-2.0, 2.0);
  auto y = mlp_forward(p, x);
  for (std::size_t i = 0; i < x.rows; ++i) {
    std::vector<double> row(x.row(i).begin(), x.row(i).end());
    CHECK(std::abs(y[i] - naive_forward(p, row)) < 1e-12);
  }
}

TEST_CASE("forward rejects mismatched input width") {
  Rng rng(3);
  MlpParams p = make_mlp(4, {8}, Activation::ReLU, rng);
  Matrix x(2, 3, 1.0);
  CHECK_THROWS_AS(mlp_forward(p, x), ShapeError);
}

TEST_CASE("linear layer input gradient is the weight row") {
  MlpParams p;
  p.layers.push_back({Matrix::from_rows({{2.0, -0.5, 1.25}}), {0.3}});
  Matrix x(1, 3, 0.7);
  ForwardCache cache;
  mlp_forward(p, x, &cache);
  MlpGradients g = mlp_backward(p, cache, {1.0});
  CHECK(g.input_grads.at(0, 0) == doctest::Approx(2.0));
  CHECK(g.input_grads.at(0, 1) == doctest::Approx(-0.5));
  CHECK(g.input_grads.at(0, 2) == doctest::Approx(1.25));
}

TEST_CASE("backward matches finite differences on a 3-32-32-1 silu net") {
  Rng rng(11);
  MlpParams p = make_mlp(3, {32, 32}, Activation::SiLU, rng);
  Matrix x(4, 3);
  for (double& v : x.values) v = rng.uniform(-1.5, 1.5);
  std::vector<double> dl_dy = {0.7, -1.2, 0.4, 1.0};

  ForwardCache cache;
  mlp_forward(p, x, &cache);
  MlpGradients g = mlp_backward(p, cache, dl_dy);

  double worst = 0.0;
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    for (std::size_t i = 0; i < p.layers[k].weight.values.size(); i += 17) {
      const double fd = fd_param_grad(p, x, dl_dy, k, false, i);
      worst = std::max(worst, rel_err(g.param_grads.layers[k].weight.values[i], fd));
    }
    for (std::size_t i = 0; i < p.layers[k].bias.size(); i += 5) {
      const double fd = fd_param_grad(p, x, dl_dy, k, true, i);
      worst = std::max(worst, rel_err(g.param_grads.layers[k].bias[i], fd));
    }
  }
  CHECK(worst < 1e-5);

  worst = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) {
      const double fd = fd_input_grad(p, x, dl_dy, i, j);
      worst = std::max(worst, rel_err(g.input_grads.at(i, j), fd));
    }
  CHECK(worst < 1e-5);
}

TEST_CASE("backward is linear in dl_dy") {
  Rng rng(13);
  MlpParams p = make_mlp(2, {8, 8}, Activation::SiLU, rng);
  Matrix x(3, 2);
  for (double& v : x.values) v = rng.uniform(-1.0, 1.0);
  ForwardCache cache;
  mlp_forward(p, x, &cache);
  MlpGradients g1 = mlp_backward(p, cache, {1.0, -0.5, 2.0});
  MlpGradients g3 = mlp_backward(p, cache, {3.0, -1.5, 6.0});
  for (std::size_t k = 0; k < p.layers.size(); ++k)
    for (std::size_t i = 0; i < g1.param_grads.layers[k].weight.values.size(); ++i)
      CHECK(g3.param_grads.layers[k].weight.values[i] ==
            doctest::Approx(3.0 * g1.param_grads.layers[k].weight.values[i]).epsilon(1e-12));
}

TEST_CASE("forward/backward are deterministic") {
  Rng rng(17);
  MlpParams p = make_mlp(3, {16}, Activation::ReLU, rng);
  Matrix x(6, 3);
  for (double& v : x.values) v = rng.uniform(-1.0, 1.0);
  std::vector<double> dl(6, 0.5);
  ForwardCache c1, c2;
  auto y1 = mlp_forward(p, x, &c1);
  auto y2 = mlp_forward(p, x, &c2);
  CHECK(y1 == y2);
  MlpGradients g1 = mlp_backward(p, c1, dl);
  MlpGradients g2 = mlp_backward(p, c2, dl);
  CHECK(g1.input_grads.values == g2.input_grads.values);
  for (std::size_t k = 0; k < p.layers.size(); ++k)
    CHECK(g1.param_grads.layers[k].weight.values ==
          g2.param_grads.layers[k].weight.values);
}

TEST_CASE("backward rejects a stale cache") {
  Rng rng(19);
  MlpParams p = make_mlp(3, {8}, Activation::ReLU, rng);
  MlpParams other = make_mlp(5, {8}, Activation::ReLU, rng);
  Matrix x(2, 5, 0.1);
  ForwardCache cache;
  mlp_forward(other, x, &cache);
  CHECK_THROWS_AS(mlp_backward(p, cache, std::vector<double>(2, 1.0)), ShapeError);
}

TEST_CASE("adam leaves params unchanged for zero gradients") {
  Rng rng(23);
  MlpParams p = make_mlp(2, {4}, Activation::ReLU, rng);
  const MlpParams before = p;
  AdamState st = AdamState::init(p);
  adam_step(p, p.zeros_like(), st, 0.1, 0.0);
  for (std::size_t k = 0; k < p.layers.size(); ++k)
    CHECK(p.layers[k].weight.values == before.layers[k].weight.values);
}

TEST_CASE("adam first step matches the hand-executed recurrence") {
  // p=1, g=1, lr=0.1: mhat=1, vhat=1 -> p = 1 - 0.1/(1+1e-8)
  MlpParams p;
  p.layers.push_back({Matrix::from_rows({{1.0}}), {0.0}});
  MlpParams g = p.zeros_like();
  g.layers[0].weight.at(0, 0) = 1.0;
  AdamState st = AdamState::init(p);
  adam_step(p, g, st, 0.1, 0.0);
  CHECK(p.layers[0].weight.at(0, 0) == doctest::Approx(0.9).epsilon(1e-7));
}

TEST_CASE("adam converges on a scalar quadratic") {
  // minimize (p - 3)^2 starting from 0
  MlpParams p;
  p.layers.push_back({Matrix::from_rows({{0.0}}), {0.0}});
  AdamState st = AdamState::init(p);
  MlpParams g = p.zeros_like();
  for (int i = 0; i < 10000; ++i) {
    g.layers[0].weight.at(0, 0) = 2.0 * (p.layers[0].weight.at(0, 0) - 3.0);
    adam_step(p, g, st, 0.01, 0.0);
  }
  CHECK(std::abs(p.layers[0].weight.at(0, 0) - 3.0) < 1e-3);
}

TEST_CASE("adam rejects non-finite gradients with the layer index") {
  Rng rng(29);
  MlpParams p = make_mlp(2, {4}, Activation::ReLU, rng);
  MlpParams g = p.zeros_like();
  g.layers[1].weight.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
  AdamState st = AdamState::init(p);
  CHECK_THROWS_WITH_AS(adam_step(p, g, st, 0.1, 0.0),
                       doctest::Contains("layer 1"), TrainingError);
}

TEST_CASE("decoupled weight decay shrinks params before the moment update") {
  MlpParams p;
  p.layers.push_back({Matrix::from_rows({{2.0}}), {0.0}});
  AdamState st = AdamState::init(p);
  adam_step(p, p.zeros_like(), st, 0.1, 0.5);
  // decay: 2 - 0.1*0.5*2 = 1.9; zero gradient leaves moments at zero
  CHECK(p.layers[0].weight.at(0, 0) == doctest::Approx(1.9).epsilon(1e-12));
}
