#include <doctest.h>

#include <cmath>

#include "tdde/classifier.hpp"
#include "test_util.hpp"

using namespace tdde;
using namespace tdde::testing;

TEST_CASE("raw embedding passes t through") {
  TimeEmbedding e = TimeEmbedding::raw_append();
  CHECK(e.embed(0.3) == std::vector<double>{0.3});
}

TEST_CASE("fourier embedding at t=0 is all cosines") {
  TimeEmbedding e = TimeEmbedding::fourier(16, 1.0, 42);
  auto v = e.embed(0.0);
  REQUIRE(v.size() == 32);
  for (std::size_t k = 0; k < 16; ++k) {
    CHECK(v[k] == doctest::Approx(1.0));
    CHECK(v[16 + k] == doctest::Approx(0.0));
  }
}

TEST_CASE("fourier embedding norm squared equals n_freq at any t") {
  TimeEmbedding e = TimeEmbedding::fourier(16, 1.3, 7);
  for (double t : {0.0, 0.1, 0.37, 0.9, 1.0}) {
    auto v = e.embed(t);
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    CHECK(n2 == doctest::Approx(16.0).epsilon(1e-12));
  }
}

TEST_CASE("fourier frequencies are frozen and reproducible") {
  TimeEmbedding a = TimeEmbedding::fourier(8, 1.0, 5);
  TimeEmbedding b = TimeEmbedding::fourier(8, 1.0, 5);
  CHECK(a.freqs == b.freqs);
  CHECK(a.embed(0.42) == b.embed(0.42));
}

TEST_CASE("zero-weight classifier evaluates to zero and d to one half") {
  ClassifierModel m = make_classifier(2, {8}, Activation::ReLU,
                                      TimeEmbedding::raw_append(), 3);
  for (auto& l : m.net.layers) {
    std::fill(l.weight.values.begin(), l.weight.values.end(), 0.0);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
  CHECK(m.f_eval({0.4, -0.2}, 0.7) == 0.0);
  CHECK(m.d_eval({0.4, -0.2}, 0.7, 0.1) == 0.5);
  auto g = m.grad_f_x({0.4, -0.2}, 0.7);
  CHECK(g == std::vector<double>{0.0, 0.0});
}

TEST_CASE("f_eval equals mlp_forward on the assembled input") {
  ClassifierModel m = make_classifier(2, {16, 16}, Activation::SiLU,
                                      TimeEmbedding::fourier(4, 1.0, 9), 11);
  std::vector<double> x = {0.3, -1.1};
  const double t = 0.62;
  Matrix xm(1, 2);
  xm.values = x;
  const double direct = mlp_forward(m.net, m.assemble_input(xm, t))[0];
  CHECK(m.f_eval(x, t) == direct);
}

TEST_CASE("d_eval is one half at dt=0 for any model") {
  ClassifierModel m = make_classifier(3, {8}, Activation::ReLU,
                                      TimeEmbedding::raw_append(), 21);
  CHECK(m.d_eval({1.0, 2.0, -0.5}, 0.4, 0.0) == 0.5);
}

TEST_CASE("sigmoid arithmetic: f*dt = ln 3 gives d = 0.75") {
  CHECK(sigmoid_clamped(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("logit of d recovers f*dt below the clamp") {
  ClassifierModel m = make_classifier(1, {12}, Activation::SiLU,
                                      TimeEmbedding::raw_append(), 33);
  const std::vector<double> x = {0.8};
  for (double dt : {0.02, 0.1, 0.5}) {
    const double f = m.f_eval(x, 0.3);
    REQUIRE(std::abs(f * dt) < 20.0);
    const double d = m.d_eval(x, 0.3, dt);
    const double logit = std::log(d / (1.0 - d));
    CHECK(std::abs(logit / dt - f) < 1e-10 * std::max(1.0, std::abs(f)));
  }
}

TEST_CASE("d_eval rejects negative dt") {
  ClassifierModel m = make_classifier(1, {4}, Activation::ReLU,
                                      TimeEmbedding::raw_append(), 2);
  CHECK_THROWS_AS(m.d_eval({0.0}, 0.2, -0.1), ArgumentError);
}

TEST_CASE("d_eval stays inside (0,1) and increases with f*dt") {
  for (double z : {-1e8, -35.0, -1.0, 0.0, 2.0, 40.0, 1e9}) {
    const double d = sigmoid_clamped(z);
    CHECK(d > 0.0);
    CHECK(d < 1.0);
  }
  CHECK(sigmoid_clamped(0.2) > sigmoid_clamped(0.1));
}

TEST_CASE("grad_f_x matches finite differences and drops embedding slots") {
  ClassifierModel m = make_classifier(3, {24, 24}, Activation::SiLU,
                                      TimeEmbedding::fourier(6, 0.8, 17), 101);
  std::vector<double> x = {0.2, -0.7, 1.3};
  const double t = 0.45;
  auto g = m.grad_f_x(x, t);
  REQUIRE(g.size() == 3);

  const double h = 1e-5;
  for (std::size_t j = 0; j < 3; ++j) {
    auto xp = x, xm_ = x;
    xp[j] += h;
    xm_[j] -= h;
    const double fd = (m.f_eval(xp, t) - m.f_eval(xm_, t)) / (2.0 * h);
    CHECK(rel_err(g[j], fd) < 1e-5);
  }
}

TEST_CASE("repeated evaluation with the same model is identical") {
  ClassifierModel m = make_classifier(2, {16}, Activation::SiLU,
                                      TimeEmbedding::fourier(4, 1.0, 3), 8);
  const std::vector<double> x = {0.1, 0.2};
  CHECK(m.f_eval(x, 0.5) == m.f_eval(x, 0.5));
  CHECK(m.grad_f_x(x, 0.5) == m.grad_f_x(x, 0.5));
}
