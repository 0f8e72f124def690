#include <doctest.h>

#include <cmath>

#include "tdde/samplers.hpp"
#include "test_util.hpp"

using namespace tdde;
using namespace tdde::testing;

namespace {

Matrix std_normal_score(const Matrix& x) {
  Matrix g = x;
  for (double& v : g.values) v = -v;
  return g;
}

std::vector<double> std_normal_logp(const Matrix& x) {
  std::vector<double> out(x.rows, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    double q = 0.0;
    for (std::size_t j = 0; j < x.cols; ++j) q += x.at(i, j) * x.at(i, j);
    out[i] = -0.5 * q;
  }
  return out;
}

}  // namespace

TEST_CASE("seed strategies honor their definitions") {
  Rng rng(8);

  Matrix data(3, 2);
  for (std::size_t i = 0; i < 6; ++i) data.values[i] = static_cast<double>(i);
  Matrix s = seed_chains(SeedStrategy::data_init(data, 0.0), 20, rng);
  for (std::size_t i = 0; i < s.rows; ++i) {
    bool is_row = false;
    for (std::size_t r = 0; r < 3 && !is_row; ++r)
      is_row = s.at(i, 0) == data.at(r, 0) && s.at(i, 1) == data.at(r, 1);
    CHECK(is_row);
  }

  s = seed_chains(SeedStrategy::fixed({1.0, 0.0, 0.0}), 5, rng);
  CHECK(s.rows == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(s.at(i, 0) == 1.0);
    CHECK(s.at(i, 1) == 0.0);
    CHECK(s.at(i, 2) == 0.0);
  }

  s = seed_chains(SeedStrategy::uniform_box({-2.0, 0.0}, {0.0, 4.0}), 20000, rng);
  CHECK(std::abs(sample_mean(column(s, 0)) + 1.0) < 3.0 * (2.0 / std::sqrt(12.0 * 20000)));
  CHECK(std::abs(sample_mean(column(s, 1)) - 2.0) < 3.0 * (4.0 / std::sqrt(12.0 * 20000)));
}

TEST_CASE("seed strategy construction rejects bad arguments") {
  CHECK_THROWS_AS(SeedStrategy::uniform_box({1.0}, {0.5}), ArgumentError);
  Matrix empty;
  CHECK_THROWS_AS(SeedStrategy::data_init(empty, 0.1), ArgumentError);
}

TEST_CASE("ula with zero step returns the seeds unchanged") {
  Rng rng(4);
  Matrix seeds(10, 2);
  for (double& v : seeds.values) v = rng.uniform(-1.0, 1.0);
  ChainOutput out = ula(std_normal_score, seeds, 0.0, 25, rng);
  CHECK(out.samples.values == seeds.values);
  CHECK(out.n_flagged == 0);
}

TEST_CASE("ula reproduces standard normal moments") {
  Rng rng(21);
  Matrix seeds = seed_chains(SeedStrategy::uniform_box({-1.0, -1.0}, {1.0, 1.0}),
                             4000, rng);
  ChainOutput out = ula(std_normal_score, seeds, 1e-3, 3000, rng);
  REQUIRE(out.samples.rows == 4000);
  for (std::size_t j = 0; j < 2; ++j) {
    auto col = column(out.samples, j);
    CHECK(std::abs(sample_mean(col)) < 0.05);
    CHECK(sample_variance(col) > 0.9);
    CHECK(sample_variance(col) < 1.1);
  }
}

TEST_CASE("ula flags chains that reach non-finite states") {
  auto bad_score = [](const Matrix& x) {
    Matrix g = x;
    for (std::size_t i = 0; i < x.rows; ++i)
      for (std::size_t j = 0; j < x.cols; ++j)
        g.at(i, j) = x.at(i, 0) > 5.0 ? std::numeric_limits<double>::infinity() : -x.at(i, j);
    return g;
  };
  Matrix seeds(3, 1);
  seeds.at(0, 0) = 0.0;
  seeds.at(1, 0) = 10.0;  // driven to infinity on the first step
  seeds.at(2, 0) = -0.5;
  Rng rng(5);
  ChainOutput out = ula(bad_score, seeds, 0.1, 10, rng);
  CHECK(out.n_flagged == 1);
  CHECK(out.samples.rows == 2);
}

TEST_CASE("ula chains are bit-reproducible under a fixed seed") {
  Matrix seeds(8, 2, 0.1);
  Rng r1(42), r2(42);
  ChainOutput a = ula(std_normal_score, seeds, 1e-2, 50, r1);
  ChainOutput b = ula(std_normal_score, seeds, 1e-2, 50, r2);
  CHECK(a.samples.values == b.samples.values);
}

TEST_CASE("hmc rejects zero leapfrog steps") {
  Matrix seeds(2, 1, 0.0);
  Rng rng(1);
  CHECK_THROWS_AS(hmc(std_normal_logp, std_normal_score, seeds, 0.1, 0, 10, 0, rng),
                  ArgumentError);
}

TEST_CASE("hmc acceptance approaches one as the step vanishes") {
  Matrix seeds(20, 2, 0.3);
  Rng rng(6);
  ChainOutput out = hmc(std_normal_logp, std_normal_score, seeds, 1e-4, 3, 50, 0, rng);
  CHECK(out.acceptance_rate > 0.999);
}

TEST_CASE("hmc reproduces standard normal moments") {
  Rng rng(31);
  Matrix seeds = seed_chains(SeedStrategy::uniform_box({-1.0, -1.0}, {1.0, 1.0}),
                             100, rng);
  ChainOutput out = hmc(std_normal_logp, std_normal_score, seeds, 0.1, 20, 600, 100,
                        rng, /*thin=*/1);
  CHECK(out.acceptance_rate > 0.6);
  CHECK(out.acceptance_rate <= 0.999);
  REQUIRE(out.trajectory.rows == 100 * 600);
  for (std::size_t j = 0; j < 2; ++j) {
    auto col = column(out.trajectory, j);
    CHECK(std::abs(sample_mean(col)) < 0.05);
    CHECK(sample_variance(col) > 0.9);
    CHECK(sample_variance(col) < 1.1);
  }
}

TEST_CASE("hmc mode masses on a double well match quadrature") {
  // logp(x) = -2(x^2-1)^2 - 0.5x: two wells at +-1 with unequal mass and a
  // barrier low enough for regular crossings
  auto logp = [](const Matrix& x) {
    std::vector<double> out(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
      const double v = x.at(i, 0);
      const double w = v * v - 1.0;
      out[i] = -2.0 * w * w - 0.5 * v;
    }
    return out;
  };
  auto grad = [](const Matrix& x) {
    Matrix g(x.rows, 1);
    for (std::size_t i = 0; i < x.rows; ++i) {
      const double v = x.at(i, 0);
      g.at(i, 0) = -8.0 * v * (v * v - 1.0) - 0.5;
    }
    return g;
  };

  // trapezoid quadrature for the right-mode mass
  double mass_pos = 0.0, mass_all = 0.0;
  const double dx = 1e-3;
  for (double v = -3.0; v <= 3.0; v += dx) {
    const double w = v * v - 1.0;
    const double p = std::exp(-2.0 * w * w - 0.5 * v);
    mass_all += p;
    if (v > 0.0) mass_pos += p;
  }
  const double want = mass_pos / mass_all;

  Rng rng(77);
  Matrix seeds(100, 1);
  for (std::size_t i = 0; i < 100; ++i) seeds.at(i, 0) = (i % 2 == 0) ? 1.0 : -1.0;
  ChainOutput out = hmc(logp, grad, seeds, 0.2, 25, 1000, 200, rng, /*thin=*/1);
  REQUIRE(out.trajectory.rows == 100000);
  double got = 0.0;
  for (std::size_t i = 0; i < out.trajectory.rows; ++i)
    if (out.trajectory.at(i, 0) > 0.0) got += 1.0;
  got /= static_cast<double>(out.trajectory.rows);
  CHECK(std::abs(got - want) / want < 0.1);
}
