#include <doctest.h>

#include <cmath>

#include "tdde/evaluation.hpp"
#include "tdde/rng.hpp"
#include "test_util.hpp"

using namespace tdde;
using namespace tdde::testing;

TEST_CASE("silverman bandwidth reproduces the hand value for d=1, N=100") {
  // (4/300)^{1/5} with sigma = 1
  const double want = std::exp(0.2 * (std::log(4.0) - std::log(300.0)));
  CHECK(silverman_bandwidth(1.0, 1, 100) == doctest::Approx(want).epsilon(1e-12));
  CHECK(silverman_bandwidth(1.0, 1, 100) == doctest::Approx(0.42169).epsilon(1e-4));
}

TEST_CASE("kde requires at least two points") {
  Matrix one(1, 1, 0.0);
  CHECK_THROWS_AS(kde_fit_silverman(one), ArgumentError);
}

TEST_CASE("kde of many standard normal draws matches the pdf at zero") {
  Rng rng(7);
  Matrix data(100000, 1);
  for (double& v : data.values) v = rng.normal();
  KdeModel kde = kde_fit_silverman(data);
  CHECK(std::abs(kde.log_pdf({0.0}) - (-0.9189385332046727)) < 0.05);
}

TEST_CASE("kde integrates to one on a fine grid") {
  Rng rng(13);
  Matrix data(2000, 1);
  for (double& v : data.values) v = rng.normal();
  KdeModel kde = kde_fit_silverman(data);
  double integral = 0.0;
  const double dx = 12.0 / 2000.0;
  for (double x = -6.0; x < 6.0; x += dx) integral += std::exp(kde.log_pdf({x})) * dx;
  CHECK(std::abs(integral - 1.0) < 0.02);
}

TEST_CASE("sinkhorn of identical point sets stays within the entropic bias") {
  Rng rng(3);
  Matrix a(100, 2);
  for (double& v : a.values) v = rng.uniform(-1.0, 1.0);
  SinkhornResult r = sinkhorn_ot(a, a, 0.01);
  CHECK(r.converged);
  CHECK(r.cost >= 0.0);
  CHECK(r.cost <= 5.0 * 0.01 * std::log(100.0));
}

TEST_CASE("sinkhorn between two single points is the squared distance") {
  Matrix a(1, 2), b(1, 2);
  a.at(0, 0) = 1.0;
  a.at(0, 1) = 2.0;
  b.at(0, 0) = -1.0;
  b.at(0, 1) = 0.5;
  SinkhornResult r = sinkhorn_ot(a, b, 0.05);
  CHECK(r.cost == doctest::Approx(4.0 + 2.25).epsilon(1e-9));
}

TEST_CASE("sinkhorn at small epsilon matches brute-force assignment on 3x3") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix a(3, 2), b(3, 2);
    for (double& v : a.values) v = rng.uniform(-1.0, 1.0);
    for (double& v : b.values) v = rng.uniform(-1.0, 1.0);

    // exhaustive minimum over the 6 permutation couplings
    double best = 1e300;
    int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (auto& pm : perm) {
      double c = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double dx = a.at(i, 0) - b.at(pm[i], 0);
        const double dy = a.at(i, 1) - b.at(pm[i], 1);
        c += (dx * dx + dy * dy) / 3.0;
      }
      best = std::min(best, c);
    }

    SinkhornResult r = sinkhorn_ot(a, b, 1e-3, 20000, 1e-9);
    CHECK(std::abs(r.cost - best) < 1e-2);
  }
}

TEST_CASE("sinkhorn is symmetric in its arguments") {
  Rng rng(5);
  Matrix a(40, 2), b(60, 2);
  for (double& v : a.values) v = rng.normal();
  for (double& v : b.values) v = 0.3 + rng.normal();
  const double ab = sinkhorn_ot(a, b, 0.05).cost;
  const double ba = sinkhorn_ot(b, a, 0.05).cost;
  CHECK(ab == doctest::Approx(ba).epsilon(1e-6));
}

TEST_CASE("sinkhorn subsamples oversized inputs") {
  Rng rng(9);
  Matrix a(50, 1), b(500, 1);
  for (double& v : a.values) v = rng.normal();
  for (double& v : b.values) v = rng.normal();
  SinkhornResult r = sinkhorn_ot(a, b, 0.05, 2000, 1e-7, /*max_points=*/100);
  CHECK(r.used_a == 50);
  CHECK(r.used_b == 100);
}

TEST_CASE("grid_l2 is zero for identical grids and matches the gaussian formula") {
  std::vector<double> p = {-1.0, -2.0, -0.5};
  CHECK(grid_l2(p, p, 0.1) == 0.0);

  // closed form: ||N(0,1) - N(0.1,1)||_2 = sqrt((1 - e^{-0.0025}) / sqrt(pi))
  const double want = std::sqrt((1.0 - std::exp(-0.01 / 4.0)) / std::sqrt(M_PI));
  const std::size_t cells = 10000;
  const double lo = -5.0, hi = 5.0;
  const double dx = (hi - lo) / static_cast<double>(cells);
  std::vector<double> pg(cells), qg(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double x = lo + (static_cast<double>(i) + 0.5) * dx;
    pg[i] = -0.5 * x * x - 0.5 * std::log(2.0 * M_PI);
    qg[i] = -0.5 * (x - 0.1) * (x - 0.1) - 0.5 * std::log(2.0 * M_PI);
  }
  const double got = grid_l2(pg, qg, dx);
  CHECK(std::abs(got - want) < 1e-3);

  // refinement stability: 4x the cells moves the value by < 1e-3
  const std::size_t cells4 = 4 * cells;
  const double dx4 = (hi - lo) / static_cast<double>(cells4);
  std::vector<double> pg4(cells4), qg4(cells4);
  for (std::size_t i = 0; i < cells4; ++i) {
    const double x = lo + (static_cast<double>(i) + 0.5) * dx4;
    pg4[i] = -0.5 * x * x - 0.5 * std::log(2.0 * M_PI);
    qg4[i] = -0.5 * (x - 0.1) * (x - 0.1) - 0.5 * std::log(2.0 * M_PI);
  }
  CHECK(std::abs(grid_l2(pg4, qg4, dx4) - got) < 1e-3);
}

TEST_CASE("grid_l2 rejects mismatched grids") {
  CHECK_THROWS_AS(grid_l2({-1.0}, {-1.0, -2.0}, 0.1), ShapeError);
}

TEST_CASE("ks distance: identical samples, disjoint-overlap uniforms, invariance") {
  std::vector<double> a = {0.1, 0.4, 0.9, 0.3};
  CHECK(ecdf_distance(a, a).ks == 0.0);

  Rng rng(21);
  std::vector<double> u1(20000), u2(20000);
  for (auto& v : u1) v = rng.uniform();
  for (auto& v : u2) v = rng.uniform(0.5, 1.5);
  const double ks = ecdf_distance(u1, u2).ks;
  CHECK(std::abs(ks - 0.5) < 0.03);

  // rank statistic: invariant under a common strictly monotone transform
  auto e1 = u1, e2 = u2;
  for (auto& v : e1) v = std::exp(v);
  for (auto& v : e2) v = std::exp(v);
  CHECK(ecdf_distance(e1, e2).ks == doctest::Approx(ks).epsilon(1e-12));
}

TEST_CASE("roc auc: separation, null, invariance, and error handling") {
  std::vector<double> scores = {0.9, 0.8, 0.7, 0.2, 0.1};
  std::vector<int> labels = {1, 1, 1, 0, 0};
  RocCurve roc = roc_auc(scores, labels);
  CHECK(roc.auc == doctest::Approx(1.0));
  CHECK(roc.points.front() == std::pair<double, double>{0.0, 0.0});
  CHECK(roc.points.back() == std::pair<double, double>{1.0, 1.0});

  Rng rng(17);
  std::vector<double> s(10000);
  std::vector<int> l(10000);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = rng.uniform();
    l[i] = rng.uniform() < 0.5 ? 1 : 0;
  }
  CHECK(std::abs(roc_auc(s, l).auc - 0.5) < 0.02);

  auto st = s;
  for (auto& v : st) v = std::atan(3.0 * v);  // strictly monotone
  CHECK(roc_auc(st, l).auc == doctest::Approx(roc_auc(s, l).auc).epsilon(1e-12));

  CHECK_THROWS_AS(roc_auc({0.1, 0.2}, {1, 1}), ArgumentError);
}

TEST_CASE("roc points are monotone non-decreasing") {
  Rng rng(4);
  std::vector<double> s(500);
  std::vector<int> l(500);
  for (std::size_t i = 0; i < s.size(); ++i) {
    l[i] = rng.uniform() < 0.3 ? 1 : 0;
    s[i] = 0.4 * l[i] + rng.uniform();
  }
  RocCurve roc = roc_auc(s, l);
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    CHECK(roc.points[i].first >= roc.points[i - 1].first);
    CHECK(roc.points[i].second >= roc.points[i - 1].second);
  }
}
