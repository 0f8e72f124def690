#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "tdde/csv.hpp"
#include "tdde/simdata.hpp"
#include "test_util.hpp"

using namespace tdde;
using namespace tdde::testing;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("tdde_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("noise-free linear duffing matches the damped oscillation") {
  DuffingParams p;
  p.zeta = 0.25;
  p.omega0 = 1.0;
  p.eps_nl = 0.0;
  p.s0 = 0.0;
  Matrix cov(2, 2);
  cov.at(0, 0) = cov.at(1, 1) = 1e-12;
  p.initial = LatentDensity::gaussian({1.0, 0.0}, cov);

  Rng rng(3);
  PathDataset ds = simulate_duffing(p, 1, 0.005, {0.8}, rng);
  const double y = ds.samples[0].at(0, 0);

  // y'' + 2 zeta y' + y = 0, y(0)=1, y'(0)=0
  const double wd = std::sqrt(1.0 - p.zeta * p.zeta);
  const double t = 0.8;
  const double want =
      std::exp(-p.zeta * t) * (std::cos(wd * t) + p.zeta / wd * std::sin(wd * t));
  CHECK(std::abs(y - want) < 1e-4);
}

TEST_CASE("duffing initial density is honored") {
  DuffingParams p = DuffingParams::paper_defaults();
  Rng rng(9);
  PathDataset ds = simulate_duffing(p, 100000, 0.01, {0.0}, rng);
  auto y = column(ds.samples[0], 0);
  auto v = column(ds.samples[0], 1);
  CHECK(std::abs(sample_mean(y)) < 0.012);
  CHECK(std::abs(sample_variance(y) - 1.0) < 0.02);
  double corr = 0.0;
  for (std::size_t i = 0; i < ds.samples[0].rows; ++i)
    corr += ds.samples[0].at(i, 0) * ds.samples[0].at(i, 1);
  corr /= static_cast<double>(ds.samples[0].rows);
  CHECK(std::abs(corr - 0.5) < 3.0 * 0.75 / std::sqrt(1e5));
}

TEST_CASE("recording times must sit on the integration lattice") {
  DuffingParams p = DuffingParams::paper_defaults();
  Rng rng(2);
  CHECK_THROWS_AS(simulate_duffing(p, 1, 0.005, {0.0123}, rng), ArgumentError);
}

TEST_CASE("degenerate bouc-wen keeps z - y constant") {
  BoucWenParams p;
  p.gamma = 0.0;
  p.beta = 0.0;
  p.a_bw = 1.0;
  p.s0 = 0.0;
  Matrix cov(3, 3);
  for (int i = 0; i < 3; ++i) cov.at(i, i) = 0.25;
  p.initial = LatentDensity::gaussian({0.3, -0.2, 0.5}, cov);

  Rng rng(5);
  PathDataset ds = simulate_bouc_wen(p, 20, 0.005, {0.2, 0.5, 0.8}, rng);
  for (std::size_t path = 0; path < 20; ++path) {
    const double c0 = ds.samples[0].at(path, 1) - ds.samples[0].at(path, 0);
    for (std::size_t j = 1; j < 3; ++j) {
      const double cj = ds.samples[j].at(path, 1) - ds.samples[j].at(path, 0);
      CHECK(std::abs(cj - c0) < 1e-9);
    }
  }
}

TEST_CASE("bouc-wen with nu=1 matches an explicit linear-z drift oracle") {
  BoucWenParams p = BoucWenParams::paper_defaults();
  p.s0 = 0.0;
  Matrix cov(3, 3);
  for (int i = 0; i < 3; ++i) cov.at(i, i) = 1e-12;
  p.initial = LatentDensity::gaussian({0.4, 0.1, -0.3}, cov);

  Rng rng(6);
  PathDataset ds = simulate_bouc_wen(p, 1, 0.0025, {0.5}, rng);

  // independent RK4 with |z|^{nu-1} z written as plain z
  double x[3] = {0.4, 0.1, -0.3};
  auto drift = [&](const double* s, double* d) {
    d[0] = s[2];
    d[1] = p.a_bw * s[2] - p.gamma * std::abs(s[2]) * s[1] -
           p.beta * s[2] * std::abs(s[1]);
    d[2] = -2.0 * p.zeta * p.omega0 * s[2] -
           p.omega0 * p.omega0 * (p.alpha_e * s[0] + (1.0 - p.alpha_e) * s[1]);
  };
  const double h = 0.0025;
  double k1[3], k2[3], k3[3], k4[3], tmp[3];
  for (int s = 0; s < 200; ++s) {
    drift(x, k1);
    for (int c = 0; c < 3; ++c) tmp[c] = x[c] + 0.5 * h * k1[c];
    drift(tmp, k2);
    for (int c = 0; c < 3; ++c) tmp[c] = x[c] + 0.5 * h * k2[c];
    drift(tmp, k3);
    for (int c = 0; c < 3; ++c) tmp[c] = x[c] + h * k3[c];
    drift(tmp, k4);
    for (int c = 0; c < 3; ++c) x[c] += h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
  }
  for (int c = 0; c < 3; ++c)
    CHECK(std::abs(ds.samples[0].at(0, c) - x[c]) < 1e-5);
}

TEST_CASE("ou marginals: initial pdf, stationary limit, simulated variance") {
  OuParams p;
  p.theta = 1.0;
  p.sigma = 1.0;
  p.m0 = 1.0;
  p.v0 = 0.25;

  CHECK(ou_log_density(p, 1.3, 0.0) ==
        doctest::Approx(-0.5 * 0.09 / 0.25 - 0.5 * std::log(2 * M_PI * 0.25)));
  CHECK(ou_variance(p, 50.0) == doctest::Approx(0.5).epsilon(1e-8));

  Rng rng(12);
  PathDataset ds = simulate_ou(p, 100000, {0.5}, rng);
  auto x = column(ds.samples[0], 0);
  const double want_var = ou_variance(p, 0.5);
  CHECK(std::abs(sample_mean(x) - ou_mean(p, 0.5)) <
        3.0 * std::sqrt(want_var / 1e5));
  CHECK(std::abs(sample_variance(x) - want_var) <
        3.0 * want_var * std::sqrt(2.0 / 1e5));
}

TEST_CASE("circle radii cluster near 1 and 0.5") {
  Rng rng(31);
  Matrix x = gen_circles(4000, rng);
  std::size_t outer = 0, inner = 0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double r = std::hypot(x.at(i, 0), x.at(i, 1));
    if (std::abs(r - 1.0) < 0.09) ++outer;
    if (std::abs(r - 0.5) < 0.09) ++inner;
  }
  CHECK(outer + inner == 4000);
  CHECK(outer > 1700);
  CHECK(inner > 1700);
}

TEST_CASE("noiseless moons lie exactly on the two crescents") {
  Rng rng(17);
  Matrix x = gen_moons(500, rng, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double u = 0.5 * (x.at(i, 0) + 1.0);
    const double v = 0.5 * (x.at(i, 1) + 1.0);
    const double mode0 = std::abs(u * u + v * v - 1.0);
    const double mode1 = std::abs((1.0 - u) * (1.0 - u) + (0.5 - v) * (0.5 - v) - 1.0);
    CHECK(std::min(mode0, mode1) < 1e-12);
  }
}

TEST_CASE("checkerboard stays inside its box") {
  Rng rng(23);
  Matrix x = gen_checkerboard(5000, rng);
  for (std::size_t i = 0; i < x.rows; ++i) {
    CHECK(x.at(i, 0) >= -1.0);
    CHECK(x.at(i, 0) <= 1.0);
    CHECK(x.at(i, 1) >= 0.0);
    CHECK(x.at(i, 1) <= 1.0);
  }
}

TEST_CASE("semisphere rows have norm in [1, 1.01] and non-negative last axis") {
  Rng rng(41);
  Matrix x = gen_semisphere(4, 2000, 5.0, rng);
  for (std::size_t i = 0; i < x.rows; ++i) {
    double n2 = 0.0;
    for (std::size_t j = 0; j < 4; ++j) n2 += x.at(i, j) * x.at(i, j);
    const double n = std::sqrt(n2);
    CHECK(n >= 1.0);
    CHECK(n <= 1.01 + 1e-12);
    CHECK(x.at(i, 3) >= 0.0);
  }
}

TEST_CASE("semisphere x3 distribution is stable across sample sizes") {
  Rng r1(10), r2(20);
  Matrix small = gen_semisphere(3, 10000, 5.0, r1);
  Matrix big = gen_semisphere(3, 1000000, 5.0, r2);
  // two-sample KS on the last coordinate
  auto a = column(small, 2);
  auto b = column(big, 2);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t ia = 0, ib = 0;
  double ks = 0.0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] <= b[ib]) ++ia;
    else ++ib;
    ks = std::max(ks, std::abs(ia / double(a.size()) - ib / double(b.size())));
  }
  CHECK(ks < 0.02);
}

TEST_CASE("generators are deterministic under a fixed seed") {
  Rng r1(99), r2(99);
  CHECK(gen_circles(50, r1).values == gen_circles(50, r2).values);
  Rng r3(7), r4(7);
  CHECK(gen_checkerboard(50, r3).values == gen_checkerboard(50, r4).values);
}

TEST_CASE("csv loader round-trips matrices and reports parse errors") {
  TempDir tmp;
  const auto p = (tmp.path / "m.csv").string();
  {
    std::ofstream f(p);
    f << "1,2\n3,4\n";
  }
  Matrix m = load_csv(p);
  REQUIRE(m.rows == 2);
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(1, 1) == 4.0);

  const auto ragged = (tmp.path / "bad.csv").string();
  {
    std::ofstream f(ragged);
    f << "1,2\n3\n";
  }
  CHECK_THROWS_WITH_AS(load_csv(ragged), doctest::Contains("line 2"), ParseError);

  const auto header = (tmp.path / "h.csv").string();
  {
    std::ofstream f(header);
    f << "x1,x2,label\n0.5,0.25,1\n-1,0.125,0\n";
  }
  LabeledData ld = load_labeled_csv(header, "label");
  CHECK(ld.labels == std::vector<int>{1, 0});
  CHECK(ld.features.cols == 2);
  CHECK(ld.features.at(1, 0) == -1.0);
}

TEST_CASE("csv row normalization produces unit rows") {
  TempDir tmp;
  const auto p = (tmp.path / "n.csv").string();
  {
    std::ofstream f(p);
    f << "3,4\n5,12\n";
  }
  Matrix m = load_csv(p, /*normalize_rows=*/true);
  for (std::size_t i = 0; i < m.rows; ++i)
    CHECK(std::hypot(m.at(i, 0), m.at(i, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("path dataset save/load round-trip") {
  TempDir tmp;
  Rng rng(3);
  OuParams p;
  PathDataset ds = simulate_ou(p, 50, {0.1, 0.2, 0.4}, rng);
  save_path_dataset(ds, tmp.path.string(), "ou");
  PathDataset back = load_path_dataset((tmp.path / "ou_manifest.json").string());
  CHECK(back.times == ds.times);
  REQUIRE(back.samples.size() == 3);
  CHECK(back.samples[1].values == ds.samples[1].values);
}
