#include "tdde/samplers.hpp"

#include <cmath>
#include <string>

#include "tdde/errors.hpp"

namespace tdde {
namespace {

bool row_finite(const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(v[i])) return false;
  return true;
}

Matrix collect_survivors(const Matrix& states, const std::vector<char>& flagged) {
  std::size_t kept = 0;
  for (char f : flagged)
    if (!f) ++kept;
  Matrix out(kept, states.cols);
  std::size_t r = 0;
  for (std::size_t i = 0; i < states.rows; ++i) {
    if (flagged[i]) continue;
    for (std::size_t j = 0; j < states.cols; ++j) out.at(r, j) = states.at(i, j);
    ++r;
  }
  return out;
}

void append_rows(Matrix& dst, const Matrix& src) {
  if (dst.cols == 0) dst.cols = src.cols;
  dst.values.insert(dst.values.end(), src.values.begin(), src.values.end());
  dst.rows += src.rows;
}

}  // namespace

SeedStrategy SeedStrategy::uniform_box(std::vector<double> lower,
                                       std::vector<double> upper) {
  if (lower.size() != upper.size() || lower.empty())
    throw ArgumentError("seed box: bounds must be non-empty and equal length");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] < upper[i]))
      throw ArgumentError("seed box: lower must be < upper in every dimension");
  SeedStrategy s;
  s.kind = Kind::UniformBox;
  s.lower = std::move(lower);
  s.upper = std::move(upper);
  return s;
}

SeedStrategy SeedStrategy::data_init(const Matrix& dataset, double noise_std) {
  if (dataset.rows == 0) throw ArgumentError("seed data_init: empty dataset");
  if (noise_std < 0.0) throw ArgumentError("seed data_init: noise_std must be >= 0");
  SeedStrategy s;
  s.kind = Kind::DataInit;
  s.dataset = &dataset;
  s.noise_std = noise_std;
  return s;
}

SeedStrategy SeedStrategy::fixed(std::vector<double> point) {
  if (point.empty()) throw ArgumentError("seed fixed: empty point");
  SeedStrategy s;
  s.kind = Kind::Fixed;
  s.point = std::move(point);
  return s;
}

Matrix seed_chains(const SeedStrategy& strategy, std::size_t n_chains, Rng& rng) {
  if (n_chains == 0) throw ArgumentError("seed_chains: need at least one chain");
  switch (strategy.kind) {
    case SeedStrategy::Kind::UniformBox: {
      const std::size_t n = strategy.lower.size();
      Matrix seeds(n_chains, n);
      for (std::size_t i = 0; i < n_chains; ++i)
        for (std::size_t j = 0; j < n; ++j)
          seeds.at(i, j) = rng.uniform(strategy.lower[j], strategy.upper[j]);
      return seeds;
    }
    case SeedStrategy::Kind::DataInit: {
      const Matrix& data = *strategy.dataset;
      Matrix seeds(n_chains, data.cols);
      for (std::size_t i = 0; i < n_chains; ++i) {
        const double* row = data.values.data() + rng.uniform_index(data.rows) * data.cols;
        for (std::size_t j = 0; j < data.cols; ++j)
          seeds.at(i, j) = row[j] + (strategy.noise_std > 0.0
                                         ? rng.normal(0.0, strategy.noise_std)
                                         : 0.0);
      }
      return seeds;
    }
    case SeedStrategy::Kind::Fixed: {
      Matrix seeds(n_chains, strategy.point.size());
      for (std::size_t i = 0; i < n_chains; ++i)
        for (std::size_t j = 0; j < strategy.point.size(); ++j)
          seeds.at(i, j) = strategy.point[j];
      return seeds;
    }
  }
  throw ArgumentError("seed_chains: unknown strategy");
}

ChainOutput ula(const BatchScoreFn& score_fn, const Matrix& seeds, double step,
                std::size_t n_steps, Rng& rng, std::size_t thin) {
  if (step < 0.0) throw ArgumentError("ula: step must be >= 0");
  const std::size_t n_chains = seeds.rows;
  const std::size_t n = seeds.cols;

  std::vector<Rng> streams;
  streams.reserve(n_chains);
  for (std::size_t c = 0; c < n_chains; ++c) streams.push_back(rng.split(c));

  Matrix x = seeds;
  std::vector<char> flagged(n_chains, 0);
  const double noise_scale = std::sqrt(2.0 * step);
  ChainOutput out;

  for (std::size_t s = 0; s < n_steps; ++s) {
    Matrix g = score_fn(x);
    check_same_shape(g, x, "ula score");
    for (std::size_t c = 0; c < n_chains; ++c) {
      if (flagged[c]) {
        for (std::size_t j = 0; j < n; ++j) streams[c].normal();  // keep streams aligned
        continue;
      }
      double* xc = x.values.data() + c * n;
      const double* gc = g.values.data() + c * n;
      for (std::size_t j = 0; j < n; ++j)
        xc[j] += step * gc[j] + noise_scale * streams[c].normal();
      if (!row_finite(xc, n)) flagged[c] = 1;
    }
    if (thin > 0 && (s + 1) % thin == 0) append_rows(out.trajectory, x);
  }

  out.n_flagged = 0;
  for (char f : flagged) out.n_flagged += f;
  out.samples = collect_survivors(x, flagged);
  out.acceptance_rate = 1.0;
  return out;
}

ChainOutput hmc(const BatchLogpFn& logp_fn, const BatchScoreFn& grad_fn,
                const Matrix& seeds, double step, std::size_t n_leapfrog,
                std::size_t n_samples, std::size_t burn_in, Rng& rng,
                std::size_t thin) {
  if (!(step > 0.0)) throw ArgumentError("hmc: step must be positive");
  if (n_leapfrog < 1) throw ArgumentError("hmc: need at least one leapfrog step");
  if (n_samples < 1) throw ArgumentError("hmc: need at least one sample");
  if (thin == 0) thin = 1;

  const std::size_t n_chains = seeds.rows;
  const std::size_t n = seeds.cols;
  std::vector<Rng> streams;
  streams.reserve(n_chains);
  for (std::size_t c = 0; c < n_chains; ++c) streams.push_back(rng.split(c));

  Matrix x = seeds;
  std::vector<double> logp = logp_fn(x);
  ChainOutput out;
  std::size_t accepted = 0, proposed = 0;

  Matrix p(n_chains, n);
  const std::size_t total_iters = burn_in + n_samples;
  for (std::size_t it = 0; it < total_iters; ++it) {
    for (std::size_t c = 0; c < n_chains; ++c)
      for (std::size_t j = 0; j < n; ++j) p.at(c, j) = streams[c].normal();

    std::vector<double> kin0(n_chains, 0.0);
    for (std::size_t c = 0; c < n_chains; ++c)
      for (std::size_t j = 0; j < n; ++j) kin0[c] += 0.5 * p.at(c, j) * p.at(c, j);

    // leapfrog with unit mass
    Matrix q = x;
    Matrix pm = p;
    Matrix g = grad_fn(q);
    for (std::size_t i = 0; i < pm.values.size(); ++i)
      pm.values[i] += 0.5 * step * g.values[i];
    for (std::size_t l = 0; l < n_leapfrog; ++l) {
      for (std::size_t i = 0; i < q.values.size(); ++i)
        q.values[i] += step * pm.values[i];
      g = grad_fn(q);
      const double scale = (l + 1 == n_leapfrog) ? 0.5 : 1.0;
      for (std::size_t i = 0; i < pm.values.size(); ++i)
        pm.values[i] += scale * step * g.values[i];
    }

    std::vector<double> logp_new = logp_fn(q);
    for (std::size_t c = 0; c < n_chains; ++c) {
      ++proposed;
      double kin1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) kin1 += 0.5 * pm.at(c, j) * pm.at(c, j);
      const double h0 = -logp[c] + kin0[c];
      const double h1 = -logp_new[c] + kin1;
      const double denergy = h1 - h0;
      bool accept = false;
      if (std::isfinite(denergy) && std::abs(denergy) <= 1000.0 &&
          row_finite(q.values.data() + c * n, n)) {
        accept = denergy <= 0.0 || streams[c].uniform() < std::exp(-denergy);
      }
      if (accept) {
        ++accepted;
        for (std::size_t j = 0; j < n; ++j) x.at(c, j) = q.at(c, j);
        logp[c] = logp_new[c];
      }
    }
    if (it >= burn_in && (it - burn_in) % thin == 0) append_rows(out.trajectory, x);
  }

  out.samples = collect_survivors(x, std::vector<char>(n_chains, 0));
  out.acceptance_rate =
      proposed == 0 ? 1.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
  return out;
}

}  // namespace tdde
