#include "tdde/pair_batch.hpp"

#include <cmath>
#include <string>

namespace tdde {

std::vector<double> interpolate(const std::vector<double>& x0,
                                const std::vector<double>& x1, double t) {
  if (x0.size() != x1.size())
    throw ShapeError("interpolate: endpoint lengths differ");
  std::vector<double> out(x0.size());
  interpolate_row(x0.data(), x1.data(), t, x0.size(), out.data());
  return out;
}

void interpolate_row(const double* z, const double* x, double t, std::size_t n,
                     double* out) {
  if (t == 0.0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = z[i];
    return;
  }
  if (t == 1.0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i];
    return;
  }
  const double a = 1.0 - t;
  for (std::size_t i = 0; i < n; ++i) out[i] = a * z[i] + t * x[i];
}

PairBatch static_pair_batch(const Matrix& data, const LatentDensity& latent,
                            const TimeGrid& grid, std::size_t j, std::size_t n_batch,
                            Rng& rng) {
  if (data.rows == 0) throw ArgumentError("static_pair_batch: empty dataset");
  if (j < 1 || j > grid.n_steps())
    throw ArgumentError("static_pair_batch: pair index out of range");
  if (data.cols != latent.dim())
    throw ShapeError("static_pair_batch: data and latent dimensions differ");

  const std::size_t n = data.cols;
  PairBatch b;
  b.t_mid = grid.midpoint(j);
  b.dt = grid.dt(j);
  b.x_prev = Matrix(n_batch, n);
  b.x_next = Matrix(n_batch, n);

  const double t_prev = grid.times[j - 1];
  const double t_next = grid.times[j];
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n_batch; ++i) {
    latent.sample(rng, z.data());
    const double* x = data.values.data() + rng.uniform_index(data.rows) * n;
    interpolate_row(z.data(), x, t_prev, n, b.x_prev.values.data() + i * n);

    latent.sample(rng, z.data());
    x = data.values.data() + rng.uniform_index(data.rows) * n;
    interpolate_row(z.data(), x, t_next, n, b.x_next.values.data() + i * n);
  }
  return b;
}

PairBatch path_pair_batch(const PathDataset& paths, const TimeGrid& grid, std::size_t j,
                          std::size_t n_batch, Rng& rng) {
  if (j < 1 || j > grid.n_steps())
    throw ArgumentError("path_pair_batch: pair index out of range");
  const std::size_t jp = paths.time_index(grid.times[j - 1]);
  const std::size_t jn = paths.time_index(grid.times[j]);
  const Matrix& prev = paths.samples[jp];
  const Matrix& next = paths.samples[jn];
  if (prev.rows == 0 || next.rows == 0)
    throw DataError("path_pair_batch: no samples stored at t=" +
                    std::to_string(grid.times[j]));

  const std::size_t n = prev.cols;
  PairBatch b;
  b.t_mid = grid.midpoint(j);
  b.dt = grid.dt(j);
  b.x_prev = Matrix(n_batch, n);
  b.x_next = Matrix(n_batch, n);
  for (std::size_t i = 0; i < n_batch; ++i) {
    const double* p = prev.values.data() + rng.uniform_index(prev.rows) * n;
    const double* q = next.values.data() + rng.uniform_index(next.rows) * n;
    for (std::size_t c = 0; c < n; ++c) {
      b.x_prev.at(i, c) = p[c];
      b.x_next.at(i, c) = q[c];
    }
  }
  return b;
}

}  // namespace tdde
