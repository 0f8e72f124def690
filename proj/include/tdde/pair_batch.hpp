#pragma once

#include "tdde/latent_density.hpp"
#include "tdde/matrix.hpp"
#include "tdde/path_dataset.hpp"
#include "tdde/rng.hpp"
#include "tdde/time_grid.hpp"

namespace tdde {

// Contrastive training batch for one time pair (t_{j-1}, t_j). Label 0 is the
// earlier side (x_prev), label 1 the later side (x_next), so the optimal
// classifier is rho_next / (rho_prev + rho_next).
struct PairBatch {
  Matrix x_prev;  // N_b x n, drawn at t_{j-1}
  Matrix x_next;  // N_b x n, drawn at t_j
  double t_mid = 0.0;
  double dt = 0.0;
};

// (1 - t) * x0 + t * x1; exact at both endpoints.
std::vector<double> interpolate(const std::vector<double>& x0,
                                const std::vector<double>& x1, double t);

// One interpolated row: z is the latent draw, x the data row.
void interpolate_row(const double* z, const double* x, double t, std::size_t n,
                     double* out);

// Batch for static estimation: every row pairs a fresh latent draw with a
// uniformly chosen data row through the linear interpolant (unpaired).
PairBatch static_pair_batch(const Matrix& data, const LatentDensity& latent,
                            const TimeGrid& grid, std::size_t j, std::size_t n_batch,
                            Rng& rng);

// Batch from recorded sample paths; rows drawn uniformly with replacement, so
// observations are replicated whenever n_batch exceeds what is stored.
PairBatch path_pair_batch(const PathDataset& paths, const TimeGrid& grid, std::size_t j,
                          std::size_t n_batch, Rng& rng);

}  // namespace tdde
