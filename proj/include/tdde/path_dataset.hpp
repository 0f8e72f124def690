#pragma once

#include <string>
#include <vector>

#include "tdde/matrix.hpp"

namespace tdde {

// Sample sets of a stochastic process indexed by recording times. Paired
// datasets keep row i of every snapshot on the same trajectory; unpaired
// ones make no such promise.
struct PathDataset {
  std::vector<double> times;     // strictly increasing
  std::vector<Matrix> samples;   // samples[j]: N_j x n at times[j]
  bool paired = false;

  std::size_t n_times() const { return times.size(); }
  std::size_t dim() const { return samples.empty() ? 0 : samples.front().cols; }
  void validate() const;

  // Index of `t` among the recording times (exact within 1e-12).
  std::size_t time_index(double t) const;
};

// One CSV per time knot plus a JSON manifest (times, counts, dims).
void save_path_dataset(const PathDataset& ds, const std::string& dir,
                       const std::string& stem);
PathDataset load_path_dataset(const std::string& manifest_path);

}  // namespace tdde
