#pragma once

#include <string>

#include "tdde/density_model.hpp"

namespace tdde {

// Versioned JSON record: layer shapes + row-major values, the frozen time
// embedding (mode, n_freq, scale, seed, freqs), grid, base density and
// anchor direction.
void save_density_model(const DensityModel& dm, const std::string& path);
DensityModel load_density_model(const std::string& path);

}  // namespace tdde
