#pragma once

#include <string>
#include <vector>

#include "tdde/matrix.hpp"

namespace tdde {

// Rectangular numeric CSV, '.' decimal, comma separator, optional header row
// (detected as a first line with any non-numeric cell).
Matrix load_csv(const std::string& path, bool normalize_rows = false);

// As load_csv, but one column (by name or index) holds 0/1 labels that are
// split off; the remaining columns form the feature matrix.
struct LabeledData {
  Matrix features;
  std::vector<int> labels;
};
LabeledData load_labeled_csv(const std::string& path, const std::string& label_column,
                             bool normalize_rows = false);

void save_matrix_csv(const Matrix& m, const std::string& path,
                     const std::vector<std::string>& header = {});

}  // namespace tdde
