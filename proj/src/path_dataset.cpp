#include "tdde/path_dataset.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "tdde/csv.hpp"

namespace tdde {

void PathDataset::validate() const {
  if (times.size() != samples.size())
    throw DataError("path dataset: times/samples count mismatch");
  for (std::size_t j = 1; j < times.size(); ++j)
    if (!(times[j] > times[j - 1]))
      throw DataError("path dataset: times must be strictly increasing");
  const std::size_t n = dim();
  for (const auto& m : samples)
    if (m.cols != n) throw DataError("path dataset: inconsistent sample width");
}

std::size_t PathDataset::time_index(double t) const {
  for (std::size_t j = 0; j < times.size(); ++j)
    if (std::abs(times[j] - t) <= 1e-12) return j;
  throw DataError("path dataset: no samples recorded at t=" + std::to_string(t));
}

void save_path_dataset(const PathDataset& ds, const std::string& dir,
                       const std::string& stem) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["format"] = "tdde-paths-v1";
  manifest["dim"] = ds.dim();
  manifest["paired"] = ds.paired;
  manifest["times"] = ds.times;
  nlohmann::json files = nlohmann::json::array();
  nlohmann::json counts = nlohmann::json::array();
  for (std::size_t j = 0; j < ds.n_times(); ++j) {
    const std::string name = stem + "_t" + std::to_string(j) + ".csv";
    save_matrix_csv(ds.samples[j], dir + "/" + name);
    files.push_back(name);
    counts.push_back(ds.samples[j].rows);
  }
  manifest["files"] = files;
  manifest["counts"] = counts;
  std::ofstream out(dir + "/" + stem + "_manifest.json");
  if (!out) throw DataError("cannot write manifest in " + dir);
  out << manifest.dump(2) << "\n";
}

PathDataset load_path_dataset(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ParseError("cannot open " + manifest_path);
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(manifest_path + ": " + e.what());
  }
  if (manifest.value("format", "") != "tdde-paths-v1")
    throw ParseError(manifest_path + ": unknown manifest format");
  PathDataset ds;
  ds.times = manifest.at("times").get<std::vector<double>>();
  ds.paired = manifest.value("paired", false);
  const auto dir = std::filesystem::path(manifest_path).parent_path();
  for (const auto& f : manifest.at("files"))
    ds.samples.push_back(load_csv((dir / f.get<std::string>()).string()));
  ds.validate();
  return ds;
}

}  // namespace tdde
