#include "tdde/model_io.hpp"

#include <fstream>

#include <json.hpp>

namespace tdde {

using nlohmann::json;

void save_density_model(const DensityModel& dm, const std::string& path) {
  json j;
  j["format"] = "tdde-model-v1";

  json emb;
  emb["mode"] = dm.model.embedding.mode == TimeEmbedding::Mode::RawAppend ? "raw" : "fourier";
  emb["n_freq"] = dm.model.embedding.n_freq;
  emb["scale"] = dm.model.embedding.scale;
  emb["seed"] = dm.model.embedding.seed;
  emb["freqs"] = dm.model.embedding.freqs;
  j["embedding"] = emb;

  j["activation"] = dm.model.net.activation == Activation::ReLU ? "relu" : "silu";
  json layers = json::array();
  for (const auto& l : dm.model.net.layers) {
    json jl;
    jl["rows"] = l.weight.rows;
    jl["cols"] = l.weight.cols;
    jl["weight"] = l.weight.values;
    jl["bias"] = l.bias;
    layers.push_back(std::move(jl));
  }
  j["layers"] = layers;

  json grid;
  switch (dm.grid.kind) {
    case TimeGrid::Kind::Linear: grid["kind"] = "linear"; break;
    case TimeGrid::Kind::Logarithmic: grid["kind"] = "log"; break;
    case TimeGrid::Kind::Explicit: grid["kind"] = "explicit"; break;
  }
  grid["times"] = dm.grid.times;
  j["grid"] = grid;

  json base;
  if (dm.base.is_std_normal()) {
    base["kind"] = "std_normal";
    base["dim"] = dm.base.dim();
  } else {
    base["kind"] = "gaussian";
    base["mean"] = dm.base.mean();
    base["cov"] = dm.base.covariance().values;
  }
  j["base"] = base;
  j["direction"] = dm.direction == AnchorDirection::Forward ? "forward" : "reverse";

  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file " + path);
  out << j.dump(2) << "\n";
}

DensityModel load_density_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (j.value("format", "") != "tdde-model-v1")
    throw ParseError(path + ": unknown model format");

  DensityModel dm;
  const json& emb = j.at("embedding");
  if (emb.at("mode") == "raw") {
    dm.model.embedding = TimeEmbedding::raw_append();
  } else {
    dm.model.embedding = TimeEmbedding::fourier(emb.at("n_freq").get<std::size_t>(),
                                                emb.at("scale").get<double>(),
                                                emb.at("seed").get<std::uint64_t>());
    // stored frequencies win over regeneration
    dm.model.embedding.freqs = emb.at("freqs").get<std::vector<double>>();
    if (dm.model.embedding.freqs.size() != dm.model.embedding.n_freq)
      throw ParseError(path + ": embedding freqs length mismatch");
  }

  dm.model.net.activation = j.at("activation") == "relu" ? Activation::ReLU : Activation::SiLU;
  for (const auto& jl : j.at("layers")) {
    MlpParams::Layer l;
    l.weight = Matrix(jl.at("rows").get<std::size_t>(), jl.at("cols").get<std::size_t>());
    l.weight.values = jl.at("weight").get<std::vector<double>>();
    if (l.weight.values.size() != l.weight.rows * l.weight.cols)
      throw ParseError(path + ": layer weight length mismatch");
    l.bias = jl.at("bias").get<std::vector<double>>();
    dm.model.net.layers.push_back(std::move(l));
  }
  dm.model.net.validate();

  const json& grid = j.at("grid");
  dm.grid = make_explicit_grid(grid.at("times").get<std::vector<double>>());
  if (grid.at("kind") == "linear") dm.grid.kind = TimeGrid::Kind::Linear;
  else if (grid.at("kind") == "log") dm.grid.kind = TimeGrid::Kind::Logarithmic;

  const json& base = j.at("base");
  if (base.at("kind") == "std_normal") {
    dm.base = LatentDensity::std_normal(base.at("dim").get<std::size_t>());
  } else {
    auto mean = base.at("mean").get<std::vector<double>>();
    Matrix cov(mean.size(), mean.size());
    cov.values = base.at("cov").get<std::vector<double>>();
    if (cov.values.size() != mean.size() * mean.size())
      throw ParseError(path + ": base covariance length mismatch");
    dm.base = LatentDensity::gaussian(std::move(mean), std::move(cov));
  }
  dm.direction = j.value("direction", "forward") == "reverse" ? AnchorDirection::Reverse
                                                              : AnchorDirection::Forward;
  if (dm.model.data_dim() != dm.base.dim())
    throw ParseError(path + ": network input and base density dimensions disagree");
  return dm;
}

}  // namespace tdde
