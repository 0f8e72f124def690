// tdde: config-driven front end for time-dependent density estimation.
//
// Subcommands: simulate, train, density-grid, sample, eval, rare-score.
// Exit codes: 0 ok, 1 runtime failure, 2 config/schema violation.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "tdde/csv.hpp"
#include "tdde/density_model.hpp"
#include "tdde/evaluation.hpp"
#include "tdde/model_io.hpp"
#include "tdde/samplers.hpp"
#include "tdde/simdata.hpp"
#include "tdde/trainer.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// git-style blob hash for output sidecars

std::string sha1_hex(const std::string& data) {
  auto rol = [](std::uint32_t v, int s) { return (v << s) | (v >> (32 - s)); };
  std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u,
                        0xC3D2E1F0u};
  std::string msg = data;
  const std::uint64_t bits = static_cast<std::uint64_t>(msg.size()) * 8;
  msg.push_back(static_cast<char>(0x80));
  while (msg.size() % 64 != 56) msg.push_back('\0');
  for (int i = 7; i >= 0; --i)
    msg.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));

  for (std::size_t chunk = 0; chunk < msg.size(); chunk += 64) {
    std::uint32_t w[80];
    for (int i = 0; i < 16; ++i) {
      w[i] = (static_cast<std::uint32_t>(static_cast<unsigned char>(msg[chunk + 4 * i])) << 24) |
             (static_cast<std::uint32_t>(static_cast<unsigned char>(msg[chunk + 4 * i + 1])) << 16) |
             (static_cast<std::uint32_t>(static_cast<unsigned char>(msg[chunk + 4 * i + 2])) << 8) |
             static_cast<std::uint32_t>(static_cast<unsigned char>(msg[chunk + 4 * i + 3]));
    }
    for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    for (int i = 0; i < 80; ++i) {
      std::uint32_t f, k;
      if (i < 20) { f = (b & c) | (~b & d); k = 0x5A827999u; }
      else if (i < 40) { f = b ^ c ^ d; k = 0x6ED9EBA1u; }
      else if (i < 60) { f = (b & c) | (b & d) | (c & d); k = 0x8F1BBCDCu; }
      else { f = b ^ c ^ d; k = 0xCA62C1D6u; }
      const std::uint32_t t = rol(a, 5) + f + e + k + w[i];
      e = d; d = c; c = rol(b, 30); b = a; a = t;
    }
    h[0] += a; h[1] += b; h[2] += c; h[3] += d; h[4] += e;
  }
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (std::uint32_t v : h) out << std::setw(8) << v;
  return out.str();
}

std::string git_blob_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string content = ss.str();
  return sha1_hex("blob " + std::to_string(content.size()) + '\0' + content);
}

void write_sidecar(const std::string& path, const json& resolved_config,
                   const std::string& command) {
  json side;
  side["command"] = command;
  side["config"] = resolved_config;
  side["content_hash"] = git_blob_hash(path);
  std::ofstream out(path + ".meta.json");
  out << side.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// schema validation: unknown keys are rejected with their field path

void require_keys(const json& node, const std::string& path,
                  const std::vector<std::string>& allowed) {
  if (!node.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& item : node.items()) {
    bool known = false;
    for (const auto& k : allowed)
      if (item.key() == k) known = true;
    if (!known) throw ConfigError(path + "." + item.key() + ": unknown key");
  }
}

const json& require(const json& node, const std::string& path, const std::string& key) {
  if (!node.contains(key)) throw ConfigError(path + "." + key + ": missing");
  return node.at(key);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  return v.get<double>();
}

std::size_t as_count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw ConfigError(path + ": expected a non-negative integer");
  return v.get<std::size_t>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> as_vector(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(as_number(x, path + "[]"));
  return out;
}

void validate_schema(const json& cfg) {
  require_keys(cfg, "config",
               {"seed", "output", "data", "simulate", "grid", "base", "model", "train",
                "sample", "density_grid", "eval", "rare_score"});
  if (cfg.contains("data"))
    require_keys(cfg.at("data"), "data",
                 {"generator", "n_data", "noise", "n_dim", "alpha", "csv",
                  "normalize_rows", "paths_manifest"});
  if (cfg.contains("simulate"))
    require_keys(cfg.at("simulate"), "simulate",
                 {"system", "n_paths", "dt_sim", "t_record", "t_record_uniform", "zeta",
                  "omega0", "eps_nl", "s0", "alpha_e", "gamma", "beta", "nu_exp", "a_bw",
                  "theta", "sigma", "m0", "v0", "initial"});
  if (cfg.contains("grid"))
    require_keys(cfg.at("grid"), "grid", {"kind", "n_steps", "t_min", "times"});
  if (cfg.contains("base"))
    require_keys(cfg.at("base"), "base", {"kind", "dim", "mean", "cov", "corr"});
  if (cfg.contains("model"))
    require_keys(cfg.at("model"), "model", {"hidden", "activation", "embedding"});
  if (cfg.contains("model") && cfg.at("model").contains("embedding"))
    require_keys(cfg.at("model").at("embedding"), "model.embedding",
                 {"mode", "n_freq", "scale"});
  if (cfg.contains("train"))
    require_keys(cfg.at("train"), "train",
                 {"mode", "score", "nu", "epochs", "batch", "lr", "lr_decay",
                  "weight_decay", "lambda", "verbose"});
  if (cfg.contains("sample")) {
    require_keys(cfg.at("sample"), "sample",
                 {"sampler", "n_chains", "n_steps", "step", "leapfrog", "burn_in",
                  "n_samples", "thin", "seeds"});
    if (cfg.at("sample").contains("seeds"))
      require_keys(cfg.at("sample").at("seeds"), "sample.seeds",
                   {"kind", "lower", "upper", "noise_std", "point", "csv"});
  }
  if (cfg.contains("density_grid"))
    require_keys(cfg.at("density_grid"), "density_grid", {"t", "lower", "upper", "shape"});
  if (cfg.contains("eval"))
    require_keys(cfg.at("eval"), "eval",
                 {"metrics", "a_csv", "b_csv", "epsilon", "max_iter", "tol", "max_points",
                  "column", "p_csv", "q_csv", "cell_volume", "scores_csv", "label_column"});
  if (cfg.contains("rare_score"))
    require_keys(cfg.at("rare_score"), "rare_score",
                 {"labeled_csv", "label_column", "normalize_rows"});
}

// ---------------------------------------------------------------------------
// section builders

tdde::TimeGrid build_grid(const json& cfg) {
  const json& g = require(cfg, "config", "grid");
  const std::string kind = as_string(require(g, "grid", "kind"), "grid.kind");
  if (kind == "linear")
    return tdde::make_grid(tdde::TimeGrid::Kind::Linear,
                           as_count(require(g, "grid", "n_steps"), "grid.n_steps"));
  if (kind == "log")
    return tdde::make_grid(tdde::TimeGrid::Kind::Logarithmic,
                           as_count(require(g, "grid", "n_steps"), "grid.n_steps"),
                           g.contains("t_min") ? as_number(g.at("t_min"), "grid.t_min")
                                               : 0.01);
  if (kind == "explicit")
    return tdde::make_explicit_grid(as_vector(require(g, "grid", "times"), "grid.times"));
  throw ConfigError("grid.kind: must be linear, log or explicit");
}

tdde::LatentDensity build_base(const json& node, const std::string& path,
                               std::size_t fallback_dim) {
  if (node.is_null()) return tdde::LatentDensity::std_normal(fallback_dim);
  const std::string kind =
      node.contains("kind") ? as_string(node.at("kind"), path + ".kind") : "std_normal";
  if (kind == "std_normal") {
    const std::size_t dim = node.contains("dim")
                                ? as_count(node.at("dim"), path + ".dim")
                                : fallback_dim;
    return tdde::LatentDensity::std_normal(dim);
  }
  if (kind == "gaussian") {
    auto mean = as_vector(require(node, path, "mean"), path + ".mean");
    tdde::Matrix cov(mean.size(), mean.size());
    if (node.contains("corr")) {
      const double corr = as_number(node.at("corr"), path + ".corr");
      for (std::size_t i = 0; i < mean.size(); ++i)
        for (std::size_t j = 0; j < mean.size(); ++j)
          cov.at(i, j) = i == j ? 1.0 : corr;
    } else {
      const json& jc = require(node, path, "cov");
      if (!jc.is_array() || jc.size() != mean.size())
        throw ConfigError(path + ".cov: expected " + std::to_string(mean.size()) +
                          " rows");
      for (std::size_t i = 0; i < mean.size(); ++i) {
        auto row = as_vector(jc.at(i), path + ".cov[]");
        if (row.size() != mean.size())
          throw ConfigError(path + ".cov: row " + std::to_string(i) + " has wrong length");
        for (std::size_t j = 0; j < mean.size(); ++j) cov.at(i, j) = row[j];
      }
    }
    return tdde::LatentDensity::gaussian(std::move(mean), std::move(cov));
  }
  throw ConfigError(path + ".kind: must be std_normal or gaussian");
}

tdde::ClassifierModel build_model(const json& cfg, std::size_t data_dim,
                                  std::uint64_t seed) {
  std::vector<std::size_t> hidden = {64, 64, 64};
  tdde::Activation act = tdde::Activation::ReLU;
  tdde::TimeEmbedding emb = tdde::TimeEmbedding::raw_append();
  if (cfg.contains("model")) {
    const json& m = cfg.at("model");
    if (m.contains("hidden")) {
      hidden.clear();
      for (const auto& h : m.at("hidden"))
        hidden.push_back(as_count(h, "model.hidden[]"));
    }
    if (m.contains("activation")) {
      const std::string a = as_string(m.at("activation"), "model.activation");
      if (a == "relu") act = tdde::Activation::ReLU;
      else if (a == "silu") act = tdde::Activation::SiLU;
      else throw ConfigError("model.activation: must be relu or silu");
    }
    if (m.contains("embedding")) {
      const json& e = m.at("embedding");
      const std::string mode = as_string(require(e, "model.embedding", "mode"),
                                         "model.embedding.mode");
      if (mode == "raw") {
        emb = tdde::TimeEmbedding::raw_append();
      } else if (mode == "fourier") {
        const std::size_t n_freq = e.contains("n_freq")
                                       ? as_count(e.at("n_freq"), "model.embedding.n_freq")
                                       : 16;
        const double scale =
            e.contains("scale") ? as_number(e.at("scale"), "model.embedding.scale") : 1.0;
        emb = tdde::TimeEmbedding::fourier(n_freq, scale, seed ^ 0xfeedULL);
      } else {
        throw ConfigError("model.embedding.mode: must be raw or fourier");
      }
    }
  }
  return tdde::make_classifier(data_dim, hidden, act, emb, seed);
}

tdde::TrainConfig build_train_config(const json& cfg, std::uint64_t seed) {
  tdde::TrainConfig tc;
  tc.seed = seed;
  if (!cfg.contains("train")) return tc;
  const json& t = cfg.at("train");
  if (t.contains("score")) {
    const std::string s = as_string(t.at("score"), "train.score");
    if (s == "brier") tc.score = tdde::ScoreType::Brier;
    else if (s == "log") tc.score = tdde::ScoreType::Logarithmic;
    else throw ConfigError("train.score: must be brier or log");
  }
  if (t.contains("nu")) tc.nu = as_number(t.at("nu"), "train.nu");
  if (t.contains("epochs")) tc.epochs = as_count(t.at("epochs"), "train.epochs");
  if (t.contains("batch")) tc.batch = as_count(t.at("batch"), "train.batch");
  if (t.contains("lr")) tc.lr = as_number(t.at("lr"), "train.lr");
  if (t.contains("lr_decay")) tc.lr_decay = as_number(t.at("lr_decay"), "train.lr_decay");
  if (t.contains("weight_decay"))
    tc.weight_decay = as_number(t.at("weight_decay"), "train.weight_decay");
  if (t.contains("verbose")) tc.verbose = t.at("verbose").get<bool>();
  return tc;
}

struct LoadedData {
  tdde::Matrix features;
  std::vector<int> labels;  // empty unless a labeled csv was read
};

LoadedData load_data(const json& cfg, std::uint64_t seed) {
  const json& d = require(cfg, "config", "data");
  LoadedData out;
  if (d.contains("csv")) {
    out.features = tdde::load_csv(as_string(d.at("csv"), "data.csv"),
                                  d.value("normalize_rows", false));
    return out;
  }
  if (!d.contains("generator"))
    throw ConfigError("data: needs either csv or generator");
  const std::string gen = as_string(d.at("generator"), "data.generator");
  const std::size_t n = as_count(require(d, "data", "n_data"), "data.n_data");
  tdde::Rng rng(seed, /*stream=*/0xda7aULL);
  if (gen == "circles")
    out.features = tdde::gen_circles(n, rng, d.value("noise", 0.01));
  else if (gen == "moons")
    out.features = tdde::gen_moons(n, rng, d.value("noise", 0.1));
  else if (gen == "checkerboard")
    out.features = tdde::gen_checkerboard(n, rng);
  else if (gen == "semisphere")
    out.features = tdde::gen_semisphere(d.value("n_dim", std::size_t{3}), n,
                                        d.value("alpha", 5.0), rng);
  else
    throw ConfigError("data.generator: unknown generator " + gen);
  return out;
}

fs::path ensure_output_dir(const json& cfg, const std::string& override_dir) {
  std::string dir = override_dir;
  if (dir.empty())
    dir = cfg.contains("output") ? as_string(cfg.at("output"), "output") : "tdde_out";
  fs::create_directories(dir);
  return dir;
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_simulate(const json& cfg, const fs::path& out_dir, std::uint64_t seed) {
  const json& s = require(cfg, "config", "simulate");
  const std::string system = as_string(require(s, "simulate", "system"), "simulate.system");
  const std::size_t n_paths =
      as_count(require(s, "simulate", "n_paths"), "simulate.n_paths");

  std::vector<double> t_record;
  if (s.contains("t_record")) {
    t_record = as_vector(s.at("t_record"), "simulate.t_record");
  } else if (s.contains("t_record_uniform")) {
    const json& u = s.at("t_record_uniform");
    require_keys(u, "simulate.t_record_uniform", {"t_max", "count"});
    const double t_max = as_number(require(u, "simulate.t_record_uniform", "t_max"),
                                   "simulate.t_record_uniform.t_max");
    const std::size_t count = as_count(require(u, "simulate.t_record_uniform", "count"),
                                       "simulate.t_record_uniform.count");
    if (count < 2) throw ConfigError("simulate.t_record_uniform.count: need >= 2");
    for (std::size_t i = 0; i < count; ++i)
      t_record.push_back(t_max * static_cast<double>(i) / static_cast<double>(count - 1));
  } else {
    throw ConfigError("simulate.t_record: missing");
  }

  tdde::Rng rng(seed, /*stream=*/0x51ULL);
  tdde::PathDataset ds;
  std::size_t n_resampled = 0;
  if (system == "duffing") {
    tdde::DuffingParams p = tdde::DuffingParams::paper_defaults();
    p.zeta = s.value("zeta", p.zeta);
    p.omega0 = s.value("omega0", p.omega0);
    p.eps_nl = s.value("eps_nl", p.eps_nl);
    p.s0 = s.value("s0", p.s0);
    if (s.contains("initial")) p.initial = build_base(s.at("initial"), "simulate.initial", 2);
    ds = tdde::simulate_duffing(p, n_paths, s.value("dt_sim", 0.005), t_record, rng,
                                &n_resampled);
  } else if (system == "bouc_wen") {
    tdde::BoucWenParams p = tdde::BoucWenParams::paper_defaults();
    p.zeta = s.value("zeta", p.zeta);
    p.omega0 = s.value("omega0", p.omega0);
    p.alpha_e = s.value("alpha_e", p.alpha_e);
    p.gamma = s.value("gamma", p.gamma);
    p.beta = s.value("beta", p.beta);
    p.nu_exp = s.value("nu_exp", p.nu_exp);
    p.a_bw = s.value("a_bw", p.a_bw);
    p.s0 = s.value("s0", p.s0);
    if (s.contains("initial")) p.initial = build_base(s.at("initial"), "simulate.initial", 3);
    ds = tdde::simulate_bouc_wen(p, n_paths, s.value("dt_sim", 0.005), t_record, rng,
                                 &n_resampled);
  } else if (system == "ou") {
    tdde::OuParams p;
    p.theta = s.value("theta", 1.0);
    p.sigma = s.value("sigma", 1.0);
    p.m0 = s.value("m0", 0.0);
    p.v0 = s.value("v0", 1.0);
    ds = tdde::simulate_ou(p, n_paths, t_record, rng);
  } else {
    throw ConfigError("simulate.system: must be duffing, bouc_wen or ou");
  }

  tdde::save_path_dataset(ds, out_dir.string(), system);
  const std::string manifest = (out_dir / (system + "_manifest.json")).string();
  write_sidecar(manifest, cfg, "simulate");
  std::cout << "simulate: wrote " << manifest << " (" << n_paths << " paths, "
            << t_record.size() << " knots, " << n_resampled << " resampled)\n";
  return 0;
}

int cmd_train(const json& cfg, const fs::path& out_dir, std::uint64_t seed) {
  const tdde::TimeGrid grid = build_grid(cfg);
  tdde::TrainConfig tc = build_train_config(cfg, seed);
  const std::string mode =
      cfg.contains("train") ? cfg.at("train").value("mode", "contrastive") : "contrastive";

  tdde::DensityModel dm;
  dm.grid = grid;
  tdde::TrainReport report;

  const json& d = require(cfg, "config", "data");
  if (d.contains("paths_manifest")) {
    tdde::PathDataset paths = tdde::load_path_dataset(
        as_string(d.at("paths_manifest"), "data.paths_manifest"));
    dm.base = build_base(cfg.contains("base") ? cfg.at("base") : json(), "base",
                         paths.dim());
    dm.model = build_model(cfg, paths.dim(), seed);
    if (mode != "contrastive")
      throw ConfigError("train.mode: ml mode needs static data, not sample paths");
    report = tdde::train(dm.model, tdde::TrainSource::from_paths(paths), grid, tc);
  } else {
    LoadedData data = load_data(cfg, seed);
    dm.base = build_base(cfg.contains("base") ? cfg.at("base") : json(), "base",
                         data.features.cols);
    dm.model = build_model(cfg, data.features.cols, seed);
    if (mode == "contrastive") {
      report = tdde::train(dm.model,
                           tdde::TrainSource::from_static(data.features, dm.base), grid,
                           tc);
    } else if (mode == "ml") {
      const double lambda =
          cfg.contains("train") ? cfg.at("train").value("lambda", 1.0) : 1.0;
      report = tdde::ml_train(dm.model, data.features, dm.base, grid, lambda, tc);
    } else {
      throw ConfigError("train.mode: must be contrastive or ml");
    }
  }

  const std::string model_path = (out_dir / "model.json").string();
  tdde::save_density_model(dm, model_path);
  write_sidecar(model_path, cfg, "train");

  json jr;
  jr["epoch_loss"] = report.epoch_loss;
  jr["final_loss"] = report.final_loss;
  jr["wall_time_seconds"] = report.wall_time_seconds;
  const std::string report_path = (out_dir / "train_report.json").string();
  std::ofstream rf(report_path);
  rf << jr.dump(2) << "\n";
  rf.close();
  write_sidecar(report_path, cfg, "train");

  std::cout << "train: final loss " << report.final_loss << ", model at " << model_path
            << "\n";
  return 0;
}

int cmd_density_grid(const json& cfg, const fs::path& out_dir,
                     const std::string& model_path) {
  tdde::DensityModel dm = tdde::load_density_model(model_path);
  const json& g = require(cfg, "config", "density_grid");
  const double t = as_number(require(g, "density_grid", "t"), "density_grid.t");
  auto lower = as_vector(require(g, "density_grid", "lower"), "density_grid.lower");
  auto upper = as_vector(require(g, "density_grid", "upper"), "density_grid.upper");
  const json& js = require(g, "density_grid", "shape");
  std::vector<std::size_t> shape;
  for (const auto& v : js) shape.push_back(as_count(v, "density_grid.shape[]"));
  if (lower.size() != dm.dim() || upper.size() != dm.dim() || shape.size() != dm.dim())
    throw ConfigError("density_grid: lower/upper/shape must match the model dimension");

  std::size_t total = 1;
  for (std::size_t s : shape) {
    if (s < 1) throw ConfigError("density_grid.shape[]: must be >= 1");
    total *= s;
  }

  tdde::Matrix points(total, dm.dim());
  std::vector<std::size_t> idx(dm.dim(), 0);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < dm.dim(); ++c) {
      const double frac = shape[c] == 1
                              ? 0.5
                              : static_cast<double>(idx[c]) /
                                    static_cast<double>(shape[c] - 1);
      points.at(r, c) = lower[c] + (upper[c] - lower[c]) * frac;
    }
    for (std::size_t c = dm.dim(); c-- > 0;) {
      if (++idx[c] < shape[c]) break;
      idx[c] = 0;
    }
  }

  const std::vector<double> logd = tdde::log_density_at_batch(dm, points, t);
  tdde::Matrix out(total, dm.dim() + 2);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < dm.dim(); ++c) out.at(r, c) = points.at(r, c);
    out.at(r, dm.dim()) = t;
    out.at(r, dm.dim() + 1) = logd[r];
  }
  std::vector<std::string> header;
  for (std::size_t c = 0; c < dm.dim(); ++c) header.push_back("x" + std::to_string(c + 1));
  header.push_back("t");
  header.push_back("log_density");

  const std::string path = (out_dir / "density_grid.csv").string();
  tdde::save_matrix_csv(out, path, header);
  write_sidecar(path, cfg, "density-grid");
  std::cout << "density-grid: wrote " << path << " (" << total << " points)\n";
  return 0;
}

int cmd_sample(const json& cfg, const fs::path& out_dir, const std::string& model_path,
               std::uint64_t seed) {
  tdde::DensityModel dm = tdde::load_density_model(model_path);
  const json& s = require(cfg, "config", "sample");
  const std::string sampler = s.value("sampler", "ula");
  const std::size_t n_chains = as_count(require(s, "sample", "n_chains"), "sample.n_chains");
  const double step = as_number(require(s, "sample", "step"), "sample.step");

  tdde::Rng rng(seed, /*stream=*/0x5a17ULL);
  tdde::SeedStrategy strategy = tdde::SeedStrategy::fixed(std::vector<double>(dm.dim(), 0.0));
  tdde::Matrix seed_data;  // keeps DataInit's dataset alive
  if (s.contains("seeds")) {
    const json& sd = s.at("seeds");
    const std::string kind = as_string(require(sd, "sample.seeds", "kind"),
                                       "sample.seeds.kind");
    if (kind == "uniform_box") {
      strategy = tdde::SeedStrategy::uniform_box(
          as_vector(require(sd, "sample.seeds", "lower"), "sample.seeds.lower"),
          as_vector(require(sd, "sample.seeds", "upper"), "sample.seeds.upper"));
    } else if (kind == "data") {
      if (sd.contains("csv"))
        seed_data = tdde::load_csv(as_string(sd.at("csv"), "sample.seeds.csv"));
      else
        seed_data = load_data(cfg, seed).features;
      strategy = tdde::SeedStrategy::data_init(seed_data, sd.value("noise_std", 0.01));
    } else if (kind == "fixed") {
      strategy = tdde::SeedStrategy::fixed(
          as_vector(require(sd, "sample.seeds", "point"), "sample.seeds.point"));
    } else {
      throw ConfigError("sample.seeds.kind: must be uniform_box, data or fixed");
    }
  }
  tdde::Matrix seeds = tdde::seed_chains(strategy, n_chains, rng);

  const double t_eval = dm.grid.t_max();
  auto score_fn = [&](const tdde::Matrix& x) { return tdde::score_batch(dm, x, t_eval); };
  auto logp_fn = [&](const tdde::Matrix& x) {
    return tdde::log_density_at_batch(dm, x, t_eval);
  };

  tdde::ChainOutput out;
  if (sampler == "ula") {
    out = tdde::ula(score_fn, seeds, step,
                    as_count(require(s, "sample", "n_steps"), "sample.n_steps"), rng,
                    s.value("thin", std::size_t{0}));
  } else if (sampler == "hmc") {
    out = tdde::hmc(logp_fn, score_fn, seeds, step, s.value("leapfrog", std::size_t{100}),
                    s.value("n_samples", std::size_t{1}),
                    s.value("burn_in", std::size_t{500}), rng,
                    s.value("thin", std::size_t{1}));
  } else {
    throw ConfigError("sample.sampler: must be ula or hmc");
  }

  std::vector<std::string> header;
  for (std::size_t c = 0; c < dm.dim(); ++c) header.push_back("x" + std::to_string(c + 1));
  const std::string samples_path = (out_dir / "samples.csv").string();
  tdde::save_matrix_csv(out.samples, samples_path, header);
  write_sidecar(samples_path, cfg, "sample");
  if (out.trajectory.rows > 0) {
    const std::string traj_path = (out_dir / "trajectory.csv").string();
    tdde::save_matrix_csv(out.trajectory, traj_path, header);
    write_sidecar(traj_path, cfg, "sample");
  }

  json stats;
  stats["sampler"] = sampler;
  stats["acceptance_rate"] = out.acceptance_rate;
  stats["n_flagged"] = out.n_flagged;
  stats["n_chains"] = n_chains;
  const std::string stats_path = (out_dir / "sampler_stats.json").string();
  std::ofstream sf(stats_path);
  sf << stats.dump(2) << "\n";
  sf.close();
  write_sidecar(stats_path, cfg, "sample");

  std::cout << "sample: wrote " << samples_path << " (acceptance "
            << out.acceptance_rate << ", flagged " << out.n_flagged << ")\n";
  return 0;
}

int cmd_eval(const json& cfg, const fs::path& out_dir) {
  const json& e = require(cfg, "config", "eval");
  std::vector<std::string> metrics;
  for (const auto& m : require(e, "eval", "metrics"))
    metrics.push_back(as_string(m, "eval.metrics[]"));

  json out;
  for (const std::string& metric : metrics) {
    if (metric == "ot") {
      tdde::Matrix a = tdde::load_csv(as_string(require(e, "eval", "a_csv"), "eval.a_csv"));
      tdde::Matrix b = tdde::load_csv(as_string(require(e, "eval", "b_csv"), "eval.b_csv"));
      tdde::SinkhornResult r =
          tdde::sinkhorn_ot(a, b, e.value("epsilon", 0.01),
                            e.value("max_iter", std::size_t{5000}), e.value("tol", 1e-5),
                            e.value("max_points", std::size_t{2000}));
      out["ot"] = {{"value", r.cost},
                   {"converged", r.converged},
                   {"iterations", r.iterations},
                   {"epsilon", e.value("epsilon", 0.01)},
                   {"points_used", {r.used_a, r.used_b}}};
    } else if (metric == "ks") {
      tdde::Matrix a = tdde::load_csv(as_string(require(e, "eval", "a_csv"), "eval.a_csv"));
      tdde::Matrix b = tdde::load_csv(as_string(require(e, "eval", "b_csv"), "eval.b_csv"));
      const std::size_t col = e.value("column", std::size_t{0});
      if (col >= a.cols || col >= b.cols)
        throw ConfigError("eval.column: out of range");
      std::vector<double> va(a.rows), vb(b.rows);
      for (std::size_t i = 0; i < a.rows; ++i) va[i] = a.at(i, col);
      for (std::size_t i = 0; i < b.rows; ++i) vb[i] = b.at(i, col);
      tdde::EcdfDistance d = tdde::ecdf_distance(va, vb);
      out["ks"] = {{"value", d.ks}, {"column", col}};
      tdde::Matrix ea(d.ecdf_a.size(), 2), eb(d.ecdf_b.size(), 2);
      for (std::size_t i = 0; i < d.ecdf_a.size(); ++i) {
        ea.at(i, 0) = d.ecdf_a[i].first;
        ea.at(i, 1) = d.ecdf_a[i].second;
      }
      for (std::size_t i = 0; i < d.ecdf_b.size(); ++i) {
        eb.at(i, 0) = d.ecdf_b[i].first;
        eb.at(i, 1) = d.ecdf_b[i].second;
      }
      tdde::save_matrix_csv(ea, (out_dir / "ecdf_a.csv").string(), {"value", "cdf"});
      tdde::save_matrix_csv(eb, (out_dir / "ecdf_b.csv").string(), {"value", "cdf"});
    } else if (metric == "l2") {
      tdde::Matrix p = tdde::load_csv(as_string(require(e, "eval", "p_csv"), "eval.p_csv"));
      tdde::Matrix q = tdde::load_csv(as_string(require(e, "eval", "q_csv"), "eval.q_csv"));
      // log-density column is the last one in density-grid output
      std::vector<double> pv(p.rows), qv(q.rows);
      for (std::size_t i = 0; i < p.rows; ++i) pv[i] = p.at(i, p.cols - 1);
      for (std::size_t i = 0; i < q.rows; ++i) qv[i] = q.at(i, q.cols - 1);
      const double cell =
          as_number(require(e, "eval", "cell_volume"), "eval.cell_volume");
      out["l2"] = {{"value", tdde::grid_l2(pv, qv, cell)}, {"cell_volume", cell}};
    } else if (metric == "auc") {
      tdde::LabeledData ld = tdde::load_labeled_csv(
          as_string(require(e, "eval", "scores_csv"), "eval.scores_csv"),
          e.value("label_column", "label"));
      std::vector<double> scores(ld.features.rows);
      for (std::size_t i = 0; i < scores.size(); ++i)
        scores[i] = ld.features.at(i, ld.features.cols - 1);
      tdde::RocCurve roc = tdde::roc_auc(scores, ld.labels);
      out["auc"] = {{"value", roc.auc}};
    } else {
      throw ConfigError("eval.metrics[]: unknown metric " + metric);
    }
  }

  const std::string path = (out_dir / "metrics.json").string();
  std::ofstream f(path);
  f << out.dump(2) << "\n";
  f.close();
  write_sidecar(path, cfg, "eval");
  std::cout << "eval: wrote " << path << "\n";
  return 0;
}

int cmd_rare_score(const json& cfg, const fs::path& out_dir,
                   const std::string& model_path) {
  tdde::DensityModel dm = tdde::load_density_model(model_path);
  const json& r = require(cfg, "config", "rare_score");
  tdde::LabeledData ld = tdde::load_labeled_csv(
      as_string(require(r, "rare_score", "labeled_csv"), "rare_score.labeled_csv"),
      r.value("label_column", "label"), r.value("normalize_rows", false));
  if (ld.features.cols != dm.dim())
    throw ConfigError("rare_score.labeled_csv: feature width " +
                      std::to_string(ld.features.cols) + " does not match model dim " +
                      std::to_string(dm.dim()));

  // rarity score m(x) = -log rho_1(x)
  const std::vector<double> logd = tdde::log_density_data_batch(dm, ld.features);
  std::vector<double> scores(logd.size());
  for (std::size_t i = 0; i < logd.size(); ++i) scores[i] = -logd[i];
  tdde::RocCurve roc = tdde::roc_auc(scores, ld.labels);

  // ranked scores, most rare first
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  tdde::Matrix ranked(scores.size(), 3);
  for (std::size_t i = 0; i < order.size(); ++i) {
    ranked.at(i, 0) = static_cast<double>(order[i]);
    ranked.at(i, 1) = scores[order[i]];
    ranked.at(i, 2) = static_cast<double>(ld.labels[order[i]]);
  }
  const std::string scores_path = (out_dir / "rarity_scores.csv").string();
  tdde::save_matrix_csv(ranked, scores_path, {"row", "score", "label"});
  write_sidecar(scores_path, cfg, "rare-score");

  tdde::Matrix roc_m(roc.points.size(), 2);
  for (std::size_t i = 0; i < roc.points.size(); ++i) {
    roc_m.at(i, 0) = roc.points[i].first;
    roc_m.at(i, 1) = roc.points[i].second;
  }
  const std::string roc_path = (out_dir / "roc.csv").string();
  tdde::save_matrix_csv(roc_m, roc_path, {"fpr", "tpr"});
  write_sidecar(roc_path, cfg, "rare-score");

  json jm;
  jm["auc"] = roc.auc;
  jm["n_rows"] = scores.size();
  const std::string metrics_path = (out_dir / "rare_metrics.json").string();
  std::ofstream f(metrics_path);
  f << jm.dump(2) << "\n";
  f.close();
  write_sidecar(metrics_path, cfg, "rare-score");

  std::cout << "rare-score: AUC " << roc.auc << ", wrote " << scores_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-dependent density estimation pipeline"};
  app.require_subcommand(1);

  std::string config_path, out_dir, model_path;
  std::uint64_t seed_override = 0;
  bool seed_given = false;
  int threads = 0;

  auto add_common = [&](CLI::App* sub, bool needs_model) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed_override, "seed override")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--threads", threads, "worker thread cap");
    if (needs_model)
      sub->add_option("--model", model_path, "trained model file")->required();
  };

  add_common(app.add_subcommand("simulate", "generate sample paths"), false);
  add_common(app.add_subcommand("train", "train the time-dependent classifier"), false);
  add_common(app.add_subcommand("density-grid", "evaluate log-density on a grid"), true);
  add_common(app.add_subcommand("sample", "draw new samples via ULA or HMC"), true);
  add_common(app.add_subcommand("eval", "compute metrics between sample files"), false);
  add_common(app.add_subcommand("rare-score", "rank rows by rarity score"), true);

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  json cfg;
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file " + config_path);
    try {
      in >> cfg;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config parse: ") + e.what());
    }
    validate_schema(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    std::uint64_t seed = cfg.value("seed", std::uint64_t{0});
    if (seed_given) seed = seed_override;
    json resolved = cfg;
    resolved["seed"] = seed;
    const fs::path dir = ensure_output_dir(cfg, out_dir);
    resolved["output"] = dir.string();

    if (sub == "simulate") return cmd_simulate(resolved, dir, seed);
    if (sub == "train") return cmd_train(resolved, dir, seed);
    if (sub == "density-grid") return cmd_density_grid(resolved, dir, model_path);
    if (sub == "sample") return cmd_sample(resolved, dir, model_path, seed);
    if (sub == "eval") return cmd_eval(resolved, dir);
    if (sub == "rare-score") return cmd_rare_score(resolved, dir, model_path);
    std::cerr << "unknown subcommand\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
