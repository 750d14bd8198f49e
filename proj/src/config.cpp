#include "diffusefield/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "diffusefield/errors.hpp"
#include "diffusefield/wfs.hpp"

namespace diffusefield {
namespace {

const std::vector<std::string> kCommands = {"map", "analytic-sweep", "isotropy", "modematch", "wfs-sweep", "validate"};
const std::vector<std::string> kGains = {"unity", "isotropy", "diffuseness", "custom", "modematch", "file"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::vector<double> arange(double lo, double hi, double step) {
  std::vector<double> v;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) v.push_back(lo + step * i);
  return v;
}

}  // namespace

LayoutSpec default_layout(Shape shape) {
  LayoutSpec s;
  s.shape = shape;
  if (shape == Shape::circle) {
    s.dim = 2;
    s.sampling = EquiAngle{100};
  } else {
    s.dim = 3;
    s.sampling = Fibonacci{shape == Shape::hemisphere ? 5000 : 2500, std::nullopt};
  }
  return s;
}

void RunConfig::fill_defaults() {
  if (sweep_betas.empty()) sweep_betas = arange(-1.25, 1.25, 0.25);
  if (sweep_xs.empty()) sweep_xs = arange(-0.995, 0.995, 0.005);
  if (wfs_ms.empty()) wfs_ms = wfs::log_spaced(1.0 / 16.0, 1024.0, 40);
  if (wfs_xs.empty()) {
    for (int i = 0; i < 100; ++i) wfs_xs.push_back(0.98 * i / 99.0);
  }
}

void RunConfig::validate() const {
  if (!contains(kCommands, command)) throw ConfigError("unknown command '" + command + "'");
  if (!contains(kGains, gain)) throw ConfigError("unknown gain law '" + gain + "'");
  if (gain == "file" && gain_file.empty()) throw ConfigError("gain 'file' needs a gain file path");
  if (gain == "file") resolve_data_path(gain_file);
  layout.validate();
  if (const auto* nf = std::get_if<NodeFile>(&layout.sampling)) resolve_data_path(nf->path);
  if (beta && !std::isfinite(*beta)) throw ConfigError("beta must be finite");
  if (order < 1) throw ConfigError("order must be at least 1");
  if (grid.resolution < 1) throw ConfigError("grid resolution must be positive");
  if (!(grid.extent > 0.0)) throw ConfigError("grid extent must be positive");
  if (out_dir.empty()) throw ConfigError("output directory is empty");
  for (int d : sweep_dims)
    if (d != 2 && d != 3) throw ConfigError("sweep dims must be 2 or 3");
  if (wfs_count < 1) throw ConfigError("wfs count must be positive");
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json::object();
  j["command"] = c.command;
  j["layout"] = c.layout;
  j["beta"] = c.beta ? nlohmann::json(*c.beta) : nlohmann::json(nullptr);
  j["gain"] = c.gain;
  j["gain_mu"] = c.gain_mu;
  j["gain_file"] = c.gain_file;
  j["order"] = c.order;
  j["grid"] = {{"plane", c.grid.plane},
               {"angle_deg", c.grid.angle_deg},
               {"extent", c.grid.extent},
               {"resolution", c.grid.resolution}};
  j["out_dir"] = c.out_dir;
  j["threads"] = c.threads;
  j["seed"] = c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr);
  j["projection"] = c.projection;
  j["sweep"] = {{"dims", c.sweep_dims}, {"betas", c.sweep_betas}, {"xs", c.sweep_xs}};
  j["wfs"] = {{"L", c.wfs_count}, {"ms", c.wfs_ms}, {"xs", c.wfs_xs}};
  j["only"] = c.only;
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  try {
    c = RunConfig{};
    c.command = j.value("command", c.command);
    if (j.contains("layout")) c.layout = j["layout"].get<LayoutSpec>();
    if (j.contains("beta") && !j["beta"].is_null()) c.beta = j["beta"].get<double>();
    c.gain = j.value("gain", c.gain);
    c.gain_mu = j.value("gain_mu", c.gain_mu);
    c.gain_file = j.value("gain_file", c.gain_file);
    c.order = j.value("order", c.order);
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      c.grid.plane = g.value("plane", c.grid.plane);
      c.grid.angle_deg = g.value("angle_deg", c.grid.angle_deg);
      c.grid.extent = g.value("extent", c.grid.extent);
      c.grid.resolution = g.value("resolution", c.grid.resolution);
    }
    c.out_dir = j.value("out_dir", c.out_dir);
    c.threads = j.value("threads", c.threads);
    if (j.contains("seed") && !j["seed"].is_null()) c.seed = j["seed"].get<std::uint64_t>();
    c.projection = j.value("projection", c.projection);
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      c.sweep_dims = s.value("dims", c.sweep_dims);
      c.sweep_betas = s.value("betas", c.sweep_betas);
      c.sweep_xs = s.value("xs", c.sweep_xs);
    }
    if (j.contains("wfs")) {
      const auto& w = j["wfs"];
      c.wfs_count = w.value("L", c.wfs_count);
      c.wfs_ms = w.value("ms", c.wfs_ms);
      c.wfs_xs = w.value("xs", c.wfs_xs);
    }
    c.only = j.value("only", c.only);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config json: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  return j.get<RunConfig>();
}

}  // namespace diffusefield
