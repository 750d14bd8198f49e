#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "diffusefield/layouts.hpp"

namespace diffusefield {

struct GridParams {
  std::string plane = "xy";
  double angle_deg = 0.0;
  double extent = 0.98;
  int resolution = 201;
};

struct RunConfig {
  std::string command = "map";
  LayoutSpec layout;
  std::optional<double> beta;        // defaults per dimension
  std::string gain = "unity";        // unity|isotropy|diffuseness|custom|modematch|file
  double gain_mu = 0.0;              // custom law exponent
  std::string gain_file;             // one sigma² per line
  int order = 17;                    // 3D mode-matching order
  GridParams grid;
  std::string out_dir = "out";
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;  // random rotation of fibonacci nodes
  bool projection = false;            // isotropy: append map coordinates

  std::vector<int> sweep_dims{2, 3};
  std::vector<double> sweep_betas;
  std::vector<double> sweep_xs;

  int wfs_count = 360;
  std::vector<double> wfs_ms;
  std::vector<double> wfs_xs;

  std::vector<std::string> only;      // validate groups

  // Fills empty sweep axes with the desk-scale defaults.
  void fill_defaults();
  void validate() const;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig load_config(const std::string& path);

// Default layout for a shape: circle L=100, 3D fibonacci 2500, hemisphere 5000.
LayoutSpec default_layout(Shape shape);

}  // namespace diffusefield
