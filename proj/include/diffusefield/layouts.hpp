#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "diffusefield/specfun.hpp"

namespace diffusefield {

enum class Shape { circle, sphere, ellipsoid, superellipsoid, hemisphere };

const char* to_string(Shape shape);
Shape shape_from_string(const std::string& name);

struct EquiAngle {
  int count = 100;
};
struct NodeFile {
  std::string path;
  // Off by default: rows must already be unit norm within 1e-6.
  bool allow_unnormalized = false;
};
struct Fibonacci {
  int count = 2500;
  std::optional<std::uint64_t> seed;  // random global rotation
};
struct BuiltinTDesign {
  int t = 5;
};
using Sampling = std::variant<EquiAngle, NodeFile, Fibonacci, BuiltinTDesign>;

// Convex boundary used for radii and interior tests.
struct Hull {
  Shape shape = Shape::circle;
  int dim = 2;
  Vec3 semi_axes = Vec3::Ones();
  double p_norm = 2.0;

  double radius(const Vec3& u) const;
  // Weighted Lp norm of x; < 1 strictly inside.
  double level(const Vec3& x) const;
};

struct LayoutSpec {
  Shape shape = Shape::circle;
  std::vector<double> semi_axes;  // empty means unit radius
  double p_norm = 2.0;
  int dim = 2;
  Sampling sampling = EquiAngle{};

  void validate() const;
  Hull hull() const;
};

struct SourceSet {
  std::vector<Vec3> directions;
  std::vector<double> radii;
  std::vector<double> sigma_sq;
  double beta = 0.5;
  int dim = 2;
  std::optional<Hull> hull;

  std::size_t size() const { return directions.size(); }
  Vec3 position(std::size_t i) const { return radii[i] * directions[i]; }
  void validate() const;
};

double default_beta(int dim);

double radius_of_direction(const LayoutSpec& spec, const Vec3& u);

SourceSet sample_layout(const LayoutSpec& spec);

std::vector<Vec3> octahedron_nodes();
std::vector<Vec3> icosahedron_nodes();
std::vector<Vec3> fibonacci_nodes(int count, std::optional<std::uint64_t> seed = std::nullopt);

// Whitespace-separated Cartesian rows, '#' starts a comment. Relative
// paths fall back to the directories in DIFFUSEFIELD_DATA.
std::vector<Vec3> read_node_file(const std::string& path, int dim, bool allow_unnormalized = false);
std::string resolve_data_path(const std::string& path);

struct GainUnity {};
struct GainIsotropy {};
struct GainDiffuseness {};
struct GainCustom {
  double mu = 0.0;
};
struct GainExplicit {
  std::vector<double> sigma_sq;
};
using GainLaw = std::variant<GainUnity, GainIsotropy, GainDiffuseness, GainCustom, GainExplicit>;

SourceSet apply_gain_law(SourceSet s, const GainLaw& law);

void to_json(nlohmann::json& j, const LayoutSpec& spec);
void from_json(const nlohmann::json& j, LayoutSpec& spec);

}  // namespace diffusefield
