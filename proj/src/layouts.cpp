#include "diffusefield/layouts.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Geometry>

#include "diffusefield/errors.hpp"

namespace diffusefield {
namespace {

// Weighted Lp norm, factored by the largest term so p -> inf stays finite.
double lp_level(const Vec3& x, const Vec3& a, double p, int dim) {
  double mx = 0.0;
  for (int i = 0; i < dim; ++i) mx = std::max(mx, std::abs(x(i)) / a(i));
  if (mx == 0.0) return 0.0;
  if (p == 2.0) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double r = x(i) / a(i) / mx;
      s += r * r;
    }
    return mx * std::sqrt(s);
  }
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += std::pow(std::abs(x(i)) / a(i) / mx, p);
  return mx * std::pow(s, 1.0 / p);
}

Vec3 unit_radius_axes(const LayoutSpec& spec) {
  if (spec.semi_axes.empty()) return Vec3::Ones();
  if (spec.semi_axes.size() == 1) return Vec3::Constant(spec.semi_axes[0]);
  Vec3 a = Vec3::Ones();
  for (int i = 0; i < spec.dim; ++i) a(i) = spec.semi_axes[i];
  return a;
}

}  // namespace

const char* to_string(Shape shape) {
  switch (shape) {
    case Shape::circle: return "circle";
    case Shape::sphere: return "sphere";
    case Shape::ellipsoid: return "ellipsoid";
    case Shape::superellipsoid: return "superellipsoid";
    case Shape::hemisphere: return "hemisphere";
  }
  return "circle";
}

Shape shape_from_string(const std::string& name) {
  if (name == "circle") return Shape::circle;
  if (name == "sphere") return Shape::sphere;
  if (name == "ellipsoid" || name == "ellipse") return Shape::ellipsoid;
  if (name == "superellipsoid" || name == "superellipse") return Shape::superellipsoid;
  if (name == "hemisphere") return Shape::hemisphere;
  throw ConfigError("unknown layout shape '" + name + "'");
}

double Hull::radius(const Vec3& u) const {
  const double lv = lp_level(u, semi_axes, p_norm, dim);
  if (!(lv > 0.0)) throw DomainError("radius_of_direction: zero direction");
  return u.head(dim).norm() / lv;
}

double Hull::level(const Vec3& x) const { return lp_level(x, semi_axes, p_norm, dim); }

double default_beta(int dim) { return dim == 2 ? 0.5 : 1.0; }

void LayoutSpec::validate() const {
  if (dim != 2 && dim != 3) throw DomainError("layout: dim must be 2 or 3");
  if (!(p_norm >= 2.0)) throw DomainError("layout: p must be >= 2");
  const std::size_t na = semi_axes.size();
  if (na != 0 && na != 1 && na != static_cast<std::size_t>(dim))
    throw DomainError("layout: need one semi-axis or one per dimension");
  for (double a : semi_axes)
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("layout: semi-axes must be positive");

  switch (shape) {
    case Shape::circle:
      if (dim != 2) throw DomainError("layout: circle requires dim 2");
      break;
    case Shape::sphere:
      if (dim != 3) throw DomainError("layout: sphere requires dim 3");
      break;
    case Shape::hemisphere:
      if (dim != 3) throw DomainError("layout: hemisphere requires dim 3");
      break;
    case Shape::ellipsoid:
      if (p_norm != 2.0) throw DomainError("layout: ellipsoid uses p = 2, use superellipsoid");
      break;
    case Shape::superellipsoid:
      break;
  }
  if (shape == Shape::circle || shape == Shape::sphere || shape == Shape::hemisphere) {
    for (double a : semi_axes)
      if (a != semi_axes.front()) throw DomainError("layout: round shapes need equal semi-axes");
    if (p_norm != 2.0) throw DomainError("layout: round shapes use p = 2");
  }

  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EquiAngle>) {
          if (dim != 2) throw DomainError("layout: equi_angle sampling is 2D only");
          if (s.count < 1) throw DomainError("layout: L must be positive");
        } else if constexpr (std::is_same_v<T, Fibonacci>) {
          if (dim != 3) throw DomainError("layout: fibonacci sampling is 3D only");
          if (s.count < 1) throw DomainError("layout: L must be positive");
        } else if constexpr (std::is_same_v<T, BuiltinTDesign>) {
          if (dim != 3) throw DomainError("layout: built-in t-designs are 3D only");
          if (s.t != 3 && s.t != 5) throw DomainError("layout: built-in t-designs are t=3 and t=5");
        } else {
          if (s.path.empty()) throw ConfigError("layout: node file path is empty");
        }
      },
      sampling);
}

Hull LayoutSpec::hull() const {
  Hull h;
  h.shape = shape;
  h.dim = dim;
  h.semi_axes = unit_radius_axes(*this);
  h.p_norm = p_norm;
  return h;
}

void SourceSet::validate() const {
  if (directions.empty()) throw ConfigError("source set is empty");
  if (radii.size() != directions.size() || sigma_sq.size() != directions.size())
    throw ConfigError("source set: directions, radii and sigma_sq differ in length");
  if (dim != 2 && dim != 3) throw DomainError("source set: dim must be 2 or 3");
  if (!std::isfinite(beta)) throw DomainError("source set: beta must be finite");
  for (std::size_t i = 0; i < directions.size(); ++i) {
    if (std::abs(directions[i].norm() - 1.0) > 1e-9)
      throw DomainError("source set: direction " + std::to_string(i) + " is not unit");
    if (dim == 2 && directions[i].z() != 0.0)
      throw DomainError("source set: 2D direction with z component");
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i]))
      throw DomainError("source set: radius must be positive");
    if (!(sigma_sq[i] >= 0.0) || !std::isfinite(sigma_sq[i]))
      throw DomainError("source set: sigma_sq must be nonnegative");
  }
}

double radius_of_direction(const LayoutSpec& spec, const Vec3& u) {
  spec.validate();
  return spec.hull().radius(u);
}

std::vector<Vec3> octahedron_nodes() {
  return {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0),
          Vec3(0, -1, 0), Vec3(0, 0, 1), Vec3(0, 0, -1)};
}

std::vector<Vec3> icosahedron_nodes() {
  const double g = std::numbers::phi;
  std::vector<Vec3> v;
  for (double s1 : {-1.0, 1.0}) {
    for (double s2 : {-1.0, 1.0}) {
      v.emplace_back(0.0, s1, s2 * g);
      v.emplace_back(s1, s2 * g, 0.0);
      v.emplace_back(s2 * g, 0.0, s1);
    }
  }
  for (auto& u : v) u.normalize();
  return v;
}

std::vector<Vec3> fibonacci_nodes(int count, std::optional<std::uint64_t> seed) {
  if (count < 1) throw DomainError("fibonacci_nodes: count must be positive");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  if (seed) {
    std::mt19937_64 rng(*seed);
    std::normal_distribution<double> nd;
    Eigen::Quaterniond q(nd(rng), nd(rng), nd(rng), nd(rng));
    q.normalize();
    rot = q.toRotationMatrix();
  }
  std::vector<Vec3> v(count);
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    v[i] = rot * Vec3(r * std::cos(phi), r * std::sin(phi), z);
    v[i].normalize();
  }
  return v;
}

std::string resolve_data_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  if (fs::path(path).is_relative()) {
    if (const char* env = std::getenv("DIFFUSEFIELD_DATA")) {
      std::stringstream dirs(env);
      std::string dir;
      while (std::getline(dirs, dir, ':')) {
        if (dir.empty()) continue;
        const fs::path cand = fs::path(dir) / path;
        if (fs::exists(cand)) return cand.string();
      }
    }
  }
  throw ConfigError("node file not found: " + path);
}

std::vector<Vec3> read_node_file(const std::string& path, int dim, bool allow_unnormalized) {
  if (dim != 2 && dim != 3) throw DomainError("read_node_file: dim must be 2 or 3");
  std::ifstream in(resolve_data_path(path));
  if (!in) throw ConfigError("cannot open node file: " + path);

  std::vector<Vec3> nodes;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::vector<double> vals;
    std::string tok;
    while (row >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
        throw ParseError("node file " + path + ": bad number '" + tok + "'", lineno);
      vals.push_back(v);
    }
    if (vals.empty()) continue;
    if (static_cast<int>(vals.size()) != dim)
      throw ParseError("node file " + path + ": expected " + std::to_string(dim) + " columns", lineno);
    Vec3 u = Vec3::Zero();
    for (int i = 0; i < dim; ++i) u(i) = vals[i];
    const double n = u.norm();
    if (!(n > 0.0)) throw ParseError("node file " + path + ": zero vector", lineno);
    if (!allow_unnormalized && std::abs(n - 1.0) > 1e-6)
      throw ParseError("node file " + path + ": row is not unit norm", lineno);
    nodes.push_back(u / n);
  }
  if (nodes.empty()) throw ParseError("node file " + path + ": no nodes", lineno);
  return nodes;
}

SourceSet sample_layout(const LayoutSpec& spec) {
  spec.validate();
  std::vector<Vec3> dirs = std::visit(
      [&](const auto& s) -> std::vector<Vec3> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EquiAngle>) {
          std::vector<Vec3> v(s.count);
          for (int l = 0; l < s.count; ++l) {
            const double phi = 2.0 * std::numbers::pi * l / s.count;
            v[l] = Vec3(std::cos(phi), std::sin(phi), 0.0);
          }
          return v;
        } else if constexpr (std::is_same_v<T, Fibonacci>) {
          return fibonacci_nodes(s.count, s.seed);
        } else if constexpr (std::is_same_v<T, BuiltinTDesign>) {
          return s.t == 3 ? octahedron_nodes() : icosahedron_nodes();
        } else {
          return read_node_file(s.path, spec.dim, s.allow_unnormalized);
        }
      },
      spec.sampling);

  if (spec.shape == Shape::hemisphere) {
    std::erase_if(dirs, [](const Vec3& u) { return u.z() < 0.0; });
    if (dirs.empty()) throw DomainError("layout: hemisphere filter left no nodes");
  }

  SourceSet s;
  s.dim = spec.dim;
  s.beta = default_beta(spec.dim);
  s.hull = spec.hull();
  s.directions = std::move(dirs);
  s.radii.reserve(s.directions.size());
  for (const auto& u : s.directions) s.radii.push_back(s.hull->radius(u));
  s.sigma_sq.assign(s.directions.size(), 1.0);
  return s;
}

SourceSet apply_gain_law(SourceSet s, const GainLaw& law) {
  const int D = s.dim;
  auto power_law = [&](double exponent) {
    for (std::size_t i = 0; i < s.size(); ++i) s.sigma_sq[i] = std::pow(s.radii[i], exponent);
  };
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, GainUnity>) {
          s.sigma_sq.assign(s.size(), 1.0);
        } else if constexpr (std::is_same_v<T, GainIsotropy>) {
          power_law(D - 1.0);
        } else if constexpr (std::is_same_v<T, GainDiffuseness>) {
          power_law(static_cast<double>(D));
        } else if constexpr (std::is_same_v<T, GainCustom>) {
          power_law(D - 2.0 + g.mu);
        } else {
          if (g.sigma_sq.size() != s.size())
            throw DomainError("apply_gain_law: explicit vector has " + std::to_string(g.sigma_sq.size()) +
                              " entries for " + std::to_string(s.size()) + " sources");
          for (double v : g.sigma_sq)
            if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("apply_gain_law: negative entry");
          s.sigma_sq = g.sigma_sq;
        }
      },
      law);
  return s;
}

void to_json(nlohmann::json& j, const LayoutSpec& spec) {
  j = nlohmann::json::object();
  j["shape"] = to_string(spec.shape);
  j["a"] = spec.semi_axes;
  j["p"] = spec.p_norm;
  j["dim"] = spec.dim;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EquiAngle>) {
          j["sampling"] = "equi_angle";
          j["L"] = s.count;
        } else if constexpr (std::is_same_v<T, Fibonacci>) {
          j["sampling"] = "fibonacci";
          j["L"] = s.count;
          if (s.seed) j["seed"] = *s.seed;
        } else if constexpr (std::is_same_v<T, BuiltinTDesign>) {
          j["sampling"] = "builtin_tdesign";
          j["t"] = s.t;
        } else {
          j["sampling"] = "node_file";
          j["path"] = s.path;
          if (s.allow_unnormalized) j["allow_unnormalized"] = true;
        }
      },
      spec.sampling);
}

void from_json(const nlohmann::json& j, LayoutSpec& spec) {
  try {
    spec = LayoutSpec{};
    spec.shape = shape_from_string(j.at("shape").get<std::string>());
    if (j.contains("a")) {
      if (j["a"].is_array())
        spec.semi_axes = j["a"].get<std::vector<double>>();
      else
        spec.semi_axes = {j["a"].get<double>()};
    }
    spec.p_norm = j.value("p", 2.0);
    spec.dim = j.value("dim", spec.shape == Shape::circle ? 2 : 3);
    const std::string sampling = j.value("sampling", spec.dim == 2 ? "equi_angle" : "fibonacci");
    if (sampling == "equi_angle") {
      spec.sampling = EquiAngle{j.value("L", 100)};
    } else if (sampling == "fibonacci") {
      Fibonacci f{j.value("L", 2500), std::nullopt};
      if (j.contains("seed") && !j["seed"].is_null()) f.seed = j["seed"].get<std::uint64_t>();
      spec.sampling = f;
    } else if (sampling == "builtin_tdesign") {
      spec.sampling = BuiltinTDesign{j.value("t", 5)};
    } else if (sampling == "node_file") {
      spec.sampling = NodeFile{j.at("path").get<std::string>(), j.value("allow_unnormalized", false)};
    } else {
      throw ConfigError("unknown sampling '" + sampling + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("layout json: ") + e.what());
  }
}

}  // namespace diffusefield
