#include "diffusefield/commands.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "diffusefield/analytic.hpp"
#include "diffusefield/errors.hpp"
#include "diffusefield/gains.hpp"
#include "diffusefield/modematch.hpp"
#include "diffusefield/wfs.hpp"

namespace diffusefield {
namespace {

namespace fs = std::filesystem;

std::string prepare_out(const RunConfig& c, const std::string& name) {
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + c.out_dir + ": " + ec.message());
  return (fs::path(c.out_dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path);
  return os;
}

std::string write_json(const RunConfig& c, const std::string& name, const nlohmann::json& j) {
  const std::string path = prepare_out(c, name);
  auto os = open_out(path);
  os << j.dump(2) << '\n';
  return path;
}

std::vector<double> read_gain_file(const std::string& path) {
  std::ifstream in(resolve_data_path(path));
  if (!in) throw ConfigError("cannot open gain file: " + path);
  std::vector<double> v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double x;
    if (!(row >> x)) {
      std::string rest;
      if (std::istringstream(line) >> rest) throw ParseError("gain file " + path + ": bad number", lineno);
      continue;
    }
    v.push_back(x);
  }
  return v;
}

LayoutSpec effective_layout(const RunConfig& c) {
  LayoutSpec spec = c.layout;
  if (c.seed)
    if (auto* f = std::get_if<Fibonacci>(&spec.sampling)) f->seed = c.seed;
  return spec;
}

SourceSet sampled(const RunConfig& c) {
  SourceSet s = sample_layout(effective_layout(c));
  if (c.beta) s.beta = *c.beta;
  return s;
}

ModeMatchSolution mode_match(const RunConfig& c, const SourceSet& s) {
  if (s.dim == 2) return solve_2d(problem_2d(s));
  return solve_3d(problem_3d(s, c.order));
}

nlohmann::json grid_json(const GridSpec& g) {
  return {{"origin", {g.origin.x(), g.origin.y(), g.origin.z()}},
          {"e1", {g.e1.x(), g.e1.y(), g.e1.z()}},
          {"e2", {g.e2.x(), g.e2.y(), g.e2.z()}},
          {"half_extent", g.half_extent},
          {"resolution", g.resolution}};
}

}  // namespace

SourceSet build_sources(const RunConfig& c) {
  SourceSet s = sampled(c);
  if (c.gain == "unity") return apply_gain_law(std::move(s), GainUnity{});
  if (c.gain == "isotropy") return apply_gain_law(std::move(s), GainIsotropy{});
  if (c.gain == "diffuseness") return apply_gain_law(std::move(s), GainDiffuseness{});
  if (c.gain == "custom") return apply_gain_law(std::move(s), GainCustom{c.gain_mu});
  if (c.gain == "file") return apply_gain_law(std::move(s), GainExplicit{read_gain_file(c.gain_file)});
  if (c.gain == "modematch") {
    const auto sol = mode_match(c, s);
    return apply_gain_law(std::move(s), GainExplicit{sol.sigma_sq});
  }
  throw ConfigError("unknown gain law '" + c.gain + "'");
}

std::vector<std::string> cmd_map(const RunConfig& c) {
  c.validate();
  const SourceSet s = build_sources(c);
  if (s.dim == 2 && (c.grid.plane != "xy" || c.grid.angle_deg != 0.0))
    throw ConfigError("2D layouts only support the xy plane");
  const FieldEngine engine(s);
  const GridSpec g = plane_grid(c.grid.plane, c.grid.angle_deg, c.grid.extent, c.grid.resolution);
  const FieldGrid grid = evaluate_grid(engine, g, c.threads);

  const std::string csv = prepare_out(c, "field.csv");
  {
    auto os = open_out(csv);
    write_grid_csv(os, grid);
  }
  std::size_t exterior = 0, degenerate = 0;
  for (auto m : grid.mask) {
    exterior += m == PointMask::exterior;
    degenerate += m == PointMask::degenerate;
  }
  nlohmann::json side;
  side["layout"] = effective_layout(c);
  side["gain"] = c.gain;
  side["beta"] = s.beta;
  side["sources"] = s.size();
  side["normalizer"] = engine.normalizer();
  side["grid"] = grid_json(g);
  side["exterior_points"] = exterior;
  side["degenerate_points"] = degenerate;
  side["config"] = c;
  return {csv, write_json(c, "field.json", side)};
}

std::vector<std::string> cmd_analytic_sweep(const RunConfig& c) {
  c.validate();
  const auto rows = analytic::analytic_sweep(c.sweep_dims, c.sweep_betas, c.sweep_xs);
  const std::string csv = prepare_out(c, "analytic.csv");
  {
    auto os = open_out(csv);
    analytic::write_sweep_csv(os, rows);
  }
  return {csv, write_json(c, "config.json", c)};
}

std::vector<std::string> cmd_isotropy(const RunConfig& c) {
  c.validate();
  const SourceSet s = build_sources(c);
  const IsotropyProfile p = directional_intensity(s);
  const std::string csv = prepare_out(c, "isotropy.csv");
  {
    auto os = open_out(csv);
    write_profile_csv(os, p, c.projection);
  }
  const Vec3& ref = p.directions[p.reference_index];
  nlohmann::json j;
  j["isotropy_error_db"] = isotropy_error(p);
  j["reference_index"] = p.reference_index;
  j["reference_direction"] = {ref.x(), ref.y(), ref.z()};
  j["config"] = c;
  return {csv, write_json(c, "isotropy.json", j)};
}

std::vector<std::string> cmd_modematch(const RunConfig& c) {
  c.validate();
  const SourceSet s = sampled(c);
  const ModeMatchSolution sol = mode_match(c, s);
  const std::string csv = prepare_out(c, "modematch.csv");
  {
    auto os = open_out(csv);
    write_solution_csv(os, s, sol);
  }
  nlohmann::json j = diagnostics_json(sol);
  j["config"] = c;
  return {csv, write_json(c, "modematch.json", j)};
}

std::vector<std::string> cmd_wfs_sweep(const RunConfig& c) {
  c.validate();
  wfs::WfsScene scene;
  scene.count = c.wfs_count;
  const auto rows = wfs::wfs_sweep(scene, c.wfs_ms, c.wfs_xs, c.threads);
  const std::string csv = prepare_out(c, "wfs.csv");
  {
    auto os = open_out(csv);
    wfs::write_sweep_csv(os, rows);
  }
  return {csv, write_json(c, "config.json", c)};
}

}  // namespace diffusefield
