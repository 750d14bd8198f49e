#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "diffusefield/commands.hpp"
#include "diffusefield/config.hpp"
#include "diffusefield/errors.hpp"
#include "diffusefield/wfs.hpp"

namespace df = diffusefield;

namespace {

struct Flags {
  std::string config;
  std::string layout;
  int dim = 0;
  int L = 0;
  int t = 0;
  std::string nodes;
  bool allow_unnormalized = false;
  double beta = 0.0;
  std::string gain;
  double mu = 0.0;
  std::string gain_file;
  std::vector<double> a;
  double p = 0.0;
  double extent = 0.0;
  int res = 0;
  std::string plane;
  std::string out;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  int order = 0;
  bool projection = false;
  // sweeps
  std::vector<int> dims;
  std::vector<double> betas;
  std::vector<double> xs;
  std::vector<double> ms;
  int m_count = 0;
  double m_min = 0.0, m_max = 0.0;
  int x_count = 0;
  double x_max = 0.0;
  // validate
  std::vector<std::string> only;
  double inject_beta = 0.0;
};

int fail(const df::Error& e) {
  nlohmann::json j = {{"error", {{"kind", df::to_string(e.kind())}, {"message", e.what()}}}};
  if (const auto* p = dynamic_cast<const df::ParseError*>(&e)) j["error"]["line"] = p->line();
  std::cerr << j.dump() << '\n';
  return df::is_config_kind(e.kind()) ? 1 : 2;
}

void add_layout_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON run configuration; flags override it");
  app->add_option("--layout", f.layout, "circle|sphere|ellipsoid|superellipsoid|hemisphere");
  app->add_option("--dim", f.dim, "Space dimension (2 or 3)");
  app->add_option("--L", f.L, "Source count (equi-angle in 2D, fibonacci in 3D)");
  app->add_option("--t", f.t, "Built-in t-design (3 octahedron, 5 icosahedron)");
  app->add_option("--nodes", f.nodes, "Node file (searched in DIFFUSEFIELD_DATA)");
  app->add_flag("--allow-unnormalized", f.allow_unnormalized, "Accept node rows that are not unit norm");
  app->add_option("--a", f.a, "Semi-axes, comma separated")->delimiter(',');
  app->add_option("--p", f.p, "Lp exponent of a superellipsoid");
  app->add_option("--beta", f.beta, "Decay exponent");
  app->add_option("--gain", f.gain, "unity|isotropy|diffuseness|custom|modematch|file");
  app->add_option("--mu", f.mu, "Exponent of the custom gain law R^(D-2+mu)");
  app->add_option("--gain-file", f.gain_file, "One sigma^2 per line");
  app->add_option("--order", f.order, "3D mode-matching order N");
  app->add_option("--seed", f.seed, "Random rotation of fibonacci nodes");
  app->add_option("--out", f.out, "Output directory");
  app->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
}

bool given(const CLI::App* app, const std::string& name) { return app->count(name) > 0; }

df::RunConfig make_config(const CLI::App* app, const Flags& f, const std::string& command) {
  df::RunConfig c = f.config.empty() ? df::RunConfig{} : df::load_config(f.config);
  c.command = command;

  const bool layout_given = given(app, "--layout");
  if (layout_given) c.layout = df::default_layout(df::shape_from_string(f.layout));
  if (given(app, "--dim")) c.layout.dim = f.dim;
  if (given(app, "--a")) {
    c.layout.semi_axes = f.a;
    if (!given(app, "--dim") && (c.layout.shape == df::Shape::ellipsoid || c.layout.shape == df::Shape::superellipsoid))
      c.layout.dim = static_cast<int>(f.a.size()) == 2 ? 2 : 3;
  }
  if (given(app, "--p")) c.layout.p_norm = f.p;
  if (layout_given && c.layout.dim == 2 && !std::holds_alternative<df::EquiAngle>(c.layout.sampling))
    c.layout.sampling = df::EquiAngle{100};
  if (given(app, "--L")) {
    if (c.layout.dim == 2)
      c.layout.sampling = df::EquiAngle{f.L};
    else
      c.layout.sampling = df::Fibonacci{f.L, std::nullopt};
  }
  if (given(app, "--t")) c.layout.sampling = df::BuiltinTDesign{f.t};
  if (given(app, "--nodes")) c.layout.sampling = df::NodeFile{f.nodes, f.allow_unnormalized};
  if (given(app, "--beta")) c.beta = f.beta;
  if (given(app, "--gain")) c.gain = f.gain;
  if (given(app, "--mu")) c.gain_mu = f.mu;
  if (given(app, "--gain-file")) {
    c.gain_file = f.gain_file;
    if (!given(app, "--gain")) c.gain = "file";
  }
  if (given(app, "--order")) c.order = f.order;
  if (given(app, "--seed")) c.seed = f.seed;
  if (given(app, "--out")) c.out_dir = f.out;
  if (given(app, "--threads")) c.threads = f.threads;
  if (app->get_option_no_throw("--extent") && given(app, "--extent")) c.grid.extent = f.extent;
  if (app->get_option_no_throw("--res") && given(app, "--res")) c.grid.resolution = f.res;
  if (app->get_option_no_throw("--plane") && given(app, "--plane")) {
    const auto comma = f.plane.find(',');
    c.grid.plane = f.plane.substr(0, comma);
    c.grid.angle_deg = 0.0;
    if (comma != std::string::npos) {
      try {
        c.grid.angle_deg = std::stod(f.plane.substr(comma + 1));
      } catch (const std::exception&) {
        throw df::ConfigError("--plane angle is not a number");
      }
    }
  }
  if (app->get_option_no_throw("--projection") && given(app, "--projection")) c.projection = f.projection;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffuse sound field synthesis: energy density, intensity and diffuseness"};
  app.require_subcommand(1);
  Flags f;

  auto* map = app.add_subcommand("map", "Field map on a plane cut (field.csv, field.json)");
  add_layout_flags(map, f);
  map->add_option("--extent", f.extent, "Half width of the grid");
  map->add_option("--res", f.res, "Grid points per axis");
  map->add_option("--plane", f.plane, "xy|xz|yz[,angle_deg] (rotated about the first axis)");

  auto* sweep = app.add_subcommand("analytic-sweep", "Closed-form shell metrics (analytic.csv)");
  sweep->add_option("--config", f.config, "JSON run configuration");
  sweep->add_option("--dims", f.dims, "Dimensions")->delimiter(',');
  sweep->add_option("--betas", f.betas, "Decay exponents")->delimiter(',');
  sweep->add_option("--xs", f.xs, "Displacements")->delimiter(',');
  sweep->add_option("--out", f.out, "Output directory");

  auto* iso = app.add_subcommand("isotropy", "Directional intensity at the origin (isotropy.csv)");
  add_layout_flags(iso, f);
  iso->add_flag("--projection", f.projection, "Append map projection columns");

  auto* mm = app.add_subcommand("modematch", "Mode-matched gains (modematch.csv, modematch.json)");
  add_layout_flags(mm, f);

  auto* wfs = app.add_subcommand("wfs-sweep", "2.5D WFS diffuseness over m and x (wfs.csv)");
  wfs->add_option("--config", f.config, "JSON run configuration");
  wfs->add_option("--L", f.L, "Virtual source count");
  wfs->add_option("--ms", f.ms, "Explicit m values")->delimiter(',');
  wfs->add_option("--m-count", f.m_count, "Number of log-spaced m values");
  wfs->add_option("--m-min", f.m_min, "Smallest m");
  wfs->add_option("--m-max", f.m_max, "Largest m");
  wfs->add_option("--x-count", f.x_count, "Number of x values in [0, x-max]");
  wfs->add_option("--x-max", f.x_max, "Largest x");
  wfs->add_option("--out", f.out, "Output directory");
  wfs->add_option("--threads", f.threads, "Worker threads");

  auto* val = app.add_subcommand("validate", "Run the oracle suite");
  val->add_option("--only", f.only, "Groups to run")->delimiter(',');
  val->add_option("--inject-beta", f.inject_beta, "Negative control")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::vector<std::string> written;
    if (map->parsed()) {
      df::RunConfig c = make_config(map, f, "map");
      written = df::cmd_map(c);
    } else if (iso->parsed()) {
      written = df::cmd_isotropy(make_config(iso, f, "isotropy"));
    } else if (mm->parsed()) {
      written = df::cmd_modematch(make_config(mm, f, "modematch"));
    } else if (sweep->parsed()) {
      df::RunConfig c = f.config.empty() ? df::RunConfig{} : df::load_config(f.config);
      c.command = "analytic-sweep";
      if (given(sweep, "--dims")) c.sweep_dims = f.dims;
      if (given(sweep, "--betas")) c.sweep_betas = f.betas;
      if (given(sweep, "--xs")) c.sweep_xs = f.xs;
      if (given(sweep, "--out")) c.out_dir = f.out;
      c.fill_defaults();
      written = df::cmd_analytic_sweep(c);
    } else if (wfs->parsed()) {
      df::RunConfig c = f.config.empty() ? df::RunConfig{} : df::load_config(f.config);
      c.command = "wfs-sweep";
      if (given(wfs, "--L")) c.wfs_count = f.L;
      if (given(wfs, "--ms")) c.wfs_ms = f.ms;
      if (given(wfs, "--m-count") || given(wfs, "--m-min") || given(wfs, "--m-max"))
        c.wfs_ms = df::wfs::log_spaced(given(wfs, "--m-min") ? f.m_min : 1.0 / 16.0,
                                       given(wfs, "--m-max") ? f.m_max : 1024.0,
                                       given(wfs, "--m-count") ? f.m_count : 40);
      if (given(wfs, "--x-count") || given(wfs, "--x-max")) {
        const int n = given(wfs, "--x-count") ? f.x_count : 100;
        const double hi = given(wfs, "--x-max") ? f.x_max : 0.98;
        if (n < 1) throw df::ConfigError("--x-count must be positive");
        c.wfs_xs.clear();
        for (int i = 0; i < n; ++i) c.wfs_xs.push_back(n == 1 ? 0.0 : hi * i / (n - 1));
      }
      if (given(wfs, "--out")) c.out_dir = f.out;
      if (given(wfs, "--threads")) c.threads = f.threads;
      c.fill_defaults();
      written = df::cmd_wfs_sweep(c);
    } else if (val->parsed()) {
      df::ValidateOptions opts;
      opts.only = f.only;
      if (given(val, "--inject-beta")) opts.inject_beta = f.inject_beta;
      const bool ok = df::print_validation(std::cout, df::run_validation(opts));
      std::cout << (ok ? "all checks passed" : "some checks FAILED") << '\n';
      return ok ? 0 : 2;
    }
    for (const auto& p : written) std::cout << "wrote " << p << '\n';
    return 0;
  } catch (const df::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump() << '\n';
    return 2;
  }
}
