#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "diffusefield/analytic.hpp"
#include "diffusefield/commands.hpp"
#include "diffusefield/errors.hpp"
#include "diffusefield/modematch.hpp"
#include "diffusefield/wfs.hpp"

namespace diffusefield {
namespace {

using specfun::hyp2f1;

struct Suite {
  const ValidateOptions& opts;
  std::vector<CheckResult> out;

  bool wants(const std::string& group) const {
    if (opts.only.empty()) return true;
    for (const auto& g : opts.only)
      if (g == group) return true;
    return false;
  }
  void add(const std::string& group, const std::string& name, double measured, double tol) {
    out.push_back({group, name, measured, tol, std::isfinite(measured) && measured <= tol});
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Trapezoid of (2/pi) ∫_0^{pi/2} (1 - z sin²θ)^(-1/2) dθ, the t = sin²θ form of
// the Euler integral for F(1/2, 1/2; 1; z).
double half_half_one_trapezoid(double z) {
  double prev = 0.0;
  for (int n = 8; n <= (1 << 20); n *= 2) {
    const double h = 0.5 * std::numbers::pi / n;
    double s = 0.5 * (1.0 + 1.0 / std::sqrt(1.0 - z));
    for (int k = 1; k < n; ++k) {
      const double st = std::sin(k * h);
      s += 1.0 / std::sqrt(1.0 - z * st * st);
    }
    const double v = 2.0 / std::numbers::pi * s * h;
    if (n > 8 && std::abs(v - prev) < 1e-15) return v;
    prev = v;
  }
  return prev;
}

void hypergeom(Suite& s) {
  s.add("hypergeom", "F(1/2,1/2;1;1/2) vs trapezoid", rel(hyp2f1({0.5, 0.5, 1.0, 0.5}), half_half_one_trapezoid(0.5)),
        1e-8);
  s.add("hypergeom", "F(1,1;2;1/2) vs -ln(1-z)/z", rel(hyp2f1({1.0, 1.0, 2.0, 0.5}), -std::log(0.5) / 0.5), 1e-10);
  double worst = 0.0;
  for (int D : {2, 3})
    for (double beta = -1.25; beta <= 1.25 + 1e-12; beta += 0.25)
      for (double z : {0.05, 0.2, 0.35, 0.5}) {
        const double h = 0.5 * (D - 1.0);
        const specfun::HypergeomParams ps[] = {
            {beta, h, D - 1.0, z}, {beta + 0.5, h, D - 1.0, z}, {beta + 0.5, h + 1.0, double(D), z}};
        for (const auto& p : ps) worst = std::max(worst, rel(hyp2f1(p), specfun::hyp2f1_series(p)));
      }
  s.add("hypergeom", "quadrature vs series, z <= 0.5", worst, 1e-9);
}

void gegenbauer(Suite& s) {
  double worst = 0.0;
  for (double nu : {0.5, 1.0}) {
    const auto rule = specfun::gauss_jacobi(12, nu - 0.5, nu - 0.5);
    for (int n = 0; n <= 8; ++n)
      for (int m = 0; m <= 8; ++m) {
        if (n == m) continue;
        double v = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const auto c = specfun::gegenbauer_eval({nu, 8}, rule.nodes[i]);
          v += rule.weights[i] * c[n] * c[m];
        }
        worst = std::max(worst, std::abs(v));
      }
  }
  s.add("gegenbauer", "orthogonality n != m <= 8", worst, 1e-9);

  double excess = -1.0;
  const int N = 40;
  for (double beta : {0.5, 1.0})
    for (double x : {0.1, 0.3, 0.5})
      for (double z = -1.0; z <= 1.0 + 1e-12; z += 0.125) {
        const auto c = specfun::gegenbauer_eval({beta, N}, z);
        double sum = 0.0;
        for (int n = N; n >= 0; --n) sum = sum * x + c[n];
        const double exact = std::pow(1.0 - 2.0 * z * x + x * x, -beta);
        // |C_n(z)| <= C_n(1) = (2 beta)_n / n!, so the tail is at most the sum of
        // those coefficients times x^n; 2 beta = 1 gives back x^(N+1) / (1 - x).
        double tail = 0.0, coef = 1.0;
        for (int n = 1; n < 4000; ++n) {
          coef *= (2.0 * beta + n - 1.0) / n * x;
          if (n > N) tail += coef;
        }
        const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * exact;
        excess = std::max(excess, std::abs(sum - exact) - tail - rounding);
      }
  s.add("gegenbauer", "generating function within tail bound", excess, 0.0);
}

void harmonics(Suite& s) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 u = Vec3(nd(rng), nd(rng), nd(rng)).normalized();
    const Vec3 v = Vec3(nd(rng), nd(rng), nd(rng)).normalized();
    const auto yu = specfun::real_sph_harm_all(8, u);
    const auto yv = specfun::real_sph_harm_all(8, v);
    const auto p = specfun::legendre(8, u.dot(v));
    for (int n = 0; n <= 8; ++n) {
      double sum = 0.0;
      for (int m = -n; m <= n; ++m) sum += yu[specfun::acn_index(n, m)] * yv[specfun::acn_index(n, m)];
      worst = std::max(worst, std::abs(sum - (2.0 * n + 1.0) / (4.0 * std::numbers::pi) * p[n]));
    }
  }
  s.add("harmonics", "addition theorem n <= 8", worst, 1e-12);

  const auto nodes = icosahedron_nodes();
  double norm = 0.0, cross = 0.0;
  for (const auto& u : nodes) {
    const double y21 = specfun::real_sph_harm(2, 1, u);
    norm += y21 * y21;
    cross += y21 * specfun::real_sph_harm(3, 1, u);
  }
  const double w = 4.0 * std::numbers::pi / nodes.size();
  s.add("harmonics", "icosahedron |Y21 Y21 - 1|", std::abs(norm * w - 1.0), 1e-12);
  s.add("harmonics", "icosahedron |Y21 Y31|", std::abs(cross * w), 1e-10);
}

struct ShellNumeric {
  double w;
  double Ix;
};

ShellNumeric shell_by_quadrature(int D, double beta, double x) {
  using boost::math::quadrature::gauss_kronrod;
  auto jac = [D](double th) { return D == 3 ? std::sin(th) : 1.0; };
  auto r2 = [x](double th) { return 1.0 + x * x - 2.0 * x * std::cos(th); };
  const double pi = std::numbers::pi;
  const double norm = D == 3 ? 2.0 : pi;
  const double w = gauss_kronrod<double, 61>::integrate(
      [&](double th) { return jac(th) * std::pow(r2(th), -beta); }, 0.0, pi, 20, 1e-14);
  const double I = gauss_kronrod<double, 61>::integrate(
      [&](double th) { return jac(th) * (x - std::cos(th)) * std::pow(r2(th), -beta - 0.5); }, 0.0, pi, 20, 1e-14);
  return {w / norm, I / norm};
}

void analytic_checks(Suite& s) {
  double worst = 0.0;
  for (int D : {2, 3})
    for (double beta : {-1.25, -0.5, 0.0, 0.5, 1.0, 1.25})
      for (double x : {-0.8, -0.3, 0.4, 0.9}) {
        const auto m = analytic::shell_metrics({D, beta, x});
        const auto q = shell_by_quadrature(D, beta, x);
        worst = std::max(worst, rel(m.w, q.w));
        worst = std::max(worst, std::abs(m.Ix - q.Ix) / std::max(std::abs(q.w), 1e-300));
      }
  s.add("analytic", "closed form vs adaptive quadrature", worst, 1e-6);

  double flat = 0.0;
  for (double x : {0.3, 0.6, 0.9}) {
    flat = std::max(flat, std::abs(1.0 - analytic::shell_psi({2, 0.5, x})));
    flat = std::max(flat, std::abs(1.0 - analytic::shell_psi({3, 1.0, x})));
  }
  s.add("analytic", "psi = 1 at optimal decay", flat, 1e-9);

  double pot = 0.0;
  for (auto [D, beta] : {std::pair{2, 0.5}, std::pair{3, 1.0}}) {
    const auto f = analytic::gegenbauer_flatness(D, beta, 8, analytic::FlatnessFamily::intensity_potential);
    for (int n = 1; n <= 8; ++n) pot = std::max(pot, std::abs(f[n]));
  }
  s.add("analytic", "intensity potential flat at optimal decay", pot, 1e-10);
}

void gauss_law(Suite& s) {
  LayoutSpec circle;
  circle.sampling = EquiAngle{100};
  const FieldEngine ec(sample_layout(circle));
  const auto cs = circle_hull_samples(Vec3::Zero(), 0.5, 256);
  s.add("gausslaw", "circle, test circle r=0.5", std::abs(enclosed_power(ec, cs)), 1e-10);

  LayoutSpec ell;
  ell.shape = Shape::ellipsoid;
  ell.semi_axes = {3.0, 2.0};
  ell.sampling = EquiAngle{100};
  const FieldEngine ee(sample_layout(ell));
  s.add("gausslaw", "3:2 ellipse, test circle r=0.5", std::abs(enclosed_power(ee, cs)), 1e-8);

  LayoutSpec hemi;
  hemi.shape = Shape::hemisphere;
  hemi.dim = 3;
  hemi.sampling = Fibonacci{5000, std::nullopt};
  const FieldEngine eh(sample_layout(hemi));
  const auto ss = sphere_hull_samples(Vec3::Zero(), 0.5, 48, 96);
  s.add("gausslaw", "hemisphere, test sphere r=0.5", std::abs(enclosed_power(eh, ss)), 1e-6);
}

double worst_shell_ratio(const SourceSet& src, int dim) {
  const FieldEngine e(src);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  double worst = 0.0;
  int n = 0;
  while (n < 300) {
    Vec3 x(ud(rng), ud(rng), dim == 3 ? ud(rng) : 0.0);
    if (x.norm() > 1.0) continue;
    x *= 0.9;
    ++n;
    const auto m = e.evaluate(x);
    worst = std::max(worst, m.I.norm() / m.w);
  }
  return worst;
}

void shell(Suite& s) {
  LayoutSpec circle;
  circle.sampling = EquiAngle{4096};
  SourceSet c = sample_layout(circle);
  if (s.opts.inject_beta) c.beta = *s.opts.inject_beta;
  s.add("shell", "circle L=4096, max |I|/w for |x| <= 0.9", worst_shell_ratio(c, 2), 5e-3);

  LayoutSpec sphere;
  sphere.shape = Shape::sphere;
  sphere.dim = 3;
  sphere.sampling = Fibonacci{4096, std::nullopt};
  SourceSet sp = sample_layout(sphere);
  if (s.opts.inject_beta) sp.beta = *s.opts.inject_beta;
  s.add("shell", "fibonacci sphere L=4096, max |I|/w for |x| <= 0.9", worst_shell_ratio(sp, 3), 5e-3);
}

void wfs_checks(Suite& s) {
  wfs::WfsScene scene;
  scene.m = 1.0;
  LayoutSpec circle;
  circle.sampling = EquiAngle{360};
  SourceSet c = sample_layout(circle);
  c.beta = 1.0;
  const FieldEngine e(c);
  double worst = 0.0;
  for (double x : {0.0, 0.3, 0.6, 0.9}) {
    const auto a = wfs::wfs_field(scene, Vec3(x, 0.0, 0.0)).metrics;
    const auto b = e.evaluate(Vec3(x, 0.0, 0.0));
    worst = std::max({worst, std::abs(a.psi - b.psi), std::abs(a.w - b.w)});
  }
  s.add("wfs", "m=1 equals point-source circle", worst, 1e-12);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(0.0, 2.0 * std::numbers::pi);
  double contour = 0.0;
  for (double m : {1.5, 4.0, 32.0}) {
    wfs::WfsScene sc;
    sc.m = m;
    int n = 0;
    while (n < 50) {
      const double a = ud(rng);
      const double b = ud(rng);
      const Vec3 u0(std::cos(a), std::sin(a), 0.0);
      const Vec3 x = m * u0 + m * Vec3(std::cos(b), std::sin(b), 0.0);
      if (x.norm() >= 0.95) continue;
      ++n;
      try {
        contour = std::max(contour, std::abs(wfs::wfs_gain(sc, u0, x).amp_sq - 1.0));
      } catch (const BranchError&) {
      }
    }
  }
  s.add("wfs", "|G|^2 = 1 on the reference contour", contour, 1e-10);

  wfs::WfsScene far;
  far.m = std::ldexp(1.0, 24);
  double lim = 0.0;
  for (double x : {0.2, 0.5, 0.8})
    for (int l = 0; l < 12; ++l) {
      const Vec3 u0 = far.direction(l * 30);
      const Vec3 p(x, 0.0, 0.0);
      lim = std::max(lim, rel(wfs::wfs_gain(far, u0, p).amp_sq, wfs::plane_wave_amp_sq(1.0, u0, p)));
    }
  s.add("wfs", "plane-wave limit at m = 2^24", lim, 1e-6);
}

void modematch_checks(Suite& s) {
  LayoutSpec ell;
  ell.shape = Shape::ellipsoid;
  ell.semi_axes = {3.0, 2.0};
  ell.sampling = EquiAngle{100};
  const SourceSet src = sample_layout(ell);
  const auto sol = solve_2d(problem_2d(src));
  double mean = 0.0;
  for (double r : src.radii) mean += r * r;
  mean /= src.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i)
    worst = std::max(worst, rel(sol.sigma_sq[i], src.radii[i] * src.radii[i] / mean));
  s.add("modematch", "3:2 ellipse sigma^2 vs R^2", worst, 1e-6);
  double res = 0.0;
  const int half = static_cast<int>(src.size()) / 2;
  for (int m = -(half - 1); m <= half - 1; ++m)
    if (m != 0) res = std::max(res, std::abs(sol.residuals[m + half - 1]));
  s.add("modematch", "residuals |a_m|, 1 <= |m| <= L/2-1", res, 1e-8);
}

}  // namespace

std::vector<std::string> validate_groups() {
  return {"hypergeom", "gegenbauer", "harmonics", "analytic", "gausslaw", "shell", "wfs", "modematch"};
}

std::vector<CheckResult> run_validation(const ValidateOptions& opts) {
  for (const auto& g : opts.only) {
    const auto all = validate_groups();
    if (std::find(all.begin(), all.end(), g) == all.end()) throw ConfigError("unknown validation group '" + g + "'");
  }
  Suite s{opts, {}};
  if (s.wants("hypergeom")) hypergeom(s);
  if (s.wants("gegenbauer")) gegenbauer(s);
  if (s.wants("harmonics")) harmonics(s);
  if (s.wants("analytic")) analytic_checks(s);
  if (s.wants("gausslaw")) gauss_law(s);
  if (s.wants("shell")) shell(s);
  if (s.wants("wfs")) wfs_checks(s);
  if (s.wants("modematch")) modematch_checks(s);
  return s.out;
}

bool print_validation(std::ostream& os, const std::vector<CheckResult>& results) {
  bool ok = true;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-11s %-52s %12s %10s  %s\n", "group", "check", "measured", "tol", "result");
  os << buf;
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%-11s %-52s %12.3e %10.1e  %s\n", r.group.c_str(), r.name.c_str(), r.measured,
                  r.tolerance, r.pass ? "PASS" : "FAIL");
    os << buf;
    ok = ok && r.pass;
  }
  return ok;
}

}  // namespace diffusefield
