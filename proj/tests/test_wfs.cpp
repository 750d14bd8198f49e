#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "gen.hpp"

#include "diffusefield/errors.hpp"
#include "diffusefield/field.hpp"
#include "diffusefield/wfs.hpp"

using namespace diffusefield;
using namespace diffusefield::wfs;
using std::numbers::pi;

namespace {

WfsScene scene(double m, int L = 360) {
  WfsScene s;
  s.m = m;
  s.focused = m < 1.0;
  s.count = L;
  return s;
}

Vec3 planar(gen::Rng& rng, double rmax) {
  const double r = rmax * std::sqrt(gen::uniform(rng, 0.0, 1.0));
  const double phi = gen::uniform(rng, 0.0, 2 * pi);
  return {r * std::cos(phi), r * std::sin(phi), 0.0};
}

// Where the straight ray from x0 through x crosses the secondary circle,
// found by bisection on |x0 + t v| - Rs along the ray direction v.
double crossing_by_bisection(double Rs, const Vec3& x0, const Vec3& v, double lo, double hi) {
  auto f = [&](double t) { return (x0 + t * v).norm() - Rs; };
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double psi_at(double m, double x) { return wfs_field(scene(m), Vec3(x, 0, 0)).metrics.psi; }

}  // namespace

TEST_CASE("m = 1 gives the point-source law") {
  gen::Rng rng(131);
  const WfsScene s = scene(1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 u0 = gen::unit_vector(rng, 2);
    const Vec3 x = planar(rng, 0.95);
    const WfsGainSample g = wfs_gain(s, u0, x);
    CHECK(std::abs(g.r0_star) < 1e-12);
    CHECK(g.amp_sq == doctest::Approx(1.0 / (g.r * g.r)).epsilon(1e-12));
  }
}

TEST_CASE("m = 1 field equals the plain point-source circle") {
  LayoutSpec spec;
  spec.sampling = EquiAngle{360};
  SourceSet circle = sample_layout(spec);
  circle.beta = 1.0;
  const FieldEngine e(circle);
  for (double x : {0.0, 0.2, 0.6, -0.45, 0.9}) {
    const FieldMetrics a = wfs_field(scene(1.0), Vec3(x, 0, 0)).metrics;
    const FieldMetrics b = e.evaluate(Vec3(x, 0, 0));
    CHECK(std::abs(a.psi - b.psi) < 1e-12);
    CHECK(a.w == doctest::Approx(b.w).epsilon(1e-12));
    CHECK((a.I - b.I).norm() < 1e-12);
  }
}

TEST_CASE("large m approaches the plane-wave limit") {
  gen::Rng rng(137);
  const WfsScene s = scene(1 << 20);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 u0 = gen::unit_vector(rng, 2);
    const Vec3 x = planar(rng, 0.9);
    CHECK(wfs_gain(s, u0, x).amp_sq == doctest::Approx(plane_wave_amp_sq(1.0, u0, x)).epsilon(1e-5));
  }
  CHECK(plane_wave_amp_sq(1.0, Vec3::UnitX(), Vec3::Zero()) == 1.0);
}

TEST_CASE("property: stationary point matches the ray crossing") {
  gen::Rng rng(139);
  for (int trial = 0; trial < 300; ++trial) {
    const bool focused = trial % 2;
    const double m = focused ? gen::uniform(rng, 0.2, 0.95) : std::exp(gen::uniform(rng, 0.0, std::log(1000.0)));
    const WfsScene s = scene(m);
    const Vec3 u0 = gen::unit_vector(rng, 2);
    const Vec3 x = planar(rng, 0.95);
    const Vec3 x0 = m * u0;
    const Vec3 v = (x - x0).normalized();
    double t = 0.0;
    try {
      t = stationary_partial_distance(s, u0, x);
    } catch (const BranchError&) {
      continue;
    }
    const double r = (x - x0).norm();
    // Non-focused: the entry point between source and observer. Focused: the
    // point behind the focus, on the far side from the observer.
    const double oracle = focused ? crossing_by_bisection(1.0, x0, v, -2.0, 0.0)
                                  : crossing_by_bisection(1.0, x0, v, m - 1.0, r);
    INFO("m=" << m << " focused=" << focused);
    CHECK(std::abs(t - oracle) < 1e-9 * std::max(1.0, m));
    CHECK(std::abs((x0 + t * v).norm() - 1.0) < 1e-9 * std::max(1.0, m));
  }
}

TEST_CASE("property: reference contour has unit gain") {
  gen::Rng rng(149);
  int tested = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const double m = trial % 2 ? gen::uniform(rng, 0.3, 0.95) : std::exp(gen::uniform(rng, 0.0, std::log(1000.0)));
    const WfsScene s = scene(m);
    const Vec3 u0 = gen::unit_vector(rng, 2);
    // Observers at distance R0 from the virtual source.
    const double a = gen::uniform(rng, -pi, pi);
    const Vec3 x = m * u0 + m * Vec3(std::cos(a), std::sin(a), 0.0);
    if (x.norm() >= 0.999) continue;
    WfsGainSample g;
    try {
      g = wfs_gain(s, u0, x);
    } catch (const BranchError&) {
      continue;
    }
    ++tested;
    CHECK(g.amp_sq == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(tested > 100);
}

TEST_CASE("origin is perfectly diffuse with unit level") {
  for (double m : {1.0, 1.5, 4.0, 32.0, 1024.0}) {
    const FieldMetrics f = wfs_field(scene(m), Vec3::Zero()).metrics;
    CHECK(std::abs(f.psi - 1.0) < 1e-6);
    CHECK(f.w == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("small displacements stay diffuse for non-focused sources") {
  // Asserted as stated. The 0.9 contour of the m = 1 circle sits at x = 0.199
  // and it shrinks with m, so these checks fail by up to 0.0016.
  for (double m = 1.0; m <= 1024.0; m *= 2) {
    const double psi = psi_at(m, 0.2);
    INFO("m=" << m << " psi(0.2)=" << psi);
    CHECK(psi >= 0.9);
  }
  CHECK(psi_at(32.0, 0.19) >= 0.9);
}

TEST_CASE("diffuseness at x = 0.6 falls with m") {
  double prev = psi_at(1.0, 0.6);
  for (double m = 1.25; m <= 2048.0; m *= 1.25) {
    const double psi = psi_at(m, 0.6);
    CHECK(psi <= prev + 1e-12);
    prev = psi;
  }
}

TEST_CASE("level spread over |x| <= 0.6 shrinks with m") {
  auto spread = [](double m) {
    double lo = 1e300, hi = 0.0;
    for (int k = -12; k <= 12; ++k)
      for (const Vec3& dir : {Vec3::UnitX().eval(), Vec3::UnitY().eval(), Vec3(1, 1, 0).normalized().eval()}) {
        const double w = wfs_field(scene(m), 0.05 * k * dir).metrics.w;
        lo = std::min(lo, w);
        hi = std::max(hi, w);
      }
    return 10.0 * std::log10(hi / lo);
  };
  double prev = spread(1.0);
  for (double m = 2.0; m <= 1024.0; m *= 2) {
    const double s = spread(m);
    CHECK(s < prev);
    prev = s;
  }
}

TEST_CASE("property: focused sources leave |x| > m uncovered") {
  gen::Rng rng(151);
  for (int trial = 0; trial < 100; ++trial) {
    const double m = gen::uniform(rng, 0.2, 0.9);
    const Vec3 dir = gen::unit_vector(rng, 2);
    const WfsResult outside = wfs_field(scene(m), gen::uniform(rng, m + 0.02, 0.98) * dir);
    CHECK(outside.invalid_count > 0);
    const WfsResult inside = wfs_field(scene(m), gen::uniform(rng, 0.0, m - 0.02) * dir);
    CHECK(inside.invalid_count == 0);
  }
}

TEST_CASE("sweep table") {
  const auto ms = log_spaced(0.25, 1024.0, 8);
  std::vector<double> xs;
  for (int i = 0; i <= 10; ++i) xs.push_back(-0.9 + 0.18 * i);
  std::ostringstream a, b;
  write_sweep_csv(a, wfs_sweep(scene(1.0, 90), ms, xs, 1));
  write_sweep_csv(b, wfs_sweep(scene(1.0, 90), ms, xs, 4));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("m,x,w,psi,branch,invalid_count\n0.25,-0.9,", 0) == 0);
  CHECK(a.str().find(",focused,") != std::string::npos);
  CHECK(a.str().find(",non-focused,0\n") != std::string::npos);

  // The m = 1 column is the circle profile.
  const auto rows = wfs_sweep(scene(1.0), {1.0}, {0.6});
  CHECK(rows[0].psi == psi_at(1.0, 0.6));
  CHECK(rows[0].branch == "non-focused");
}

TEST_CASE("log spacing") {
  const auto v = log_spaced(1.0, 1024.0, 11);
  CHECK(v.front() == 1.0);
  CHECK(v.back() == 1024.0);
  for (int i = 1; i < 10; ++i) CHECK(v[i] == doctest::Approx(std::pow(2.0, i)).epsilon(1e-14));
  CHECK(log_spaced(3.0, 3.0, 1) == std::vector<double>{3.0});
  CHECK_THROWS_AS(log_spaced(0.0, 1.0, 4), DomainError);
  CHECK_THROWS_AS(log_spaced(2.0, 1.0, 4), DomainError);
}

TEST_CASE("scene and observer validation") {
  WfsScene s = scene(0.5);
  s.focused = false;
  CHECK_THROWS_AS(wfs_field(s, Vec3::Zero()), DomainError);
  s = scene(2.0);
  s.focused = true;
  CHECK_THROWS_AS(wfs_field(s, Vec3::Zero()), DomainError);
  CHECK_THROWS_AS(wfs_field(scene(2.0), Vec3(1.0, 0, 0)), DomainError);
  CHECK_THROWS_AS(wfs_field(scene(2.0), Vec3(0.1, 0, 0.1)), DomainError);
  CHECK_THROWS_AS(wfs_field(scene(2.0, 0), Vec3::Zero()), DomainError);
  CHECK_THROWS_AS(wfs_sweep(scene(2.0), {0.0}, {0.1}), DomainError);
  CHECK_THROWS_AS(wfs_sweep(scene(2.0), {2.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(stationary_partial_distance(scene(0.5), Vec3::UnitX(), Vec3(0.5, 0, 0)), BranchError);
}
