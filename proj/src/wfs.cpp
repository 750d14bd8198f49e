#include "diffusefield/wfs.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "diffusefield/csv.hpp"
#include "diffusefield/errors.hpp"

namespace diffusefield::wfs {

void WfsScene::validate() const {
  if (!(secondary_radius > 0.0) || !std::isfinite(secondary_radius))
    throw DomainError("wfs: secondary radius must be positive");
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("wfs: m must be positive");
  if (focused && !(m < 1.0)) throw DomainError("wfs: focused sources need m < 1");
  if (!focused && !(m >= 1.0)) throw DomainError("wfs: non-focused sources need m >= 1");
  if (count < 1) throw DomainError("wfs: need at least one virtual source");
}

Vec3 WfsScene::direction(int l) const {
  const double phi = 2.0 * std::numbers::pi * l / count;
  return {std::cos(phi), std::sin(phi), 0.0};
}

namespace {

void check_observer(const WfsScene& scene, const Vec3& x) {
  if (x.z() != 0.0) throw DomainError("wfs: observer must lie in the horizontal plane");
  if (!(x.norm() < scene.secondary_radius)) throw DomainError("wfs: observer must be inside the secondary circle");
}

}  // namespace

double stationary_partial_distance(const WfsScene& scene, const Vec3& u0, const Vec3& x) {
  const double R0 = scene.virtual_radius();
  const double Rs = scene.secondary_radius;
  const Vec3 d = R0 * u0 - x;
  const double r = d.norm();
  if (r < kProximityEps) throw BranchError("wfs: observer at the virtual source");
  const double c = u0.dot(d) / r;
  // R0² (1 - c²) from the perpendicular offset, which stays accurate for huge R0.
  const double perp = (u0.x() * d.y() - u0.y() * d.x()) / r;
  const double disc = Rs * Rs - R0 * R0 * perp * perp;
  if (disc < 0.0) throw BranchError("wfs: no stationary point on the secondary circle");
  // The ray from x0 towards x meets the circle at t = R0 c -+ sqrt(disc).
  // The minus root is the entry point for non-focused sources and the point
  // behind the focus otherwise; written without cancellation near m = 1.
  const double den = R0 * c + std::sqrt(disc);
  if (!(den > 0.0)) throw BranchError("wfs: stationary point is behind the observer");
  const double t = (R0 - Rs) * (R0 + Rs) / den;
  if (scene.focused) {
    if (x.dot(u0) >= R0) throw BranchError("wfs: observer is upstream of the focus");
  } else if (t < 0.0 || t > r) {
    throw BranchError("wfs: stationary point not between source and observer");
  }
  return t;
}

WfsGainSample wfs_gain(const WfsScene& scene, const Vec3& u0, const Vec3& x) {
  const double R0 = scene.virtual_radius();
  WfsGainSample g;
  g.r = (R0 * u0 - x).norm();
  g.r0_star = stationary_partial_distance(scene, u0, x);
  g.amp_sq = (R0 - g.r0_star) / (g.r - g.r0_star) * (R0 / g.r);
  return g;
}

double plane_wave_amp_sq(double secondary_radius, const Vec3& u0, const Vec3& x) {
  const double R1 = x.norm();
  if (R1 == 0.0) return 1.0;
  const double c1 = x.dot(u0) / R1;
  const double disc = secondary_radius * secondary_radius - R1 * R1 * (1.0 - c1 * c1);
  if (!(disc > 0.0)) throw BranchError("wfs: plane-wave limit undefined outside the secondary circle");
  return 1.0 / (1.0 - R1 * c1 / std::sqrt(disc));
}

WfsResult wfs_field(const WfsScene& scene, const Vec3& x) {
  scene.validate();
  check_observer(scene, x);
  const double R0 = scene.virtual_radius();
  WfsResult res;
  double w = 0.0;
  Vec3 I = Vec3::Zero();
  for (int l = 0; l < scene.count; ++l) {
    const Vec3 u0 = scene.direction(l);
    WfsGainSample g;
    try {
      g = wfs_gain(scene, u0, x);
    } catch (const BranchError&) {
      ++res.invalid_count;
      continue;
    }
    w += g.amp_sq;
    I += g.amp_sq * (x - R0 * u0) / g.r;
  }
  if (res.invalid_count == scene.count) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    res.metrics = {nan, Vec3::Constant(nan), nan};
    return res;
  }
  res.metrics.w = w / scene.count;
  res.metrics.I = I / scene.count;
  res.metrics.psi = diffuseness(res.metrics.w, res.metrics.I);
  return res;
}

std::vector<WfsSweepRow> wfs_sweep(const WfsScene& scene, const std::vector<double>& ms,
                                   const std::vector<double>& xs, unsigned threads) {
  for (double m : ms)
    if (!(m > 0.0)) throw DomainError("wfs_sweep: m values must be positive");
  for (double x : xs)
    if (!(std::abs(x) < scene.secondary_radius)) throw DomainError("wfs_sweep: |x| must be below Rs");

  std::vector<WfsSweepRow> rows(ms.size() * xs.size());
  auto do_m = [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      WfsScene s = scene;
      s.m = ms[i];
      s.focused = ms[i] < 1.0;
      for (std::size_t j = 0; j < xs.size(); ++j) {
        const WfsResult r = wfs_field(s, Vec3(xs[j], 0.0, 0.0));
        rows[i * xs.size() + j] = {ms[i], xs[j], r.metrics.w, r.metrics.psi,
                                   s.focused ? "focused" : "non-focused", r.invalid_count};
      }
    }
  };
  unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n = std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(1, ms.size())));
  if (n <= 1) {
    do_m(0, ms.size());
    return rows;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(do_m, ms.size() * t / n, ms.size() * (t + 1) / n);
  for (auto& th : pool) th.join();
  return rows;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw DomainError("log_spaced: need 0 < lo <= hi and count >= 1");
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) v[i] = std::exp(a + (b - a) * i / (count - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

void write_sweep_csv(std::ostream& os, const std::vector<WfsSweepRow>& rows) {
  os << "m,x,w,psi,branch,invalid_count\n";
  for (const auto& r : rows)
    os << fmt_num(r.m) << ',' << fmt_num(r.x) << ',' << fmt_num(r.w) << ',' << fmt_num(r.psi) << ',' << r.branch
       << ',' << r.invalid_count << '\n';
}

}  // namespace diffusefield::wfs
