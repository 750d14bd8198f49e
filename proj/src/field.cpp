#include "diffusefield/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include <Eigen/Geometry>

#include "diffusefield/csv.hpp"
#include "diffusefield/errors.hpp"

namespace diffusefield {

double diffuseness(double w, const Vec3& I) {
  if (!(w > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return 1.0 - I.norm() / w;
}

double level_db(const FieldMetrics& m) { return 10.0 * std::log10(m.w); }

FieldEngine::FieldEngine(SourceSet sources, const Vec3& norm_point)
    : sources_(std::move(sources)), norm_point_(norm_point) {
  sources_.validate();
  positions_.reserve(sources_.size());
  for (std::size_t i = 0; i < sources_.size(); ++i) positions_.push_back(sources_.position(i));

  double w = 0.0;
  Vec3 I;
  try {
    raw(norm_point_, w, I);
  } catch (const ProximityError&) {
    throw ProximityError("normalization point coincides with a source; pick another point");
  }
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("field: energy density at the normalization point is not positive");
  normalizer_ = w;
}

void FieldEngine::raw(const Vec3& x, double& w, Vec3& I) const {
  if (sources_.dim == 2 && x.z() != 0.0) throw DomainError("field: 2D evaluation point has a z component");
  const double beta = sources_.beta;
  const double eps2 = kProximityEps * kProximityEps;
  w = 0.0;
  I.setZero();
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const Vec3 d = x - positions_[i];
    const double r2 = d.squaredNorm();
    if (r2 < eps2) throw ProximityError("field: evaluation point within 1e-9 of source " + std::to_string(i));
    double g;
    if (beta == 1.0)
      g = 1.0 / r2;
    else if (beta == 0.5)
      g = 1.0 / std::sqrt(r2);
    else
      g = std::pow(r2, -beta);
    const double e = sources_.sigma_sq[i] * g;
    w += e;
    I += (e / std::sqrt(r2)) * d;
  }
}

FieldMetrics FieldEngine::evaluate(const Vec3& x) const {
  FieldMetrics m;
  raw(x, m.w, m.I);
  m.w /= normalizer_;
  m.I /= normalizer_;
  m.psi = diffuseness(m.w, m.I);
  return m;
}

FieldMetrics evaluate_point(const SourceSet& s, const Vec3& x) { return FieldEngine(s).evaluate(x); }

void GridSpec::validate() const {
  if (resolution < 1) throw DomainError("grid: resolution must be positive");
  if (!(half_extent > 0.0) || !std::isfinite(half_extent)) throw DomainError("grid: half extent must be positive");
  if (std::abs(e1.norm() - 1.0) > 1e-12 || std::abs(e2.norm() - 1.0) > 1e-12)
    throw DomainError("grid: basis vectors must be unit");
  if (std::abs(e1.dot(e2)) > 1e-12) throw DomainError("grid: basis vectors must be orthogonal");
}

Vec3 GridSpec::point(int row, int col) const {
  if (resolution == 1) return origin;
  const double step = 2.0 * half_extent / (resolution - 1);
  return origin + (-half_extent + step * col) * e1 + (-half_extent + step * row) * e2;
}

GridSpec plane_grid(const std::string& plane, double angle_deg, double half_extent, int resolution) {
  GridSpec g;
  g.half_extent = half_extent;
  g.resolution = resolution;
  if (plane == "xy") {
    g.e1 = Vec3::UnitX();
    g.e2 = Vec3::UnitY();
  } else if (plane == "xz") {
    g.e1 = Vec3::UnitX();
    g.e2 = Vec3::UnitZ();
  } else if (plane == "yz") {
    g.e1 = Vec3::UnitY();
    g.e2 = Vec3::UnitZ();
  } else {
    throw ConfigError("unknown plane '" + plane + "' (use xy, xz or yz)");
  }
  if (angle_deg != 0.0) {
    const double a = angle_deg * std::numbers::pi / 180.0;
    const Vec3 n = g.e1.cross(g.e2);
    g.e2 = std::cos(a) * g.e2 + std::sin(a) * n;
  }
  g.validate();
  return g;
}

FieldGrid evaluate_grid(const FieldEngine& engine, const GridSpec& grid, unsigned threads) {
  grid.validate();
  const int res = grid.resolution;
  FieldGrid out;
  out.spec = grid;
  out.values.resize(static_cast<std::size_t>(res) * res);
  out.mask.resize(out.values.size(), PointMask::interior);

  const auto& hull = engine.sources().hull;
  auto do_rows = [&](int r0, int r1) {
    for (int row = r0; row < r1; ++row) {
      for (int col = 0; col < res; ++col) {
        const std::size_t k = static_cast<std::size_t>(row) * res + col;
        const Vec3 x = grid.point(row, col);
        if (hull && hull->level(x) >= 1.0) out.mask[k] = PointMask::exterior;
        try {
          out.values[k] = engine.evaluate(x);
        } catch (const ProximityError&) {
          const double nan = std::numeric_limits<double>::quiet_NaN();
          out.values[k] = FieldMetrics{nan, Vec3::Constant(nan), nan};
          out.mask[k] = PointMask::degenerate;
        }
      }
    }
  };

  unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n = std::min<unsigned>(n, static_cast<unsigned>(res));
  if (n <= 1) {
    do_rows(0, res);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) {
    const int r0 = static_cast<int>(static_cast<long>(res) * t / n);
    const int r1 = static_cast<int>(static_cast<long>(res) * (t + 1) / n);
    pool.emplace_back(do_rows, r0, r1);
  }
  for (auto& th : pool) th.join();
  return out;
}

double enclosed_power(const FieldEngine& engine, std::span<const HullSample> hull) {
  double p = 0.0;
  for (const auto& s : hull) p += s.weight * engine.evaluate(s.point).I.dot(s.normal);
  return p;
}

std::vector<HullSample> circle_hull_samples(const Vec3& center, double radius, int count) {
  std::vector<HullSample> out(count);
  for (int i = 0; i < count; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / count;
    const Vec3 n(std::cos(phi), std::sin(phi), 0.0);
    out[i] = {center + radius * n, n, 2.0 * std::numbers::pi * radius / count};
  }
  return out;
}

std::vector<HullSample> sphere_hull_samples(const Vec3& center, double radius, int n_theta, int n_phi) {
  const auto rule = specfun::cached_gauss_jacobi(n_theta, 0.0, 0.0);
  std::vector<HullSample> out;
  out.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  for (int j = 0; j < n_theta; ++j) {
    const double z = rule->nodes[j];
    const double s = std::sqrt(1.0 - z * z);
    for (int k = 0; k < n_phi; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / n_phi;
      const Vec3 n(s * std::cos(phi), s * std::sin(phi), z);
      out.push_back({center + radius * n, n, radius * radius * rule->weights[j] * 2.0 * std::numbers::pi / n_phi});
    }
  }
  return out;
}

std::vector<double> directional_intensity_bins(const FieldEngine& engine, const Vec3& x, int bins) {
  if (bins < 1) throw DomainError("directional_intensity_bins: need at least one bin");
  const SourceSet& s = engine.sources();
  const double two_pi = 2.0 * std::numbers::pi;
  const int n_phi = s.dim == 2 ? bins : 2 * bins;
  const int n_z = s.dim == 2 ? 1 : bins;
  std::vector<double> out(static_cast<std::size_t>(n_phi) * n_z, 0.0);
  const double omega = s.dim == 2 ? two_pi / bins : 4.0 * std::numbers::pi / (n_phi * n_z);

  for (std::size_t i = 0; i < s.size(); ++i) {
    const Vec3 d = s.position(i) - x;
    const double r2 = d.squaredNorm();
    if (r2 < kProximityEps * kProximityEps) throw ProximityError("directional_intensity_bins: point on a source");
    const Vec3 u = d / std::sqrt(r2);
    double phi = std::atan2(u.y(), u.x());
    if (phi < 0.0) phi += two_pi;
    const int ip = std::min(n_phi - 1, static_cast<int>(phi / two_pi * n_phi));
    const int iz = s.dim == 2 ? 0 : std::min(n_z - 1, static_cast<int>((u.z() + 1.0) * 0.5 * n_z));
    out[static_cast<std::size_t>(iz) * n_phi + ip] += s.sigma_sq[i] * std::pow(r2, -s.beta);
  }
  for (double& v : out) v /= engine.normalizer() * omega;
  return out;
}

void write_grid_csv(std::ostream& os, const FieldGrid& grid) {
  os << "px,py,pz,w,Ix,Iy,Iz,psi,mask\n";
  const int res = grid.spec.resolution;
  for (int row = 0; row < res; ++row) {
    for (int col = 0; col < res; ++col) {
      const Vec3 p = grid.spec.point(row, col);
      const FieldMetrics& m = grid.at(row, col);
      os << fmt_num(p.x()) << ',' << fmt_num(p.y()) << ',' << fmt_num(p.z()) << ',' << fmt_num(m.w) << ','
         << fmt_num(m.I.x()) << ',' << fmt_num(m.I.y()) << ',' << fmt_num(m.I.z()) << ',' << fmt_num(m.psi) << ','
         << static_cast<int>(grid.mask_at(row, col)) << '\n';
    }
  }
}

}  // namespace diffusefield
