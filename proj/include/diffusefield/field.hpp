#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "diffusefield/layouts.hpp"

namespace diffusefield {

inline constexpr double kProximityEps = 1e-9;

struct FieldMetrics {
  double w = 0.0;
  Vec3 I = Vec3::Zero();
  double psi = 0.0;
};

double diffuseness(double w, const Vec3& I);
double level_db(const FieldMetrics& m);

// Evaluates w, I and psi for a fixed source set. The normalizer is taken
// once at construction so that w(norm_point) = 1.
class FieldEngine {
 public:
  explicit FieldEngine(SourceSet sources, const Vec3& norm_point = Vec3::Zero());

  FieldMetrics evaluate(const Vec3& x) const;
  double normalizer() const { return normalizer_; }
  const Vec3& norm_point() const { return norm_point_; }
  const SourceSet& sources() const { return sources_; }

 private:
  // Unnormalized sums; throws ProximityError within kProximityEps of a source.
  void raw(const Vec3& x, double& w, Vec3& I) const;

  SourceSet sources_;
  std::vector<Vec3> positions_;
  Vec3 norm_point_;
  double normalizer_ = 1.0;
};

FieldMetrics evaluate_point(const SourceSet& s, const Vec3& x);

struct GridSpec {
  Vec3 origin = Vec3::Zero();
  Vec3 e1 = Vec3::UnitX();
  Vec3 e2 = Vec3::UnitY();
  double half_extent = 1.0;
  int resolution = 201;

  void validate() const;
  Vec3 point(int row, int col) const;
};

// Horizontal cut (0 deg) or a cut rotated about e1 by angle_deg.
// Plane names are xy, xz, yz.
GridSpec plane_grid(const std::string& plane, double angle_deg, double half_extent, int resolution);

enum class PointMask : std::uint8_t { interior = 0, exterior = 1, degenerate = 2 };

struct FieldGrid {
  GridSpec spec;
  std::vector<FieldMetrics> values;  // row-major, row index along e2
  std::vector<PointMask> mask;

  const FieldMetrics& at(int row, int col) const { return values[row * spec.resolution + col]; }
  PointMask mask_at(int row, int col) const { return mask[row * spec.resolution + col]; }
};

// threads == 0 uses hardware concurrency. Output does not depend on it.
FieldGrid evaluate_grid(const FieldEngine& engine, const GridSpec& grid, unsigned threads = 0);

struct HullSample {
  Vec3 point;
  Vec3 normal;
  double weight = 0.0;
};

double enclosed_power(const FieldEngine& engine, std::span<const HullSample> hull);

// Trapezoid rule on a circle in the xy-plane.
std::vector<HullSample> circle_hull_samples(const Vec3& center, double radius, int count);
// Gauss-Legendre in cos(theta) times trapezoid in phi.
std::vector<HullSample> sphere_hull_samples(const Vec3& center, double radius, int n_theta, int n_phi);

// Intensity density at x binned by the direction towards each source and
// divided by the bin's solid angle. 2D uses `bins` azimuth sectors, 3D uses
// `bins` equal-area bands in z times 2*bins azimuth sectors.
std::vector<double> directional_intensity_bins(const FieldEngine& engine, const Vec3& x, int bins);

void write_grid_csv(std::ostream& os, const FieldGrid& grid);

}  // namespace diffusefield
