#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "diffusefield/field.hpp"

namespace diffusefield::wfs {

// Circle of L uncorrelated virtual sources at radius R0 = m Rs, rendered by
// a circular secondary point-source array of radius Rs with 2.5D WFS.
struct WfsScene {
  double secondary_radius = 1.0;
  double m = 1.0;
  bool focused = false;
  int count = 360;

  void validate() const;
  double virtual_radius() const { return m * secondary_radius; }
  Vec3 direction(int l) const;
};

struct WfsGainSample {
  double r = 0.0;        // observer to virtual source
  double r0_star = 0.0;  // signed distance from the virtual source to the stationary point
  double amp_sq = 0.0;
};

// Distance t along -(x0 - x)/r from the virtual source x0 = R0 u0 to the
// stationary secondary source; negative for focused sources, which sit on the
// far side of the focus. Throws BranchError where no valid point exists.
double stationary_partial_distance(const WfsScene& scene, const Vec3& u0, const Vec3& x);

WfsGainSample wfs_gain(const WfsScene& scene, const Vec3& u0, const Vec3& x);

// m -> infinity limit of amp_sq.
double plane_wave_amp_sq(double secondary_radius, const Vec3& u0, const Vec3& x);

struct WfsResult {
  FieldMetrics metrics;
  int invalid_count = 0;
};

// Sums over virtual sources with u pointing source to receiver, divided by
// L so that w(0) = 1. Invalid sources are skipped and counted.
WfsResult wfs_field(const WfsScene& scene, const Vec3& x);

struct WfsSweepRow {
  double m;
  double x;
  double w;
  double psi;
  std::string branch;
  int invalid_count;
};

// Observer at (x, 0). Each m uses the focused branch when m < 1.
std::vector<WfsSweepRow> wfs_sweep(const WfsScene& scene, const std::vector<double>& ms,
                                   const std::vector<double>& xs, unsigned threads = 0);

std::vector<double> log_spaced(double lo, double hi, int count);

void write_sweep_csv(std::ostream& os, const std::vector<WfsSweepRow>& rows);

}  // namespace diffusefield::wfs
