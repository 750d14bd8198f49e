#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "diffusefield/layouts.hpp"

namespace diffusefield {

// Intensity density received at the origin per solid angle, sigma²/R^(D-1),
// relative to the source closest to +x (2D) or (phi, theta) = (0, pi/2) (3D).
struct IsotropyProfile {
  std::vector<Vec3> directions;
  std::vector<double> dI_dOmega;
  std::size_t reference_index = 0;
};

IsotropyProfile directional_intensity(const SourceSet& s);

// max |10 log10(dI/dOmega)| over the profile.
double isotropy_error(const IsotropyProfile& profile);

double profile_db(const IsotropyProfile& profile, std::size_t i);

// Map coordinates (phi |sin theta|^0.4, pi/2 - theta) for plotting.
std::pair<double, double> map_projection(const Vec3& u);

void write_profile_csv(std::ostream& os, const IsotropyProfile& profile, bool with_projection = false);

}  // namespace diffusefield
