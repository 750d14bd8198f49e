#include "diffusefield/gains.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "diffusefield/csv.hpp"
#include "diffusefield/errors.hpp"

namespace diffusefield {

IsotropyProfile directional_intensity(const SourceSet& s) {
  s.validate();
  IsotropyProfile p;
  p.directions = s.directions;
  p.dI_dOmega.resize(s.size());
  double best = -2.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    p.dI_dOmega[i] = s.sigma_sq[i] / std::pow(s.radii[i], s.dim - 1.0);
    if (s.directions[i].x() > best) {
      best = s.directions[i].x();
      p.reference_index = i;
    }
  }
  const double ref = p.dI_dOmega[p.reference_index];
  if (!(ref > 0.0)) throw DomainError("directional_intensity: reference source has zero gain");
  for (double& v : p.dI_dOmega) v /= ref;
  return p;
}

double profile_db(const IsotropyProfile& profile, std::size_t i) {
  return 10.0 * std::log10(profile.dI_dOmega[i]);
}

double isotropy_error(const IsotropyProfile& profile) {
  if (profile.dI_dOmega.empty()) throw DomainError("isotropy_error: empty profile");
  double e = 0.0;
  for (std::size_t i = 0; i < profile.dI_dOmega.size(); ++i) e = std::max(e, std::abs(profile_db(profile, i)));
  return e;
}

std::pair<double, double> map_projection(const Vec3& u) {
  const double theta = std::acos(std::clamp(u.z() / u.norm(), -1.0, 1.0));
  const double phi = std::atan2(u.y(), u.x());
  return {phi * std::pow(std::abs(std::sin(theta)), 0.4), 0.5 * std::numbers::pi - theta};
}

void write_profile_csv(std::ostream& os, const IsotropyProfile& profile, bool with_projection) {
  os << "ux,uy,uz,dI_dOmega,dB" << (with_projection ? ",map_x,map_y" : "") << '\n';
  for (std::size_t i = 0; i < profile.directions.size(); ++i) {
    const Vec3& u = profile.directions[i];
    os << fmt_num(u.x()) << ',' << fmt_num(u.y()) << ',' << fmt_num(u.z()) << ',' << fmt_num(profile.dI_dOmega[i])
       << ',' << fmt_num(profile_db(profile, i));
    if (with_projection) {
      const auto [mx, my] = map_projection(u);
      os << ',' << fmt_num(mx) << ',' << fmt_num(my);
    }
    os << '\n';
  }
}

}  // namespace diffusefield
