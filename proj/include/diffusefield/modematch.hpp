#pragma once

#include <iosfwd>
#include <vector>

#include "json.hpp"

#include "diffusefield/layouts.hpp"

namespace diffusefield {

// Equi-angle circle: source l sits at angle 2 pi l / L with radius R_l.
struct ModeMatchProblem2D {
  std::vector<double> radii;

  void validate() const;
};

struct ModeMatchProblem3D {
  std::vector<Vec3> directions;
  std::vector<double> radii;
  int order = 17;
  double wiggle = 0.015;

  void validate() const;
  // w_n for n = 0..order; w_0 = 0.
  std::vector<double> wiggle_weights() const;
};

struct ModeMatchSolution {
  std::vector<double> sigma_sq;   // >= 0, mean 1
  std::vector<double> residuals;  // a_m (2D, m = -(L/2-1)..L/2) or a_nm (3D, ACN order)
  double condition_number = 0.0;
  double smallest_singular_value = 0.0;
  double second_singular_value = 0.0;
  double clamped_mass = 0.0;      // sum of clamped negatives over sum |sigma²|
  std::size_t clamped_count = 0;
  bool negativity_warning = false;
  bool ambiguous = false;         // near-null space not one-dimensional
};

ModeMatchProblem2D problem_2d(const SourceSet& s);
ModeMatchProblem3D problem_3d(const SourceSet& s, int order = 17);

ModeMatchSolution solve_2d(const ModeMatchProblem2D& p);
ModeMatchSolution solve_3d(const ModeMatchProblem3D& p);

// a_m = sum_l Phi_m(phi_l) sigma²_l / (max(|m|,1) R_l^|m|) * 2 pi / L
std::vector<double> residuals_2d(const ModeMatchProblem2D& p, const std::vector<double>& sigma_sq);
// a_nm = sum_l Y_nm(u_l) sigma²_l / ((2n+1) R_l^(n+1)) * 4 pi / L
std::vector<double> residuals_3d(const ModeMatchProblem3D& p, const std::vector<double>& sigma_sq);

// The stacked 3D system [M_0 Y; W] whose smallest singular vector is gamma.
Eigen::MatrixXd stacked_3d(const ModeMatchProblem3D& p);

void write_solution_csv(std::ostream& os, const SourceSet& s, const ModeMatchSolution& sol);
nlohmann::json diagnostics_json(const ModeMatchSolution& sol);

}  // namespace diffusefield
