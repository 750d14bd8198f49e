#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

namespace diffusefield {

using Vec3 = Eigen::Vector3d;

namespace specfun {

struct HypergeomParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double z = 0.0;
};

// F(a,b;c;z) from the Euler integral
//   Γ(c)/(Γ(b)Γ(c-b)) ∫₀¹ t^(b-1) (1-t)^(c-b-1) (1-zt)^(-a) dt
// evaluated by Gauss-Jacobi quadrature with node doubling.
// Requires c > b > 0 and z < 1.
double hyp2f1(const HypergeomParams& p);

// Plain power series, for cross-checks at |z| <= 0.5.
double hyp2f1_series(const HypergeomParams& p);

struct GegenbauerFamily {
  double nu = 0.5;
  int max_degree = 0;
};

// C_0..C_N at z by upward recurrence. nu == 0 returns the renormalized
// limit C_0 = 1, C_n = (2/n) T_n(z), whose generating function is
// -ln(1 - 2zx + x²).
std::vector<double> gegenbauer_eval(const GegenbauerFamily& family, double z);

std::vector<double> chebyshev_t(int max_degree, double z);
std::vector<double> legendre(int max_degree, double z);

// Real circular harmonics, orthonormal on [0, 2π).
double circ_harm(int m, double phi);

// Real spherical harmonics, orthonormal on S². The associated Legendre
// factor carries the Condon-Shortley phase, which cancels the (-1)^m of the
// normalization, so Y_n^m = Φ_m(φ) Pbar_n^|m|(cos θ) with Pbar >= 0 near the
// north pole. Addition theorem: Σ_m Y_n^m(u) Y_n^m(v) = (2n+1)/(4π) P_n(uᵀv).
double real_sph_harm(int n, int m, const Vec3& u);

// All Y_n^m for n <= N in ACN order (index n² + n + m).
std::vector<double> real_sph_harm_all(int max_degree, const Vec3& u);

inline int acn_index(int n, int m) { return n * n + n + m; }

double unit_sphere_area(int dim);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double alpha_exp = 0.0;
  double beta_exp = 0.0;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// n-point rule for the weight (1-z)^alpha (1+z)^beta on (-1, 1).
QuadratureRule gauss_jacobi(int n, double alpha, double beta);

// Same rule, memoized. Rules are immutable once built.
std::shared_ptr<const QuadratureRule> cached_gauss_jacobi(int n, double alpha, double beta);

}  // namespace specfun
}  // namespace diffusefield
