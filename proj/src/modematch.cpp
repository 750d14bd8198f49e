#include "diffusefield/modematch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "diffusefield/csv.hpp"
#include "diffusefield/errors.hpp"

namespace diffusefield {
namespace {

constexpr double kNegTol = 1e-9;
constexpr double kAmbiguityRatio = 10.0;

// Clamp negatives, rescale to mean 1 and record what was removed.
void finish_sigma(std::vector<double>& s, ModeMatchSolution& sol) {
  double total_abs = 0.0;
  double mean = 0.0;
  for (double v : s) {
    total_abs += std::abs(v);
    mean += v;
  }
  mean /= static_cast<double>(s.size());
  if (!(mean > 0.0)) throw SingularMatrixError("mode matching: solution has no positive mean", sol.condition_number);
  double clamped = 0.0;
  for (double& v : s) {
    if (v < 0.0) {
      if (v < -kNegTol * mean) sol.negativity_warning = true;
      clamped += -v;
      ++sol.clamped_count;
      v = 0.0;
    }
  }
  sol.clamped_mass = total_abs > 0.0 ? clamped / total_abs : 0.0;
  const double m = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  for (double& v : s) v /= m;
  sol.sigma_sq = std::move(s);
}

double min_radius(const std::vector<double>& r) { return *std::min_element(r.begin(), r.end()); }
double max_radius(const std::vector<double>& r) { return *std::max_element(r.begin(), r.end()); }

void check_radii(const std::vector<double>& r) {
  for (double v : r)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("mode matching: radii must be positive");
}

}  // namespace

void ModeMatchProblem2D::validate() const {
  const std::size_t L = radii.size();
  if (L < 2 || L % 2 != 0) throw DomainError("mode matching 2D: L must be even and at least 2");
  check_radii(radii);
}

void ModeMatchProblem3D::validate() const {
  if (directions.size() != radii.size() || directions.empty())
    throw DomainError("mode matching 3D: directions and radii differ in length");
  if (order < 1) throw DomainError("mode matching 3D: order must be at least 1");
  if (static_cast<std::size_t>((order + 1) * (order + 1)) > directions.size())
    throw DomainError("mode matching 3D: (N+1)^2 exceeds the number of sources");
  if (!(wiggle >= 0.0)) throw DomainError("mode matching 3D: wiggle weight must be nonnegative");
  check_radii(radii);
  for (const auto& u : directions)
    if (std::abs(u.norm() - 1.0) > 1e-9) throw DomainError("mode matching 3D: direction is not unit");
}

std::vector<double> ModeMatchProblem3D::wiggle_weights() const {
  double s = 0.0;
  for (int n = 0; n <= order; ++n) s += std::pow(n * (n + 1.0), 2);
  const double c = wiggle / std::sqrt(4.0 * std::numbers::pi * s);
  std::vector<double> w(order + 1);
  for (int n = 0; n <= order; ++n) w[n] = c * n * (n + 1.0);
  return w;
}

ModeMatchProblem2D problem_2d(const SourceSet& s) {
  s.validate();
  if (s.dim != 2) throw DomainError("mode matching 2D: source set is not 2D");
  const std::size_t L = s.size();
  for (std::size_t l = 0; l < L; ++l) {
    const double phi = 2.0 * std::numbers::pi * l / L;
    if ((s.directions[l] - Vec3(std::cos(phi), std::sin(phi), 0.0)).norm() > 1e-9)
      throw DomainError("mode matching 2D: sources must be equi-angle starting at 0");
  }
  return {s.radii};
}

ModeMatchProblem3D problem_3d(const SourceSet& s, int order) {
  s.validate();
  if (s.dim != 3) throw DomainError("mode matching 3D: source set is not 3D");
  ModeMatchProblem3D p;
  p.directions = s.directions;
  p.radii = s.radii;
  p.order = order;
  return p;
}

std::vector<double> residuals_2d(const ModeMatchProblem2D& p, const std::vector<double>& sigma_sq) {
  const int L = static_cast<int>(p.radii.size());
  const int half = L / 2;
  std::vector<double> a;
  for (int m = -(half - 1); m <= half; ++m) {
    const int am = std::abs(m);
    double s = 0.0;
    for (int l = 0; l < L; ++l) {
      const double phi = 2.0 * std::numbers::pi * l / L;
      s += specfun::circ_harm(m, phi) * sigma_sq[l] / (std::max(am, 1) * std::pow(p.radii[l], am));
    }
    a.push_back(s * 2.0 * std::numbers::pi / L);
  }
  return a;
}

ModeMatchSolution solve_2d(const ModeMatchProblem2D& p) {
  p.validate();
  const int L = static_cast<int>(p.radii.size());
  const int half = L / 2;
  const double rmin = min_radius(p.radii);

  Eigen::MatrixXd M(L, L);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(L);
  for (int row = 0; row < L; ++row) {
    const int m = row - (half - 1);
    const int am = std::abs(m);
    for (int l = 0; l < L; ++l) {
      const double phi = 2.0 * std::numbers::pi * l / L;
      M(row, l) = specfun::circ_harm(m, phi) / (std::max(am, 1) * std::pow(p.radii[l] / rmin, am));
    }
    if (m == 0) rhs(row) = 1.0;
    const double scale = M.row(row).cwiseAbs().maxCoeff();
    if (scale > 0.0) {
      M.row(row) /= scale;
      rhs(row) /= scale;
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  const double rcond = lu.rcond();
  ModeMatchSolution sol;
  sol.condition_number = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(rcond > 1e-16) || !std::isfinite(rcond))
    throw SingularMatrixError("mode matching 2D: matrix is singular (cond " + fmt_num(sol.condition_number) + ")",
                              sol.condition_number);
  Eigen::VectorXd x = lu.solve(rhs);
  std::vector<double> s(x.data(), x.data() + L);
  finish_sigma(s, sol);
  sol.residuals = residuals_2d(p, sol.sigma_sq);
  return sol;
}

Eigen::MatrixXd stacked_3d(const ModeMatchProblem3D& p) {
  p.validate();
  const int N = p.order;
  const int K = (N + 1) * (N + 1);
  const int L = static_cast<int>(p.directions.size());
  const double rmax = max_radius(p.radii);

  Eigen::MatrixXd Y(L, K);
  for (int l = 0; l < L; ++l) {
    const auto y = specfun::real_sph_harm_all(N, p.directions[l]);
    for (int k = 0; k < K; ++k) Y(l, k) = y[k];
  }
  // Rows n >= 1 of M; radii scaled by the largest one.
  Eigen::MatrixXd M0(K - 1, L);
  for (int n = 1; n <= N; ++n) {
    for (int l = 0; l < L; ++l) {
      const double f = 4.0 * std::numbers::pi / L / ((2.0 * n + 1.0) * std::pow(p.radii[l] / rmax, n + 1.0));
      for (int m = -n; m <= n; ++m) {
        const int k = specfun::acn_index(n, m);
        M0(k - 1, l) = Y(l, k) * f;
      }
    }
  }
  const auto w = p.wiggle_weights();
  Eigen::MatrixXd S(2 * K - 1, K);
  S.topRows(K - 1) = M0 * Y;
  S.bottomRows(K).setZero();
  for (int n = 0; n <= N; ++n)
    for (int m = -n; m <= n; ++m) {
      const int k = specfun::acn_index(n, m);
      S(K - 1 + k, k) = w[n];
    }
  return S;
}

std::vector<double> residuals_3d(const ModeMatchProblem3D& p, const std::vector<double>& sigma_sq) {
  const int N = p.order;
  const int K = (N + 1) * (N + 1);
  const std::size_t L = p.directions.size();
  std::vector<double> a(K, 0.0);
  for (std::size_t l = 0; l < L; ++l) {
    const auto y = specfun::real_sph_harm_all(N, p.directions[l]);
    for (int n = 0; n <= N; ++n) {
      const double f = sigma_sq[l] / ((2.0 * n + 1.0) * std::pow(p.radii[l], n + 1.0));
      for (int m = -n; m <= n; ++m) a[specfun::acn_index(n, m)] += y[specfun::acn_index(n, m)] * f;
    }
  }
  for (double& v : a) v *= 4.0 * std::numbers::pi / static_cast<double>(L);
  return a;
}

ModeMatchSolution solve_3d(const ModeMatchProblem3D& p) {
  const Eigen::MatrixXd S = stacked_3d(p);
  const int K = static_cast<int>(S.cols());
  const int N = p.order;
  const int L = static_cast<int>(p.directions.size());

  Eigen::BDCSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  ModeMatchSolution sol;
  sol.smallest_singular_value = sv(K - 1);
  sol.second_singular_value = sv(K - 2);
  // Conditioning of the complement of the near-null direction.
  sol.condition_number = sv(K - 2) > 0.0 ? sv(0) / sv(K - 2) : std::numeric_limits<double>::infinity();
  sol.ambiguous = !(sv(K - 2) > kAmbiguityRatio * sv(K - 1));
  const Eigen::VectorXd gamma = svd.matrixV().col(K - 1);

  std::vector<double> s(L);
  for (int l = 0; l < L; ++l) {
    const auto y = specfun::real_sph_harm_all(N, p.directions[l]);
    double v = 0.0;
    for (int k = 0; k < K; ++k) v += y[k] * gamma(k);
    s[l] = v;
  }
  if (std::accumulate(s.begin(), s.end(), 0.0) < 0.0)
    for (double& v : s) v = -v;
  finish_sigma(s, sol);
  sol.residuals = residuals_3d(p, sol.sigma_sq);
  return sol;
}

void write_solution_csv(std::ostream& os, const SourceSet& s, const ModeMatchSolution& sol) {
  os << "ux,uy,uz,R,sigma_sq\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Vec3& u = s.directions[i];
    os << fmt_num(u.x()) << ',' << fmt_num(u.y()) << ',' << fmt_num(u.z()) << ',' << fmt_num(s.radii[i]) << ','
       << fmt_num(sol.sigma_sq[i]) << '\n';
  }
}

nlohmann::json diagnostics_json(const ModeMatchSolution& sol) {
  nlohmann::json j;
  j["condition_number"] = sol.condition_number;
  j["smallest_singular_value"] = sol.smallest_singular_value;
  j["second_singular_value"] = sol.second_singular_value;
  j["clamped_mass"] = sol.clamped_mass;
  j["clamped_count"] = sol.clamped_count;
  j["negativity_warning"] = sol.negativity_warning;
  j["ambiguous"] = sol.ambiguous;
  j["residuals"] = sol.residuals;
  return j;
}

}  // namespace diffusefield
