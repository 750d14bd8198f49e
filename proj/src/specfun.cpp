#include "diffusefield/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "diffusefield/errors.hpp"

namespace diffusefield::specfun {
namespace {

constexpr int kStartNodes = 16;
constexpr int kMaxNodes = 8192;
constexpr double kEarlyTol = 1e-11;
constexpr double kAcceptTol = 1e-10;

void check_hyp2f1(const HypergeomParams& p) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c) || !std::isfinite(p.z))
    throw DomainError("hyp2f1: non-finite parameter");
  if (!(p.b > 0.0)) throw DomainError("hyp2f1: b must be positive");
  if (!(p.c > p.b)) throw DomainError("hyp2f1: c must exceed b");
  if (!(p.z < 1.0)) throw DomainError("hyp2f1: z must be below 1");
}

}  // namespace

double hyp2f1(const HypergeomParams& p) {
  check_hyp2f1(p);
  if (p.z == 0.0 || p.a == 0.0) return 1.0;

  const double ja = p.c - p.b - 1.0;
  const double jb = p.b - 1.0;
  const double pref = std::exp(std::lgamma(p.c) - std::lgamma(p.b) - std::lgamma(p.c - p.b)) *
                      std::pow(2.0, 1.0 - p.c);
  auto integrand = [&](double s) { return std::pow(1.0 - 0.5 * p.z * (1.0 + s), -p.a); };

  double prev = pref * cached_gauss_jacobi(kStartNodes, ja, jb)->integrate(integrand);
  // Large rules carry ~1e-12 relative rounding in their weights, so once the
  // doubling differences start growing again the best value so far is kept.
  double best = prev;
  double best_diff = std::numeric_limits<double>::infinity();
  for (int n = 2 * kStartNodes; n <= kMaxNodes; n *= 2) {
    const double cur = pref * cached_gauss_jacobi(n, ja, jb)->integrate(integrand);
    const double diff = std::abs(cur - prev);
    if (diff <= kEarlyTol * std::abs(cur)) return cur;
    if (diff < best_diff) {
      best_diff = diff;
      best = cur;
    } else if (diff > 4.0 * best_diff && best_diff <= kAcceptTol * std::abs(best)) {
      return best;
    }
    prev = cur;
  }
  // The doubling difference bounds the error of the coarser rule.
  if (best_diff <= kAcceptTol * std::abs(best)) return best;
  throw ConvergenceError("hyp2f1: node doubling did not stabilize at z=" + std::to_string(p.z));
}

double hyp2f1_series(const HypergeomParams& p) {
  if (!(std::abs(p.z) < 1.0)) throw DomainError("hyp2f1_series: |z| must be below 1");
  if (p.c <= 0.0 && std::floor(p.c) == p.c)
    throw DomainError("hyp2f1_series: c is a nonpositive integer");
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 100000; ++k) {
    term *= (p.a + k) * (p.b + k) / ((p.c + k) * (k + 1.0)) * p.z;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
  }
  throw ConvergenceError("hyp2f1_series: series did not converge");
}

std::vector<double> gegenbauer_eval(const GegenbauerFamily& family, double z) {
  const double nu = family.nu;
  const int N = family.max_degree;
  if (!(nu > -0.5)) throw DomainError("gegenbauer_eval: nu must exceed -1/2");
  if (N < 0) throw DomainError("gegenbauer_eval: negative degree");
  if (!(std::abs(z) <= 1.0 + 1e-12)) throw DomainError("gegenbauer_eval: |z| > 1");

  if (nu == 0.0) {
    std::vector<double> c = chebyshev_t(N, z);
    for (int n = 1; n <= N; ++n) c[n] *= 2.0 / n;
    return c;
  }
  std::vector<double> c(N + 1);
  c[0] = 1.0;
  if (N >= 1) c[1] = 2.0 * nu * z;
  for (int n = 1; n < N; ++n)
    c[n + 1] = (2.0 * (n + nu) * z * c[n] - (n + 2.0 * nu - 1.0) * c[n - 1]) / (n + 1.0);
  return c;
}

std::vector<double> chebyshev_t(int max_degree, double z) {
  if (max_degree < 0) throw DomainError("chebyshev_t: negative degree");
  std::vector<double> t(max_degree + 1);
  t[0] = 1.0;
  if (max_degree >= 1) t[1] = z;
  for (int n = 1; n < max_degree; ++n) t[n + 1] = 2.0 * z * t[n] - t[n - 1];
  return t;
}

std::vector<double> legendre(int max_degree, double z) {
  if (max_degree < 0) throw DomainError("legendre: negative degree");
  std::vector<double> p(max_degree + 1);
  p[0] = 1.0;
  if (max_degree >= 1) p[1] = z;
  for (int n = 1; n < max_degree; ++n)
    p[n + 1] = ((2.0 * n + 1.0) * z * p[n] - n * p[n - 1]) / (n + 1.0);
  return p;
}

double circ_harm(int m, double phi) {
  const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  if (m == 0) return inv;
  if (m > 0) return inv * std::numbers::sqrt2 * std::cos(m * phi);
  return inv * std::numbers::sqrt2 * std::sin(-m * phi);
}

std::vector<double> real_sph_harm_all(int max_degree, const Vec3& u) {
  const int N = max_degree;
  if (N < 0) throw DomainError("real_sph_harm_all: negative degree");
  if (std::abs(u.norm() - 1.0) > 1e-12) throw DomainError("real_sph_harm: direction not unit");

  const double x = std::clamp(u.z(), -1.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  const double phi = std::atan2(u.y(), u.x());

  // Pbar(n, m), orthonormal on [-1, 1], stored row-wise with m <= n.
  std::vector<double> pbar((N + 1) * (N + 2) / 2);
  auto at = [](int n, int m) { return n * (n + 1) / 2 + m; };
  pbar[0] = std::sqrt(0.5);
  for (int m = 1; m <= N; ++m)
    pbar[at(m, m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * pbar[at(m - 1, m - 1)];
  for (int m = 0; m < N; ++m) pbar[at(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * pbar[at(m, m)];
  for (int m = 0; m <= N; ++m) {
    for (int n = m + 2; n <= N; ++n) {
      const double nn = n;
      const double a = std::sqrt((4.0 * nn * nn - 1.0) / (nn * nn - m * m));
      const double b = std::sqrt(((nn - 1.0) * (nn - 1.0) - m * m) / (4.0 * (nn - 1.0) * (nn - 1.0) - 1.0));
      pbar[at(n, m)] = a * (x * pbar[at(n - 1, m)] - b * pbar[at(n - 2, m)]);
    }
  }

  std::vector<double> y((N + 1) * (N + 1));
  for (int m = -N; m <= N; ++m) {
    const double phi_m = circ_harm(m, phi);
    const int am = std::abs(m);
    for (int n = am; n <= N; ++n) y[acn_index(n, m)] = phi_m * pbar[at(n, am)];
  }
  return y;
}

double real_sph_harm(int n, int m, const Vec3& u) {
  if (n < 0 || std::abs(m) > n) throw DomainError("real_sph_harm: need |m| <= n");
  return real_sph_harm_all(n, u)[acn_index(n, m)];
}

double unit_sphere_area(int dim) {
  if (dim < 1) throw DomainError("unit_sphere_area: dimension must be positive");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

}  // namespace diffusefield::specfun
