#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "diffusefield/errors.hpp"
#include "diffusefield/specfun.hpp"

namespace diffusefield::specfun {
namespace {

struct JacobiValue {
  double p;
  double dp;
};

// P_n^(a,b)(x) and its derivative by the three-term recurrence.
JacobiValue jacobi_with_derivative(int n, double a, double b, double x) {
  double p0 = 1.0;
  if (n == 0) return {1.0, 0.0};
  double p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
  for (int k = 2; k <= n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  const double s = 2.0 * n + a + b;
  const double dp =
      (n * ((a - b) - s * x) * p1 + 2.0 * (n + a) * (n + b) * p0) / (s * (1.0 - x * x));
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("gauss_jacobi: need at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw DomainError("gauss_jacobi: weight exponents must exceed -1");

  const double ab = alpha + beta;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  diag(0) = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
  }
  if (n > 1) {
    sub(0) = std::sqrt(4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0)));
    for (int k = 2; k < n; ++k) {
      const double s = 2.0 * k + ab;
      sub(k - 1) = std::sqrt(4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                             (s * s * (s + 1.0) * (s - 1.0)));
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("gauss_jacobi: tridiagonal eigenvalue iteration failed");

  const double log_c = (ab + 1.0) * std::log(2.0) + std::lgamma(n + alpha + 1.0) +
                       std::lgamma(n + beta + 1.0) - std::lgamma(n + ab + 1.0) -
                       std::lgamma(n + 1.0);
  const double cn = std::exp(log_c);

  QuadratureRule rule;
  rule.alpha_exp = alpha;
  rule.beta_exp = beta;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    JacobiValue v{};
    for (int it = 0; it < 3; ++it) {
      v = jacobi_with_derivative(n, alpha, beta, x);
      const double dx = v.p / v.dp;
      const double xn = x - dx;
      if (!(xn > -1.0 && xn < 1.0)) break;
      x = xn;
      if (std::abs(dx) < 1e-16) break;
    }
    v = jacobi_with_derivative(n, alpha, beta, x);
    rule.nodes[i] = x;
    rule.weights[i] = cn / ((1.0 - x * x) * v.dp * v.dp);
  }
  return rule;
}

std::shared_ptr<const QuadratureRule> cached_gauss_jacobi(int n, double alpha, double beta) {
  using Key = std::tuple<int, double, double>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const QuadratureRule>> cache;

  const Key key{n, alpha, beta};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule>(gauss_jacobi(n, alpha, beta));
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() > 512) cache.clear();
  return cache.emplace(key, std::move(rule)).first->second;
}

}  // namespace diffusefield::specfun
