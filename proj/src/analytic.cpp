#include "diffusefield/analytic.hpp"

#include <cmath>
#include <ostream>

#include "diffusefield/csv.hpp"
#include "diffusefield/errors.hpp"
#include "diffusefield/specfun.hpp"

namespace diffusefield::analytic {
namespace {

using specfun::hyp2f1;

// w and I_x at x >= 0.
ShellMetrics shell_nonneg(int D, double beta, double x) {
  ShellMetrics m;
  if (x == 0.0) return m;
  const double z = 4.0 * x / ((1.0 + x) * (1.0 + x));
  const double h = 0.5 * (D - 1.0);
  const double scale = std::pow(1.0 + x, -2.0 * beta);
  const double f_w = hyp2f1({beta, h, D - 1.0, z});
  const double f_i1 = hyp2f1({beta + 0.5, h, D - 1.0, z});
  const double f_i2 = hyp2f1({beta + 0.5, h + 1.0, static_cast<double>(D), z});
  m.w = f_w * scale;
  m.Ix = scale * (f_i1 - f_i2 / (1.0 + x));
  m.psi = 1.0 - std::abs(f_i1 / f_w - f_i2 / ((1.0 + x) * f_w));
  return m;
}

}  // namespace

void ShellCase::validate() const {
  if (dim != 2 && dim != 3) throw DomainError("shell: dim must be 2 or 3");
  if (!(beta >= -1.25 && beta <= 1.25)) throw DomainError("shell: beta must lie in [-1.25, 1.25]");
  if (!(std::abs(x) < 1.0)) throw DomainError("shell: |x| must be below 1");
}

ShellMetrics shell_metrics(const ShellCase& c) {
  c.validate();
  ShellMetrics m = shell_nonneg(c.dim, c.beta, std::abs(c.x));
  if (c.x < 0.0) m.Ix = -m.Ix;
  return m;
}

double shell_w(const ShellCase& c) { return shell_metrics(c).w; }
double shell_intensity(const ShellCase& c) { return shell_metrics(c).Ix; }
double shell_psi(const ShellCase& c) { return shell_metrics(c).psi; }

std::vector<double> gegenbauer_flatness(int dim, double beta, int max_degree, FlatnessFamily family) {
  if (dim != 2 && dim != 3) throw DomainError("gegenbauer_flatness: dim must be 2 or 3");
  if (max_degree < 0) throw DomainError("gegenbauer_flatness: negative degree");
  const double e = 0.5 * (dim - 3.0);
  const auto rule = specfun::cached_gauss_jacobi(max_degree + 2, e, e);
  const double nu = family == FlatnessFamily::energy ? beta : beta - 0.5;

  std::vector<double> out(max_degree + 1, 0.0);
  if (family == FlatnessFamily::energy && beta == 0.0) {
    // r^0 = 1: only the constant term survives.
    out[0] = rule->integrate([](double) { return 1.0; });
    return out;
  }
  for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
    const auto c = specfun::gegenbauer_eval({nu, max_degree}, rule->nodes[i]);
    for (int n = 0; n <= max_degree; ++n) out[n] += rule->weights[i] * c[n];
  }
  return out;
}

SweetRadius sweet_radius(int degree) {
  if (degree < 0) throw DomainError("sweet_radius: degree must be nonnegative");
  SweetRadius s;
  s.degree = degree;
  s.design_strength = 2 * degree + 1;
  s.circle_count = 2 * degree + 2;
  s.exponential = std::exp(-1.0 / (degree + 1.0));
  s.rational = static_cast<double>(degree) / (degree + 1.0);
  return s;
}

std::vector<SweepRow> analytic_sweep(const std::vector<int>& dims, const std::vector<double>& betas,
                                     const std::vector<double>& xs) {
  std::vector<SweepRow> rows;
  for (int d : dims)
    for (double b : betas)
      for (double x : xs) rows.push_back({d, b, x, shell_metrics({d, b, x})});
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "D,beta,x,w,Ix,psi\n";
  for (const auto& r : rows)
    os << r.dim << ',' << fmt_num(r.beta) << ',' << fmt_num(r.x) << ',' << fmt_num(r.m.w) << ','
       << fmt_num(r.m.Ix) << ',' << fmt_num(r.m.psi) << '\n';
}

}  // namespace diffusefield::analytic
