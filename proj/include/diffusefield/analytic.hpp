#pragma once

#include <iosfwd>
#include <vector>

namespace diffusefield::analytic {

// Unit circle (D=2) or unit sphere (D=3) of sources with decay 1/r^beta,
// observer displaced by x along the first axis.
struct ShellCase {
  int dim = 3;
  double beta = 1.0;
  double x = 0.0;

  void validate() const;
};

struct ShellMetrics {
  double w = 1.0;
  double Ix = 0.0;
  double psi = 1.0;
};

double shell_w(const ShellCase& c);
double shell_intensity(const ShellCase& c);
double shell_psi(const ShellCase& c);
ShellMetrics shell_metrics(const ShellCase& c);

enum class FlatnessFamily { energy, intensity_potential };

// ∫ C_n^(nu)(z) (1-z²)^((D-3)/2) dz for n = 0..N with nu = beta (energy)
// or nu = beta - 1/2 (intensity potential).
std::vector<double> gegenbauer_flatness(int dim, double beta, int max_degree, FlatnessFamily family);

struct SweetRadius {
  int degree = 0;        // N
  int design_strength;   // t = 2N + 1
  int circle_count;      // L = 2N + 2
  double exponential;    // e^(-1/(N+1))
  double rational;       // (L-2)/L = N/(N+1)
  // Holds only if the RMS of C_{N+1} over the layout is close to one.
  bool assumes_unit_rms = true;
};

SweetRadius sweet_radius(int degree);

struct SweepRow {
  int dim;
  double beta;
  double x;
  ShellMetrics m;
};

std::vector<SweepRow> analytic_sweep(const std::vector<int>& dims, const std::vector<double>& betas,
                                     const std::vector<double>& xs);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace diffusefield::analytic
