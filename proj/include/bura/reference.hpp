#pragma once

#include <vector>

#include "bura/discretize.hpp"

namespace bura {

// A^{-alpha} applied to the sine samples on the uniform square grid; the data
// are a discrete eigenvector with eigenvalue 8 sin^2(pi h) / h^2.
Vector exact_discrete_sine(const Grid2D& grid, double alpha);

// A^{-alpha} f for the 5-point Laplacian on the unit square via the discrete
// sine transform in each direction.
Vector exact_discrete_dst(const Grid2D& grid, double alpha, const Vector& f);

enum class SeriesRule { ConstantRhs, DeltaRhs };

// Eigen-expansion of the continuous solution of the 1D fractional problem on
// (0,1) with psi_m(x) = sqrt(2) sin(m pi x); only odd modes m = 2i+1 appear.
class SeriesSolution {
 public:
  SeriesSolution(double alpha, SeriesRule rule, int terms = 10000);

  double alpha() const { return alpha_; }
  SeriesRule rule() const { return rule_; }
  int terms() const { return terms_; }

  // Coefficient of psi_{2i+1}.
  double coefficient(int i) const { return coef_[i]; }
  // Coefficient of psi_m for any m >= 1 (zero for even m).
  double mode_coefficient(int m) const;

  double eval(double x) const;
  std::vector<double> eval(const std::vector<double>& xs) const;
  // Values at x_j = j / intervals, j = 0..intervals, through a sine transform.
  std::vector<double> sample_uniform(int intervals) const;

  // L2(0,1) norm of the untruncated solution.
  double l2_norm() const;
  // L2(0,1) norm of the discarded modes i >= terms.
  double tail_bound() const;

 private:
  double alpha_;
  SeriesRule rule_;
  int terms_;
  double scale_;     // coefficient = scale_ * sign_i * (2i+1)^{-power_}
  double power_;
  std::vector<double> coef_;
};

inline std::vector<double> series_eval(const SeriesSolution& s, const std::vector<double>& xs) { return s.eval(xs); }
inline double series_l2_norm(const SeriesSolution& s) { return s.l2_norm(); }

// exp(-t A) applied to g(x) = sign(x - 1/2) for the Dirichlet Laplacian on
// (0,1): heat kernel images for small t, sine modes for large t.
double square_wave_heat(double t, double x);

// Continuous solution A^{-alpha} f of the checkerboard problem on the unit
// square, f(x,y) = g(x) g(y), at the points (xs[i], ys[j]). Evaluated from
// A^{-alpha} = Gamma(alpha)^{-1} int_0^inf t^{alpha-1} exp(-t A) dt, which
// separates into products of 1D heat solutions.
Eigen::MatrixXd checkerboard_exact(double alpha, const std::vector<double>& xs, const std::vector<double>& ys);

// sum_{i >= start} (2i+1)^{-p} for p > 1.
double odd_power_tail(double p, long start);

// ||w_h - u_h|| / ||u|| where w_h interpolates the nodal values `w` (interior
// nodes of `mesh`, zero at the end points) piecewise linearly and u_h samples
// the series on the uniform grid with `fine_intervals` segments; trapezoid rule.
double relative_l2_vs_fine_grid(const Mesh1D& mesh, const Vector& w, const SeriesSolution& s,
                                int fine_intervals = 1 << 18);

// Same with precomputed fine-grid samples of the series.
double relative_l2_vs_samples(const Mesh1D& mesh, const Vector& w, const std::vector<double>& u_fine, double u_norm);

}  // namespace bura
