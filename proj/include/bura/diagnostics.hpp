#pragma once

#include <optional>
#include <string>

#include "bura/solvers.hpp"
#include "bura/spd_operator.hpp"

namespace bura {

// Entrywise summary of M A^alpha with A = M^{-1} S.
struct MmatrixReport {
  int dimension = 0;
  double alpha = 0.0;
  double min_row_sum = 0.0;
  double max_row_sum = 0.0;
  double max_off_diagonal = 0.0;
  double min_diagonal = 0.0;
  bool is_m_matrix = false;  // max_off_diagonal <= 0 and all diagonal entries > 0
};

// Dense path through the generalized eigendecomposition S psi = lambda M psi.
MmatrixReport mmatrix_study(const Eigen::MatrixXd& S, const Eigen::MatrixXd& M, double alpha);

// Several exponents sharing one eigendecomposition.
std::vector<MmatrixReport> mmatrix_study(const Eigen::MatrixXd& S, const Eigen::MatrixXd& M,
                                         const std::vector<double>& alphas);

// Euclidean norms, or weighted L2 norms when `weight` is given (e.g. mesh
// trapezoid weights). linf_rel is ||w - ref||_inf divided by the (weighted) L2
// norm of ref when weights are given, and by ||ref||_inf otherwise.
ErrorNorms error_norms(const Vector& w, const Vector& ref, const Vector* weight = nullptr);

}  // namespace bura
