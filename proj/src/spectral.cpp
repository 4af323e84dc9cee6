#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

#include "bura/error.hpp"
#include "bura/spd_operator.hpp"

namespace bura {

const char* to_string(BoundProvenance p) {
  switch (p) {
    case BoundProvenance::Exact: return "Exact";
    case BoundProvenance::PowerIteration: return "PowerIteration";
    case BoundProvenance::Gershgorin: return "Gershgorin";
    case BoundProvenance::PoincareLowerBound: return "PoincareLowerBound";
  }
  return "Unknown";
}

namespace {

Vector start_vector(int n) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = u(rng);
  return x;
}

}  // namespace

Lambda1Estimate estimate_lambda1(const SpdOperator& A, const Mass& M, double tol, int max_iterations) {
  if (!(tol > 0.0 && tol < 0.25)) throw Error(ErrorCode::InvalidArgument, "tolerance must lie in (0, 0.25)");
  const int n = A.size();
  Vector x = start_vector(n);
  x /= std::sqrt(x.dot(M.apply(x)));

  double prev = std::numeric_limits<double>::infinity();
  double prev_drop = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iterations; ++it) {
    const Vector Mx = M.apply(x);
    const Vector y = shifted_solve(A, 0.0, M, Mx);
    const double yMy = y.dot(M.apply(y));
    const double rq = y.dot(Mx) / yMy;
    x = y / std::sqrt(yMy);

    // The Rayleigh quotient decreases monotonically to lambda_1; the ratio of
    // successive drops estimates the contraction factor of the remaining gap.
    const double drop = prev - rq;
    if (it >= 3) {
      const bool flat = std::abs(drop) <= 4.0 * std::numeric_limits<double>::epsilon() * rq;
      const double rho = drop / prev_drop;
      const bool tail_small = rho > 0.0 && rho < 1.0 && drop * rho / (1.0 - rho) <= 0.5 * tol * rq;
      if (flat || tail_small) return Lambda1Estimate{rq, rq * (1.0 - 2.0 * tol), it};
    }
    prev_drop = drop;
    prev = rq;
  }
  throw Error(ErrorCode::NotConverged, "inverse power iteration did not settle");
}

Bound estimate_lambdaN(const SpdOperator& A, const Mass& M) {
  const Vector rows = A.abs_row_sums();
  switch (M.kind()) {
    case Mass::Kind::Identity: return Bound{rows.maxCoeff(), BoundProvenance::Gershgorin};
    case Mass::Kind::Diagonal: return Bound{rows.cwiseQuotient(M.diag()).maxCoeff(), BoundProvenance::Gershgorin};
    case Mass::Kind::Full: {
      const double mlow = M.full_operator().gershgorin_lower();
      if (!(mlow > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass matrix is not diagonally dominant");
      return Bound{rows.maxCoeff() / mlow, BoundProvenance::Gershgorin};
    }
  }
  return {};
}

double power_lambdaN(const SpdOperator& A, const Mass& M, int iterations) {
  Vector x = start_vector(A.size());
  double rq = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Vector Ax = A.apply(x);
    Vector y;
    if (M.is_diagonal()) {
      y = Ax.cwiseQuotient(M.diag());
    } else {
      y = shifted_solve(M.full_operator(), 0.0, Mass::identity(A.size()), Ax);
    }
    rq = y.dot(A.apply(y)) / y.dot(M.apply(y));
    x = y / y.norm();
  }
  return rq;
}

Vector dense_fractional_apply(const Eigen::MatrixXd& A, const Eigen::MatrixXd* M, double alpha, const Vector& rhs) {
  const Eigen::Index n = A.rows();
  if (n > kDenseOracleLimit) {
    throw Error(ErrorCode::DimensionTooLarge, "dense oracle limited to N <= " + std::to_string(kDenseOracleLimit));
  }
  if (rhs.size() != n || (M && M->rows() != n)) throw Error(ErrorCode::LengthMismatch, "dimension mismatch");

  Eigen::MatrixXd V;
  Vector w;
  if (M) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, *M);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "generalized eigensolve failed");
    V = es.eigenvectors();
    w = es.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "eigensolve failed");
    V = es.eigenvectors();
    w = es.eigenvalues();
  }
  if (!(w.minCoeff() > 0.0)) throw Error(ErrorCode::InvalidArgument, "matrix is not positive definite");
  const Vector coef = (V.transpose() * rhs).cwiseProduct(w.array().pow(-alpha).matrix());
  return V * coef;
}

}  // namespace bura
