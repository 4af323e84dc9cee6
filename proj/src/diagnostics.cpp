#include "bura/diagnostics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

#include "bura/error.hpp"

namespace bura {

std::vector<MmatrixReport> mmatrix_study(const Eigen::MatrixXd& S, const Eigen::MatrixXd& M,
                                         const std::vector<double>& alphas) {
  const Eigen::Index n = S.rows();
  if (n > kDenseOracleLimit) {
    throw Error(ErrorCode::DimensionTooLarge, "dense study limited to N <= " + std::to_string(kDenseOracleLimit));
  }
  if (S.cols() != n || M.rows() != n || M.cols() != n) throw Error(ErrorCode::LengthMismatch, "dimension mismatch");

  // With V^T M V = I: A = V diag(lambda) V^T M, hence M A^alpha = (M V) diag(lambda^alpha) (M V)^T.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(S, M);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "generalized eigensolve failed");
  const Eigen::MatrixXd MV = M * es.eigenvectors();
  const Vector lam = es.eigenvalues();

  std::vector<MmatrixReport> out;
  for (double alpha : alphas) {
    const Eigen::MatrixXd B = MV * lam.array().pow(alpha).matrix().asDiagonal() * MV.transpose();
    MmatrixReport r;
    r.dimension = static_cast<int>(n);
    r.alpha = alpha;
    const Vector rows = B.rowwise().sum();
    r.min_row_sum = rows.minCoeff();
    r.max_row_sum = rows.maxCoeff();
    r.min_diagonal = B.diagonal().minCoeff();
    r.max_off_diagonal = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i != j) r.max_off_diagonal = std::max(r.max_off_diagonal, B(i, j));
      }
    }
    r.is_m_matrix = r.max_off_diagonal <= 0.0 && r.min_diagonal > 0.0;
    out.push_back(r);
  }
  return out;
}

MmatrixReport mmatrix_study(const Eigen::MatrixXd& S, const Eigen::MatrixXd& M, double alpha) {
  return mmatrix_study(S, M, std::vector<double>{alpha}).front();
}

ErrorNorms error_norms(const Vector& w, const Vector& ref, const Vector* weight) {
  if (w.size() != ref.size() || (weight && weight->size() != ref.size())) {
    throw Error(ErrorCode::LengthMismatch, "vectors differ in length");
  }
  const Vector e = w - ref;
  ErrorNorms n;
  double ref_l2;
  if (weight) {
    n.l2_abs = std::sqrt(weight->dot(e.cwiseAbs2()));
    ref_l2 = std::sqrt(weight->dot(ref.cwiseAbs2()));
  } else {
    n.l2_abs = e.norm();
    ref_l2 = ref.norm();
  }
  const double ref_scale = weight ? ref_l2 : (ref.size() ? ref.cwiseAbs().maxCoeff() : 0.0);
  if (!(ref_l2 > 0.0) || !(ref_scale > 0.0)) throw Error(ErrorCode::ZeroReference, "reference vector is zero");
  n.l2_rel = n.l2_abs / ref_l2;
  n.linf_rel = (e.size() ? e.cwiseAbs().maxCoeff() : 0.0) / ref_scale;
  return n;
}

}  // namespace bura
