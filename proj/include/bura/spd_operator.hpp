#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <optional>
#include <string>
#include <vector>

namespace bura {

using Vector = Eigen::VectorXd;
using CsrMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class Storage { Tridiagonal, Csr, Dense };

const char* to_string(Storage s);

// Symmetric matrix assumed positive definite. Tridiagonal storage keeps the main
// diagonal and the (symmetric) first off-diagonal; block-tridiagonal stencils
// are stored as CSR.
class SpdOperator {
 public:
  SpdOperator() = default;

  static SpdOperator tridiagonal(Vector diag, Vector off);
  static SpdOperator csr(CsrMatrix m);
  static SpdOperator dense(Eigen::MatrixXd m);
  static SpdOperator diagonal(const Vector& d);
  static SpdOperator identity(int n);

  Storage storage() const { return storage_; }
  int size() const { return n_; }

  Vector apply(const Vector& x) const;
  Vector diagonal_entries() const;
  Eigen::MatrixXd to_dense() const;
  CsrMatrix to_csr() const;

  // Row sums of absolute values.
  Vector abs_row_sums() const;
  // Gershgorin lower bound min_i (a_ii - sum_{j != i} |a_ij|).
  double gershgorin_lower() const;

  const Vector& tri_diag() const { return diag_; }
  const Vector& tri_off() const { return off_; }
  const CsrMatrix& csr_matrix() const { return csr_; }
  const Eigen::MatrixXd& dense_matrix() const { return dense_; }

  // A + c B with the storage of the wider operand.
  static SpdOperator combine(const SpdOperator& a, double c, const SpdOperator& b);

 private:
  Storage storage_ = Storage::Dense;
  int n_ = 0;
  Vector diag_;
  Vector off_;
  CsrMatrix csr_;
  Eigen::MatrixXd dense_;
};

// Mass matrix of a generalized problem: identity, positive diagonal, or a full
// SPD operator (consistent finite element mass).
class Mass {
 public:
  static Mass identity(int n);
  static Mass diagonal(Vector d);
  static Mass full(SpdOperator m);

  enum class Kind { Identity, Diagonal, Full };
  Kind kind() const { return kind_; }
  int size() const { return n_; }
  bool is_diagonal() const { return kind_ != Kind::Full; }

  Vector apply(const Vector& x) const;
  // Diagonal entries (ones for the identity). Only valid when is_diagonal().
  const Vector& diag() const { return diag_; }
  const SpdOperator& full_operator() const { return full_; }
  SpdOperator as_operator() const;

 private:
  Kind kind_ = Kind::Identity;
  int n_ = 0;
  Vector diag_;
  SpdOperator full_;
};

struct SolveOptions {
  double tol = 1e-12;
  bool jacobi = false;
  // Smallest eigenvalue of the unshifted pencil, when known; used for the CG
  // iteration cap 10*sqrt(cond).
  std::optional<double> lambda1;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

// Solves (A + c M) x = rhs. Tridiagonal systems use an O(N) LDL^T sweep;
// dense systems a Cholesky factorization; CSR systems conjugate gradients.
Vector shifted_solve(const SpdOperator& A, double c, const Mass& M, const Vector& rhs,
                     const SolveOptions& opts = {}, SolveStats* stats = nullptr);

// Thomas algorithm for a symmetric tridiagonal system.
Vector tridiagonal_solve(const Vector& diag, const Vector& off, const Vector& rhs);

enum class BoundProvenance { Exact, PowerIteration, Gershgorin, PoincareLowerBound };

const char* to_string(BoundProvenance p);

struct Bound {
  double value = 0.0;
  BoundProvenance provenance = BoundProvenance::Exact;
};

struct SpectralBounds {
  std::optional<Bound> lambda1;
  std::optional<Bound> lambdaN;
};

struct Lambda1Estimate {
  double rayleigh = 0.0;  // converged Rayleigh quotient, >= lambda_1
  double delta = 0.0;     // rayleigh * (1 - 2 tol), safe rescaling value
  int iterations = 0;
};

// Inverse power iteration on the pencil (A, M).
Lambda1Estimate estimate_lambda1(const SpdOperator& A, const Mass& M, double tol = 1e-3,
                                 int max_iterations = 500);

// Guaranteed upper bound for the largest eigenvalue of the pencil (A, M).
Bound estimate_lambdaN(const SpdOperator& A, const Mass& M);

// Power-iteration estimate of lambda_N (a lower estimate, not a bound).
double power_lambdaN(const SpdOperator& A, const Mass& M, int iterations = 200);

constexpr int kDenseOracleLimit = 5000;

// Exact A^{-alpha} rhs, or (M^{-1} A)^{-alpha} M^{-1} rhs for a generalized problem.
Vector dense_fractional_apply(const Eigen::MatrixXd& A, const Eigen::MatrixXd* M, double alpha,
                              const Vector& rhs);

void save_matrix_market(const SpdOperator& A, const std::string& path);
SpdOperator load_matrix_market(const std::string& path);
void save_vector(const Vector& v, const std::string& path);
Vector load_vector(const std::string& path);

}  // namespace bura
