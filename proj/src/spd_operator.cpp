#include "bura/spd_operator.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <unsupported/Eigen/SparseExtra>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bura/error.hpp"

namespace bura {

const char* to_string(Storage s) {
  switch (s) {
    case Storage::Tridiagonal: return "Tridiagonal";
    case Storage::Csr: return "CSR";
    case Storage::Dense: return "Dense";
  }
  return "Unknown";
}

SpdOperator SpdOperator::tridiagonal(Vector diag, Vector off) {
  if (diag.size() == 0 || off.size() != diag.size() - 1) {
    throw Error(ErrorCode::LengthMismatch, "off-diagonal must have N-1 entries");
  }
  SpdOperator op;
  op.storage_ = Storage::Tridiagonal;
  op.n_ = static_cast<int>(diag.size());
  op.diag_ = std::move(diag);
  op.off_ = std::move(off);
  return op;
}

SpdOperator SpdOperator::csr(CsrMatrix m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::LengthMismatch, "matrix must be square");
  SpdOperator op;
  op.storage_ = Storage::Csr;
  op.n_ = static_cast<int>(m.rows());
  m.makeCompressed();
  op.csr_ = std::move(m);
  return op;
}

SpdOperator SpdOperator::dense(Eigen::MatrixXd m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::LengthMismatch, "matrix must be square");
  SpdOperator op;
  op.storage_ = Storage::Dense;
  op.n_ = static_cast<int>(m.rows());
  op.dense_ = std::move(m);
  return op;
}

SpdOperator SpdOperator::diagonal(const Vector& d) {
  return tridiagonal(d, Vector::Zero(std::max<Eigen::Index>(d.size() - 1, 0)));
}

SpdOperator SpdOperator::identity(int n) { return diagonal(Vector::Ones(n)); }

Vector SpdOperator::apply(const Vector& x) const {
  if (x.size() != n_) throw Error(ErrorCode::LengthMismatch, "operand length differs from operator size");
  switch (storage_) {
    case Storage::Tridiagonal: {
      Vector y = diag_.cwiseProduct(x);
      for (int i = 0; i + 1 < n_; ++i) {
        y(i) += off_(i) * x(i + 1);
        y(i + 1) += off_(i) * x(i);
      }
      return y;
    }
    case Storage::Csr: return csr_ * x;
    case Storage::Dense: return dense_ * x;
  }
  return {};
}

Vector SpdOperator::diagonal_entries() const {
  switch (storage_) {
    case Storage::Tridiagonal: return diag_;
    case Storage::Csr: return csr_.diagonal();
    case Storage::Dense: return dense_.diagonal();
  }
  return {};
}

Eigen::MatrixXd SpdOperator::to_dense() const {
  switch (storage_) {
    case Storage::Tridiagonal: {
      Eigen::MatrixXd m = diag_.asDiagonal();
      for (int i = 0; i + 1 < n_; ++i) {
        m(i, i + 1) = off_(i);
        m(i + 1, i) = off_(i);
      }
      return m;
    }
    case Storage::Csr: return Eigen::MatrixXd(csr_);
    case Storage::Dense: return dense_;
  }
  return {};
}

CsrMatrix SpdOperator::to_csr() const {
  switch (storage_) {
    case Storage::Tridiagonal: {
      std::vector<Eigen::Triplet<double>> trips;
      trips.reserve(3 * n_);
      for (int i = 0; i < n_; ++i) {
        trips.emplace_back(i, i, diag_(i));
        if (i + 1 < n_ && off_(i) != 0.0) {
          trips.emplace_back(i, i + 1, off_(i));
          trips.emplace_back(i + 1, i, off_(i));
        }
      }
      CsrMatrix m(n_, n_);
      m.setFromTriplets(trips.begin(), trips.end());
      return m;
    }
    case Storage::Csr: return csr_;
    case Storage::Dense: return dense_.sparseView();
  }
  return {};
}

Vector SpdOperator::abs_row_sums() const {
  switch (storage_) {
    case Storage::Tridiagonal: {
      Vector s = diag_.cwiseAbs();
      for (int i = 0; i + 1 < n_; ++i) {
        s(i) += std::abs(off_(i));
        s(i + 1) += std::abs(off_(i));
      }
      return s;
    }
    case Storage::Csr: {
      Vector s = Vector::Zero(n_);
      for (int i = 0; i < n_; ++i) {
        for (CsrMatrix::InnerIterator it(csr_, i); it; ++it) s(i) += std::abs(it.value());
      }
      return s;
    }
    case Storage::Dense: return dense_.cwiseAbs().rowwise().sum();
  }
  return {};
}

double SpdOperator::gershgorin_lower() const {
  const Vector d = diagonal_entries();
  const Vector s = abs_row_sums();
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_; ++i) lo = std::min(lo, 2.0 * d(i) - s(i));
  return lo;
}

SpdOperator SpdOperator::combine(const SpdOperator& a, double c, const SpdOperator& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "operator sizes differ");
  if (a.storage_ == Storage::Tridiagonal && b.storage_ == Storage::Tridiagonal) {
    return tridiagonal(a.diag_ + c * b.diag_, a.off_ + c * b.off_);
  }
  if (a.storage_ == Storage::Dense || b.storage_ == Storage::Dense) {
    return dense(a.to_dense() + c * b.to_dense());
  }
  CsrMatrix m = a.to_csr() + c * b.to_csr();
  return csr(std::move(m));
}

Mass Mass::identity(int n) {
  Mass m;
  m.kind_ = Kind::Identity;
  m.n_ = n;
  m.diag_ = Vector::Ones(n);
  return m;
}

Mass Mass::diagonal(Vector d) {
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d(i) > 0.0)) throw Error(ErrorCode::InvalidArgument, "diagonal mass must be positive");
  }
  Mass m;
  m.kind_ = Kind::Diagonal;
  m.n_ = static_cast<int>(d.size());
  m.diag_ = std::move(d);
  return m;
}

Mass Mass::full(SpdOperator op) {
  Mass m;
  m.kind_ = Kind::Full;
  m.n_ = op.size();
  m.full_ = std::move(op);
  return m;
}

Vector Mass::apply(const Vector& x) const {
  switch (kind_) {
    case Kind::Identity: return x;
    case Kind::Diagonal: return diag_.cwiseProduct(x);
    case Kind::Full: return full_.apply(x);
  }
  return {};
}

SpdOperator Mass::as_operator() const {
  return kind_ == Kind::Full ? full_ : SpdOperator::diagonal(diag_);
}

Vector tridiagonal_solve(const Vector& diag, const Vector& off, const Vector& rhs) {
  const Eigen::Index n = diag.size();
  if (rhs.size() != n) throw Error(ErrorCode::LengthMismatch, "rhs length differs from matrix size");
  Vector d(n);
  Vector y(n);
  d(0) = diag(0);
  if (!(d(0) > 0.0)) throw Error(ErrorCode::NonPositivePivot, "pivot 0 is not positive");
  y(0) = rhs(0);
  for (Eigen::Index i = 1; i < n; ++i) {
    const double l = off(i - 1) / d(i - 1);
    d(i) = diag(i) - l * off(i - 1);
    if (!(d(i) > 0.0)) throw Error(ErrorCode::NonPositivePivot, "pivot " + std::to_string(i) + " is not positive");
    y(i) = rhs(i) - l * y(i - 1);
  }
  Vector x(n);
  x(n - 1) = y(n - 1) / d(n - 1);
  for (Eigen::Index i = n - 2; i >= 0; --i) x(i) = (y(i) - off(i) * x(i + 1)) / d(i);
  return x;
}

namespace {

template <class Precond>
Vector run_cg(const CsrMatrix& K, const Vector& rhs, double tol, int cap, SolveStats* stats) {
  Eigen::ConjugateGradient<CsrMatrix, Eigen::Lower | Eigen::Upper, Precond> cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(cap);
  cg.compute(K);
  Vector x = cg.solve(rhs);
  if (cg.info() != Eigen::Success) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "CG stopped after %ld iterations at relative residual %.3e (cap %d)",
                  static_cast<long>(cg.iterations()), cg.error(), cap);
    throw Error(ErrorCode::NotConverged, buf);
  }
  if (stats) stats->iterations = static_cast<int>(cg.iterations());
  return x;
}

}  // namespace

Vector shifted_solve(const SpdOperator& A, double c, const Mass& M, const Vector& rhs, const SolveOptions& opts,
                     SolveStats* stats) {
  if (rhs.size() != A.size() || M.size() != A.size()) {
    throw Error(ErrorCode::LengthMismatch, "operator, mass and rhs sizes differ");
  }
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    if (stats) *stats = SolveStats{};
    return Vector::Zero(rhs.size());
  }

  const SpdOperator K = c == 0.0 ? A : SpdOperator::combine(A, c, M.as_operator());
  Vector x;
  SolveStats local;
  switch (K.storage()) {
    case Storage::Tridiagonal:
      x = tridiagonal_solve(K.tri_diag(), K.tri_off(), rhs);
      break;
    case Storage::Dense: {
      Eigen::LLT<Eigen::MatrixXd> llt(K.dense_matrix());
      if (llt.info() != Eigen::Success) throw Error(ErrorCode::NonPositivePivot, "Cholesky factorization failed");
      x = llt.solve(rhs);
      break;
    }
    case Storage::Csr: {
      int cap = std::max(100, 10 * K.size());
      if (opts.lambda1) {
        const double upper = K.abs_row_sums().maxCoeff();
        const double mlow = M.kind() == Mass::Kind::Full ? M.full_operator().gershgorin_lower() : M.diag().minCoeff();
        const double lower = (*opts.lambda1 + c) * mlow;
        if (lower > 0.0) {
          // 10 sqrt(kappa), raised to the classical CG estimate for the residual
          // reduction when tol is tight and kappa small.
          const double sk = std::sqrt(upper / lower);
          const double theory = 0.5 * sk * std::log(2.0 * sk / opts.tol) + 20.0;
          cap = static_cast<int>(std::ceil(std::max(10.0 * sk, theory)));
        }
      }
      if (opts.jacobi) {
        x = run_cg<Eigen::DiagonalPreconditioner<double>>(K.csr_matrix(), rhs, opts.tol, cap, &local);
      } else {
        x = run_cg<Eigen::IdentityPreconditioner>(K.csr_matrix(), rhs, opts.tol, cap, &local);
      }
      break;
    }
  }
  if (stats) {
    local.relative_residual = (K.apply(x) - rhs).norm() / bnorm;
    *stats = local;
  }
  return x;
}

void save_matrix_market(const SpdOperator& A, const std::string& path) {
  if (!Eigen::saveMarket(A.to_csr(), path)) throw Error(ErrorCode::IoError, "cannot write " + path);
}

SpdOperator load_matrix_market(const std::string& path) {
  Eigen::SparseMatrix<double> m;
  if (!Eigen::loadMarket(m, path)) throw Error(ErrorCode::IoError, "cannot read " + path);
  CsrMatrix r = m;
  bool banded = true;
  for (int i = 0; i < r.outerSize() && banded; ++i) {
    for (CsrMatrix::InnerIterator it(r, i); it; ++it) {
      if (std::abs(it.col() - i) > 1) {
        banded = false;
        break;
      }
    }
  }
  if (!banded) return SpdOperator::csr(std::move(r));
  const int n = static_cast<int>(r.rows());
  Vector d(n);
  Vector off = Vector::Zero(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) {
    d(i) = r.coeff(i, i);
    if (i + 1 < n) off(i) = r.coeff(i, i + 1);
  }
  return SpdOperator::tridiagonal(std::move(d), std::move(off));
}

void save_vector(const Vector& v, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path);
  for (Eigen::Index i = 0; i < v.size(); ++i) std::fprintf(f, "%.17g\n", v(i));
  if (std::fclose(f) != 0) throw Error(ErrorCode::IoError, "cannot write " + path);
}

Vector load_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::vector<double> vals;
  double v;
  while (in >> v) vals.push_back(v);
  if (!in.eof()) throw Error(ErrorCode::IoError, "malformed number in " + path);
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

}  // namespace bura
