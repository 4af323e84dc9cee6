#include <array>
#include <cmath>
#include <numbers>

#include "bura/discretize.hpp"
#include "bura/error.hpp"

namespace bura {

DiscreteProblem fem_1d_consistent(int N, const Vector* load) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "need N >= 1");
  const double h = 1.0 / (N + 1);
  DiscreteProblem p;
  p.scheme = Scheme::FemConsistent;
  p.A = SpdOperator::tridiagonal(Vector::Constant(N, 2.0 / h), Vector::Constant(N - 1, -1.0 / h));
  p.M = Mass::full(SpdOperator::tridiagonal(Vector::Constant(N, 4.0 * h / 6.0), Vector::Constant(N - 1, h / 6.0)));
  if (load) {
    if (load->size() != N) throw Error(ErrorCode::LengthMismatch, "load length differs from N");
    p.rhs = *load;
  } else {
    p.rhs = Vector::Constant(N, h);
  }
  // Pencil eigenvalues (6/h^2)(1 - cos(i pi h))/(2 + cos(i pi h)).
  auto lam = [h](int i) {
    const double c = std::cos(i * std::numbers::pi * h);
    return 6.0 / (h * h) * (1.0 - c) / (2.0 + c);
  };
  p.bounds.lambda1 = Bound{lam(1), BoundProvenance::Exact};
  p.bounds.lambdaN = Bound{lam(N), BoundProvenance::Exact};
  p.label = "fem1d-consistent";
  p.mesh = Mesh1D::uniform(N + 1);
  return p;
}

Fem2D fem_2d(int n, Domain domain) {
  Grid2D grid(n, domain);
  const int n1 = n + 1;
  const double h = 1.0 / n1;
  const int half = n1 / 2;
  const double area = 0.5 * h * h;

  std::vector<Eigen::Triplet<double>> ks;
  std::vector<Eigen::Triplet<double>> ms;
  Vector lumped = Vector::Zero(grid.size());
  double total_mass = 0.0;

  auto element = [&](const std::array<std::pair<int, int>, 3>& v) {
    Eigen::Matrix2d B;
    B << (v[1].first - v[0].first) * h, (v[2].first - v[0].first) * h, (v[1].second - v[0].second) * h,
        (v[2].second - v[0].second) * h;
    Eigen::Matrix<double, 2, 3> Dref;
    Dref << -1.0, 1.0, 0.0, -1.0, 0.0, 1.0;
    const Eigen::Matrix<double, 2, 3> G = B.inverse().transpose() * Dref;
    const Eigen::Matrix3d K = area * G.transpose() * G;
    total_mass += area;
    for (int a = 0; a < 3; ++a) {
      const int I = grid.index(v[a].first, v[a].second);
      if (I < 0) continue;
      lumped(I) += area / 3.0;
      for (int b = 0; b < 3; ++b) {
        const int J = grid.index(v[b].first, v[b].second);
        if (J < 0) continue;
        ks.emplace_back(I, J, K(a, b));
        ms.emplace_back(I, J, area / 12.0 * (a == b ? 2.0 : 1.0));
      }
    }
  };

  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n1; ++i) {
      if (domain == Domain::LShaped && i >= half && j >= half) continue;
      element({{{i, j}, {i + 1, j}, {i + 1, j + 1}}});
      element({{{i, j}, {i + 1, j + 1}, {i, j + 1}}});
    }
  }

  CsrMatrix S(grid.size(), grid.size());
  S.setFromTriplets(ks.begin(), ks.end());
  S.prune(1.0, 1e-12);  // hypotenuse couplings cancel to rounding level
  CsrMatrix M(grid.size(), grid.size());
  M.setFromTriplets(ms.begin(), ms.end());
  return Fem2D{grid, SpdOperator::csr(std::move(S)), SpdOperator::csr(std::move(M)), std::move(lumped), total_mass};
}

DiscreteProblem fem_problem(const Fem2D& fem, bool lumped, Vector load) {
  if (load.size() != fem.grid.size()) throw Error(ErrorCode::LengthMismatch, "load length differs from grid size");
  DiscreteProblem p;
  p.scheme = lumped ? Scheme::FemLumped : Scheme::FemConsistent;
  p.A = fem.S;
  p.M = lumped ? Mass::diagonal(fem.M_lumped) : Mass::full(fem.M);
  p.rhs = std::move(load);
  p.bounds.lambdaN = estimate_lambdaN(p.A, p.M);
  p.label = lumped ? "fem2d-lumped" : "fem2d-consistent";
  p.grid = fem.grid;
  return p;
}

}  // namespace bura
