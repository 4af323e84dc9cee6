#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "bura/discretize.hpp"
#include "bura/error.hpp"

using namespace bura;

namespace {

bool symmetric(const Eigen::MatrixXd& A) { return (A - A.transpose()).cwiseAbs().maxCoeff() == 0.0; }

bool m_matrix_pattern(const Eigen::MatrixXd& A) {
  for (int i = 0; i < A.rows(); ++i) {
    if (!(A(i, i) > 0.0)) return false;
    for (int j = 0; j < A.cols(); ++j) {
      if (i != j && A(i, j) > 0.0) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("constant coefficient 1D matrix") {
  const auto p = fd_1d_variable([](double) { return 1.0; }, 3, Quadrature::Midpoint);
  Eigen::MatrixXd expect(3, 3);
  expect << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  CHECK((p.A.to_dense() - 16.0 * expect).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((fd_1d_laplacian(3).A.to_dense() - 16.0 * expect).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("variable coefficient midpoint stencil") {
  auto a = [](double x) { return 1.0 + x; };
  const Eigen::MatrixXd A = fd_1d_variable(a, 3, Quadrature::Midpoint).A.to_dense();
  CHECK(A(1, 0) == doctest::Approx(-16.0 * a(3.0 / 8)));
  CHECK(A(1, 1) == doctest::Approx(16.0 * (a(3.0 / 8) + a(5.0 / 8))));
  CHECK(A(1, 2) == doctest::Approx(-16.0 * a(5.0 / 8)));
}

TEST_CASE("segment average of a linear coefficient equals the midpoint value") {
  auto a = [](double x) { return 2.0 + 3.0 * x; };
  const Eigen::MatrixXd A = fd_1d_variable(a, 7, Quadrature::Midpoint).A.to_dense();
  const Eigen::MatrixXd B = fd_1d_variable(a, 7, Quadrature::SegmentAverage).A.to_dense();
  CHECK((A - B).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("nonpositive coefficient") {
  try {
    fd_1d_variable([](double x) { return x - 0.5; }, 5, Quadrature::Midpoint);
    FAIL("expected NonpositiveCoefficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonpositiveCoefficient);
  }
}

TEST_CASE("2D five-point matrix for n = 2") {
  const auto p = fd_2d_laplacian(2, Domain::UnitSquare);
  Eigen::MatrixXd expect(4, 4);
  expect << 4, -1, -1, 0, -1, 4, 0, -1, -1, 0, 4, -1, 0, -1, -1, 4;
  CHECK((p.A.to_dense() - 9.0 * expect).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("2D smallest eigenvalue closed form") {
  const auto p = fd_2d_laplacian(255, Domain::UnitSquare);
  const double s = std::sin(std::numbers::pi / 512.0);
  REQUIRE(p.bounds.lambda1.has_value());
  CHECK(p.bounds.lambda1->value == doctest::Approx(8.0 * 256.0 * 256.0 * s * s).epsilon(1e-14));
}

TEST_CASE("lumped scheme on a uniform mesh") {
  const int segs = 16;
  const double h = 1.0 / segs;
  const auto p = fd_1d_lumped_nonuniform(Mesh1D::uniform(segs), [](double) { return 1.0; });
  CHECK((p.rhs - Vector::Constant(segs - 1, h)).cwiseAbs().maxCoeff() < 1e-15);
  const Eigen::MatrixXd A = p.A.to_dense();
  for (int i = 0; i < segs - 1; ++i) {
    CHECK(A(i, i) == doctest::Approx(2.0 / h));
    if (i > 0) CHECK(A(i, i - 1) == doctest::Approx(-1.0 / h));
    CHECK(p.M.diag()(i) == doctest::Approx(h));
  }
}

TEST_CASE("Dirac load at the midpoint") {
  const Mesh1D mesh = Mesh1D::uniform(16);
  const int mid = center_index(mesh);
  CHECK(mesh.nodes()[mid + 1] == 0.5);
  const auto p = fd_1d_lumped_nonuniform(mesh, nullptr, mid);
  Vector e = Vector::Zero(15);
  e(mid) = 1.0;
  CHECK(p.rhs == e);
  CHECK_THROWS_AS(fd_1d_lumped_nonuniform(mesh, nullptr, 15), Error);
}

TEST_CASE("boundary and center refinement node counts") {
  const Mesh1D m0 = Mesh1D::uniform(64);
  CHECK(m0.interior_count() == 63);
  CHECK(refine_boundary(m0, 9).interior_count() == 81);
  CHECK(refine_boundary(m0, 0).nodes() == m0.nodes());
  CHECK(refine_center(m0, 0).nodes() == m0.nodes());
  const Mesh1D c = refine_center(m0, 10);
  CHECK(c.min_segment() == std::ldexp(1.0, -16));
  CHECK(c.interior_count() == 83);
  CHECK(refine_boundary(Mesh1D::uniform(512), 6).interior_count() == 523);
}

TEST_CASE("refinement keeps nodes and halves the smallest segment") {
  for (int e = 4; e <= 8; ++e) {
    Mesh1D b = Mesh1D::uniform(1 << e), c = b;
    for (int step = 1; step <= 6; ++step) {
      const Mesh1D nb = refine_boundary(b, 1), nc = refine_center(c, 1);
      const std::set<double> sb(nb.nodes().begin(), nb.nodes().end()), sc(nc.nodes().begin(), nc.nodes().end());
      for (double x : b.nodes()) CHECK(sb.count(x) == 1);
      for (double x : c.nodes()) CHECK(sc.count(x) == 1);
      CHECK(nb.min_segment() == b.min_segment() / 2);
      CHECK(nc.min_segment() == c.min_segment() / 2);
      CHECK(nb.interior_count() == b.interior_count() + 2);
      CHECK(nc.interior_count() == c.interior_count() + 2);
      b = nb;
      c = nc;
    }
  }
  // p parts add p - 1 nodes at each end.
  CHECK(refine_boundary(Mesh1D::uniform(8), 1, 3).interior_count() == 7 + 4);
}

TEST_CASE("consistent 1D mass matrix") {
  const auto p = fem_1d_consistent(3);
  const Eigen::MatrixXd M = p.M.full_operator().to_dense();
  CHECK(M(1, 0) == doctest::Approx(1.0 / 24));
  CHECK(M(1, 1) == doctest::Approx(4.0 / 24));
  CHECK(M(1, 2) == doctest::Approx(1.0 / 24));
  const auto p9 = fem_1d_consistent(9);
  const Eigen::MatrixXd M9 = p9.M.full_operator().to_dense();
  for (int i = 1; i < 8; ++i) CHECK(M9.row(i).sum() == doctest::Approx(0.1));
  CHECK((p9.A.to_dense() - 10.0 * fd_1d_laplacian(9).A.to_dense() / 100.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("consistent 1D generalized eigenvalues") {
  // For tridiagonal Toeplitz pencils the eigenvalues are known in closed form:
  // lambda_j = (6/h^2)(1 - cos(j pi h)) / (2 + cos(j pi h)).
  const int N = 3;
  const double h = 0.25;
  const auto p = fem_1d_consistent(N);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(p.A.to_dense(), p.M.full_operator().to_dense());
  for (int j = 1; j <= N; ++j) {
    const double c = std::cos(j * std::numbers::pi * h);
    CHECK(es.eigenvalues()(j - 1) == doctest::Approx(6.0 / (h * h) * (1 - c) / (2 + c)).epsilon(1e-12));
  }
}

TEST_CASE("L-shaped finite elements") {
  const int n = 9;
  const Fem2D fem = fem_2d_lshaped(n);
  const double h = 0.1;
  const Eigen::MatrixXd S = fem.S.to_dense();
  const Eigen::MatrixXd M = fem.M.to_dense();
  CHECK(symmetric(S));
  CHECK(symmetric(M));
  CHECK(m_matrix_pattern(S));
  CHECK(fem.total_mass == doctest::Approx(0.75).epsilon(1e-13));
  // Interior node away from the boundary: 5-point pattern.
  const int k = fem.grid.index(2, 2);
  REQUIRE(k >= 0);
  CHECK(S(k, k) == doctest::Approx(4.0));
  int neighbours = 0;
  for (int j = 0; j < S.cols(); ++j) {
    if (j != k && S(k, j) != 0.0) {
      CHECK(S(k, j) == doctest::Approx(-1.0));
      ++neighbours;
    }
  }
  CHECK(neighbours == 4);
  for (int i = 0; i < fem.grid.size(); ++i) CHECK(fem.M_lumped(i) == doctest::Approx(h * h));
  // Excluded quadrant and the re-entrant edges carry no unknowns.
  CHECK(fem.grid.index(5, 7) == -1);
  CHECK(fem.grid.index(7, 5) == -1);
  CHECK(fem.grid.index(7, 7) == -1);
  CHECK(fem.grid.index(4, 7) >= 0);
  CHECK(fem.grid.size() == 81 - 25);
}

TEST_CASE("grid parity") {
  try {
    fem_2d_lshaped(10);
    FAIL("expected GridParity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridParity);
  }
}

TEST_CASE("five-point matrix equals lumped finite elements") {
  for (int n : {3, 7, 15}) {
    const auto fd = fd_2d_laplacian(n, Domain::UnitSquare);
    const Fem2D fem = fem_2d(n, Domain::UnitSquare);
    const Eigen::MatrixXd lumped = fem.M_lumped.cwiseInverse().asDiagonal() * fem.S.to_dense();
    CHECK((fd.A.to_dense() - lumped).cwiseAbs().maxCoeff() <= 1e-10 * fd.A.to_dense().cwiseAbs().maxCoeff());
  }
}

TEST_CASE("assembled matrices are symmetric M-matrices") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int n : {3, 5, 11}) {
    CHECK(symmetric(fd_2d_laplacian(n, Domain::UnitSquare).A.to_dense()));
    CHECK(m_matrix_pattern(fd_2d_laplacian(n, Domain::UnitSquare).A.to_dense()));
    CHECK(m_matrix_pattern(fd_2d_laplacian(n, Domain::LShaped).A.to_dense()));
    CHECK(symmetric(fd_2d_laplacian(n, Domain::LShaped).A.to_dense()));
  }
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x{0.0};
    for (int i = 0; i < 30; ++i) x.push_back(x.back() + u(rng));
    const double L = x.back() + u(rng);
    for (double& v : x) v /= L;
    x.push_back(1.0);
    const Eigen::MatrixXd A = fd_1d_lumped_nonuniform(Mesh1D(x), [](double) { return 1.0; }).A.to_dense();
    CHECK(symmetric(A));
    CHECK(m_matrix_pattern(A));
    const double c = u(rng);
    const Eigen::MatrixXd V =
        fd_1d_variable([c](double s) { return 1.0 + c * std::sin(5 * s); }, 20, Quadrature::SegmentAverage).A.to_dense();
    CHECK(symmetric(V));
    CHECK(m_matrix_pattern(V));
  }
}

TEST_CASE("right-hand sides") {
  const Grid2D g(3, Domain::UnitSquare);
  const Vector cb = rhs_checkerboard(g);
  const Vector s = rhs_sine(g);
  auto at = [&](int i, int j) { return g.index(i, j); };
  CHECK(cb(at(1, 1)) == 1.0);
  CHECK(cb(at(1, 3)) == -1.0);
  CHECK(cb(at(3, 1)) == -1.0);
  CHECK(cb(at(2, 1)) == 0.0);
  CHECK(s(at(1, 1)) == doctest::Approx(1.0).epsilon(1e-15));
  // (0.5, 0.3) lies on a jump line.
  const Grid2D g10(9, Domain::UnitSquare);
  CHECK(rhs_checkerboard(g10)(g10.index(5, 3)) == 0.0);
  for (int n : {3, 9, 31}) CHECK(rhs_checkerboard(Grid2D(n, Domain::UnitSquare)).sum() == 0.0);
}

TEST_CASE("mesh validation") {
  CHECK_THROWS_AS(Mesh1D({0.0, 0.5, 0.4, 1.0}), Error);
  CHECK_THROWS_AS(Mesh1D({0.0, 1.0}), Error);
  CHECK_THROWS_AS(refine_center(Mesh1D({0.0, 0.3, 1.0}), 1), Error);
}
