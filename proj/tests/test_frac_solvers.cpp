#include <doctest.h>

#include <cmath>
#include <random>

#include "bura/diagnostics.hpp"
#include "bura/discretize.hpp"
#include "bura/error.hpp"
#include "bura/reference.hpp"
#include "bura/solvers.hpp"

using namespace bura;

namespace {

const RationalMinimax& cached(double gamma, int k) {
  static std::vector<RationalMinimax> store;
  for (const auto& r : store) {
    if (r.gamma == gamma && r.k == k) return r;
  }
  store.reserve(64);
  store.push_back(compute_bura(gamma, k));
  return store.back();
}

DiscreteProblem diagonal_problem(const Vector& d, const Vector& f) {
  DiscreteProblem p;
  p.A = SpdOperator::diagonal(d);
  p.M = Mass::identity(static_cast<int>(d.size()));
  p.rhs = f;
  p.bounds.lambda1 = Bound{d.minCoeff(), BoundProvenance::Exact};
  p.bounds.lambdaN = Bound{d.maxCoeff(), BoundProvenance::Exact};
  return p;
}

Eigen::MatrixXd dense_mass(const DiscreteProblem& p) {
  return p.M.kind() == Mass::Kind::Full ? p.M.full_operator().to_dense() : Eigen::MatrixXd(p.M.diag().asDiagonal());
}

Vector oracle(const DiscreteProblem& p, double alpha) {
  if (p.M.kind() == Mass::Kind::Identity) return dense_fractional_apply(p.A.to_dense(), nullptr, alpha, p.rhs);
  const Eigen::MatrixXd M = dense_mass(p);
  return dense_fractional_apply(p.A.to_dense(), &M, alpha, p.rhs);
}

}  // namespace

TEST_CASE("single eigenvalue") {
  const double delta = 3.5;
  for (double alpha : {0.25, 0.5, 0.75}) {
    const auto& r = cached(alpha, 7);
    const Vector f = Vector::LinSpaced(6, -1.0, 2.0);
    const auto p = diagonal_problem(Vector::Constant(6, delta), f);
    const auto rep = solve_pbura(p, to_additive_form(r), delta);
    const Vector expect = std::pow(delta, -alpha) * r(1.0) * f;
    CHECK((rep.solution - expect).norm() <= 1e-13 * expect.norm());
    const Vector exact = std::pow(delta, -alpha) * f;
    CHECK((rep.solution - exact).cwiseAbs().maxCoeff() <= std::pow(delta, -alpha) * r.certified_error * f.cwiseAbs().maxCoeff() * (1 + 1e-9));
  }
}

TEST_CASE("per-eigenvalue bound on diag(1, 10, 100)") {
  const auto& r = cached(0.5, 7);
  Vector d(3);
  d << 1, 10, 100;
  const auto p = diagonal_problem(d, Vector::Ones(3));
  for (auto form : {to_additive_form(r), to_multiplicative_form(r)}) {
    const auto rep = solve_pbura(p, form, 1.0);
    for (int i = 0; i < 3; ++i) {
      const double scalar = r.eval_product(1.0 / d(i));
      CHECK(rep.solution(i) == doctest::Approx(scalar).epsilon(1e-12));
      CHECK(std::abs(std::pow(d(i), -0.5) - rep.solution(i)) <= r.certified_error * (1 + 1e-9));
    }
  }
}

TEST_CASE("delta above lambda_1 is refused") {
  Vector d(2);
  d << 1, 2;
  const auto p = diagonal_problem(d, Vector::Ones(2));
  try {
    solve_pbura(p, to_additive_form(cached(0.5, 5)), 1.5);
    FAIL("expected SpectrumViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpectrumViolation);
  }
}

TEST_CASE("bound against the dense oracle on randomized problems") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    DiscreteProblem p;
    switch (trial % 3) {
      case 0:
        p = fd_1d_laplacian(20 + static_cast<int>(u(rng) * 300));
        break;
      case 1:
        p = fd_2d_laplacian(5 + static_cast<int>(u(rng) * 20), Domain::UnitSquare);
        break;
      default: {
        std::vector<double> x{0.0};
        const int n = 20 + static_cast<int>(u(rng) * 200);
        for (int i = 0; i < n; ++i) x.push_back(x.back() + 0.02 + u(rng));
        const double L = x.back() + 0.02 + u(rng);
        for (double& v : x) v /= L;
        x.push_back(1.0);
        p = fd_1d_lumped_nonuniform(Mesh1D(x), [](double) { return 1.0; });
      }
    }
    p.rhs = Vector::NullaryExpr(p.size(), [&](Eigen::Index) { return u(rng) - 0.3; });
    const double alpha = (trial % 3 + 1) * 0.25;
    const int k = 5 + 2 * (trial % 3);
    const auto& r = cached(alpha, k);
    const Delta delta = default_delta(p);
    const Vector exact = oracle(p, alpha);
    const auto rep = solve_pbura(p, to_additive_form(r), delta.value);
    // Lumped problems: the bound holds in the M-norm for M^{-1} F.
    double err, fnorm;
    if (p.M.kind() == Mass::Kind::Identity) {
      err = (rep.solution - exact).norm();
      fnorm = p.rhs.norm();
    } else {
      const Vector& m = p.M.diag();
      err = std::sqrt((rep.solution - exact).cwiseAbs2().dot(m));
      fnorm = std::sqrt(p.rhs.cwiseAbs2().cwiseQuotient(m).sum());
    }
    CAPTURE(trial);
    CHECK(err <= std::pow(delta.value, -alpha) * r.certified_error * fnorm + 1e-10 * fnorm);
  }
}

TEST_CASE("additive and multiplicative forms agree") {
  std::vector<DiscreteProblem> ps;
  ps.push_back(fd_1d_laplacian(200));
  ps.back().rhs = Vector::LinSpaced(200, 0.0, 1.0).array().sin();
  ps.push_back(fd_2d_laplacian(31, Domain::UnitSquare));
  ps.back().rhs = rhs_checkerboard(*ps.back().grid);
  ps.push_back(fd_1d_lumped_nonuniform(refine_boundary(Mesh1D::uniform(64), 5), [](double) { return 1.0; }));
  ps.push_back(fem_1d_consistent(50));
  for (const auto& p : ps) {
    for (double alpha : {0.25, 0.5, 0.75}) {
      const auto& r = cached(alpha, 9);
      const double delta = default_delta(p).value;
      const Vector a = solve_pbura(p, to_additive_form(r), delta).solution;
      const Vector m = solve_pbura(p, to_multiplicative_form(r), delta).solution;
      CHECK((a - m).norm() <= 1e-11 * a.norm());
    }
  }
}

TEST_CASE("solve counts") {
  auto p = fd_1d_laplacian(100);
  p.rhs = Vector::Ones(100);
  for (int k : {5, 7, 9}) {
    const auto& r = cached(0.5, k);
    const auto a = solve_pbura(p, to_additive_form(r), default_delta(p).value);
    CHECK(a.systems_solved == k);
    CHECK(a.mass_solves == 0);
    const auto m = solve_pbura(p, to_multiplicative_form(r), default_delta(p).value);
    CHECK(m.systems_solved == k);
    const auto o = solve_bura_orig(p, r, estimate_lambdaN(p.A, p.M).value);
    CHECK(o.systems_solved == k + 1);
    const auto q = quadrature_from_k(0.5, k);
    CHECK(solve_qmethod(p, 0.5, q).systems_solved == q.count());
  }
  auto fem = fem_1d_consistent(20);
  const auto rep = solve_pbura(fem, to_additive_form(cached(0.5, 5)), default_delta(fem).value);
  CHECK(rep.systems_solved == 5);
  CHECK(rep.mass_solves == 1);
}

TEST_CASE("BURA-orig on the identity") {
  for (double alpha : {0.25, 0.5, 0.75}) {
    const auto& r = cached(1.0 - alpha, 8);
    const auto p = diagonal_problem(Vector::Ones(4), Vector::Ones(4));
    const auto rep = solve_bura_orig(p, r, 1.0);
    CHECK((rep.solution - r(1.0) * Vector::Ones(4)).norm() < 1e-13);
    CHECK(std::abs(r(1.0) - 1.0) <= r.certified_error * (1 + 1e-9));
  }
}

TEST_CASE("BURA-orig needs Lambda above lambda_N") {
  Vector d(2);
  d << 1, 5;
  const auto p = diagonal_problem(d, Vector::Ones(2));
  CHECK_THROWS_AS(solve_bura_orig(p, cached(0.5, 5), 4.0), Error);
}

TEST_CASE("quadrature node counts") {
  const auto q = quadrature_from_kprime(0.5, 1.0 / 3.0);
  CHECK(q.count() == 91);
  // Sinc truncation error for this step is about exp(-pi^2 / (2 k')) = 3.7e-7.
  CHECK(std::abs(qmethod_scalar(0.5, q, 1.0) - 1.0) < 5e-7);
  const auto qk = quadrature_from_k(0.5, 7);
  CHECK(qk.m == 4);
  CHECK(qk.M == 4);
  CHECK(qk.count() == 9);
}

TEST_CASE("quadrature converges for a diagonal operator") {
  for (double alpha : {0.25, 0.5, 0.75}) {
    const auto q = quadrature_from_kprime(alpha, 0.25);
    for (double l : {1.0, 10.0, 1e3, 1e5}) {
      CHECK(qmethod_scalar(alpha, q, l) == doctest::Approx(std::pow(l, -alpha)).epsilon(1e-8));
    }
  }
}

TEST_CASE("zero data") {
  auto p = fd_1d_laplacian(50);
  p.rhs = Vector::Zero(50);
  CHECK(solve_pbura(p, to_additive_form(cached(0.5, 7)), default_delta(p).value).solution.cwiseAbs().maxCoeff() == 0.0);
  CHECK(solve_qmethod(p, 0.5, quadrature_from_k(0.5, 7)).solution.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("positivity of unit loads in 1D") {
  auto p = fd_1d_laplacian(63);
  const auto& r = cached(0.5, 9);
  const double delta = default_delta(p).value;
  for (int j = 0; j < 63; ++j) {
    p.rhs = Vector::Unit(63, j);
    CHECK(solve_pbura(p, to_additive_form(r), delta).solution.minCoeff() >= 0.0);
  }
}

TEST_CASE("positivity battery on FD and lumped problems") {
  std::vector<DiscreteProblem> ps;
  ps.push_back(fd_1d_laplacian(127));
  ps.push_back(fd_2d_laplacian(15, Domain::UnitSquare));
  ps.push_back(fd_1d_lumped_nonuniform(refine_center(Mesh1D::uniform(32), 6), [](double) { return 1.0; }));
  for (const auto& p : ps) {
    for (double alpha : {0.25, 0.5, 0.75}) {
      const auto rep = check_positivity(p, to_additive_form(cached(alpha, 9)), default_delta(p).value, 10, 4);
      CHECK(rep.preserved);
      CHECK(rep.battery_size == p.size() + 10);
      CHECK(rep.min_scaled >= -10 * 2.220446049250313e-16);
    }
  }
}

TEST_CASE("consistent mass can lose positivity") {
  // Small alpha on h = 1/10: M A^alpha has a positive off-diagonal entry.
  const auto p = fem_1d_consistent(9);
  const auto mm = mmatrix_study(p.A.to_dense(), p.M.full_operator().to_dense(), 0.1);
  CHECK(mm.max_off_diagonal == doctest::Approx(0.018190).epsilon(1e-4));
  const Eigen::MatrixXd M = p.M.full_operator().to_dense();
  double worst = 0.0;
  for (int j = 0; j < 9; ++j) {
    const Vector u = dense_fractional_apply(p.A.to_dense(), &M, 0.1, Vector::Unit(9, j));
    worst = std::min(worst, u.minCoeff());
  }
  CHECK(worst < 0.0);
  const auto rep = check_positivity(p, to_additive_form(cached(0.1, 9)), default_delta(p).value, 0);
  CHECK_FALSE(rep.preserved);
}

// Single-cell values from the sine-data uniform-mesh study at h = 2^-8.
TEST_CASE("sine data, h = 2^-8, published cells") {
  const int n = 255;
  auto p = fd_2d_laplacian(n, Domain::UnitSquare);
  p.rhs = rhs_sine(*p.grid);
  const Vector w8 = Vector::Constant(p.size(), 1.0 / (256.0 * 256.0));
  SUBCASE("P-BURA alpha = 0.75, k = 9") {
    const Vector ref = exact_discrete_sine(*p.grid, 0.75);
    const auto rep = solve_pbura(p, to_additive_form(cached(0.75, 9)), default_delta(p).value);
    CHECK(rep.systems_solved == 9);
    const double e = error_norms(rep.solution, ref, &w8).l2_rel;
    CHECK(std::abs(e - 7.564e-7) <= 0.2 * 7.564e-7);
  }
  SUBCASE("BURA-orig alpha = 0.25, k = 8") {
    const Vector ref = exact_discrete_sine(*p.grid, 0.25);
    const auto rep = solve_bura_orig(p, cached(0.75, 8), estimate_lambdaN(p.A, p.M).value);
    CHECK(rep.systems_solved == 9);
    const double e = error_norms(rep.solution, ref, &w8).l2_rel;
    CHECK(std::abs(e - 4.615e-5) <= 0.2 * 4.615e-5);
  }
  SUBCASE("Q-method alpha = 0.5, k = 7") {
    const Vector ref = exact_discrete_sine(*p.grid, 0.5);
    const auto rep = solve_qmethod(p, 0.5, quadrature_from_k(0.5, 7));
    CHECK(rep.systems_solved == 9);
    const double e = error_norms(rep.solution, ref, &w8).l2_rel;
    CHECK(std::abs(e - 1.428e-3) <= 0.2 * 1.428e-3);
  }
}

TEST_CASE("method names") {
  CHECK(parse_method("pbura") == Method::PBuraAdditive);
  CHECK(parse_method("bura-orig") == Method::BuraOrig);
  CHECK(parse_method("kprime-q") == Method::KPrimeQMethod);
  try {
    parse_method("");
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
}
