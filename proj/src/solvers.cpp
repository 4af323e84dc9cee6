#include "bura/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "bura/error.hpp"

namespace bura {

const char* to_string(Method m) {
  switch (m) {
    case Method::PBuraAdditive: return "pbura";
    case Method::PBuraMultiplicative: return "pbura-mult";
    case Method::BuraOrig: return "bura-orig";
    case Method::QMethod: return "q";
    case Method::KPrimeQMethod: return "kprime-q";
  }
  return "unknown";
}

Method parse_method(const std::string& s) {
  if (s == "pbura" || s == "pbura-additive") return Method::PBuraAdditive;
  if (s == "pbura-mult" || s == "pbura-multiplicative") return Method::PBuraMultiplicative;
  if (s == "bura" || s == "bura-orig") return Method::BuraOrig;
  if (s == "q" || s == "qmethod") return Method::QMethod;
  if (s == "kprime-q" || s == "kq") return Method::KPrimeQMethod;
  throw Error(ErrorCode::ConfigError, "unknown method '" + s + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// M^{-1} F; counts a solve only for a consistent mass matrix.
Vector apply_mass_inverse(const DiscreteProblem& p, const Vector& F, const SolveOptions& opts, int& solves) {
  switch (p.M.kind()) {
    case Mass::Kind::Identity: return F;
    case Mass::Kind::Diagonal: return F.cwiseQuotient(p.M.diag());
    case Mass::Kind::Full: {
      ++solves;
      SolveOptions mopts = opts;
      mopts.lambda1.reset();
      return shifted_solve(p.M.full_operator(), 0.0, Mass::identity(p.size()), F, mopts);
    }
  }
  return {};
}

void check_delta(const DiscreteProblem& p, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "rescaling value must be positive");
  if (p.bounds.lambda1 && delta > p.bounds.lambda1->value * (1.0 + 1e-12)) {
    throw Error(ErrorCode::SpectrumViolation, "delta exceeds lambda_1; the approximation is only valid on [0,1]");
  }
}

}  // namespace

Delta default_delta(const DiscreteProblem& p, double tol) {
  if (p.bounds.lambda1 && p.bounds.lambda1->provenance == BoundProvenance::Exact) {
    return Delta{p.bounds.lambda1->value, "exact"};
  }
  const auto est = estimate_lambda1(p.A, p.M, tol);
  return Delta{est.delta, "inverse-power"};
}

SolveReport solve_pbura(const DiscreteProblem& p, const FractionForm& form, double delta, const SolveOptions& opts) {
  if (p.rhs.size() != p.size()) throw Error(ErrorCode::LengthMismatch, "rhs length differs from problem size");
  check_delta(p, delta);
  const auto t0 = Clock::now();
  const double alpha = form.gamma;

  SolveOptions sopts = opts;
  if (!sopts.lambda1) sopts.lambda1 = delta;

  SolveReport rep;
  rep.scale = delta;
  const Vector v = apply_mass_inverse(p, p.rhs, opts, rep.mass_solves);

  if (form.kind == FractionForm::Kind::Additive) {
    rep.method = Method::PBuraAdditive;
    const auto& a = form.additive;
    Vector w = a.c0 * v;
    for (std::size_t i = 0; i < a.residues.size(); ++i) {
      const Vector x = shifted_solve(p.A, -delta * a.shifted_poles[i], p.M, p.rhs, sopts);
      w += (delta * a.residues[i]) * x;
      ++rep.systems_solved;
    }
    rep.solution = std::pow(delta, -alpha) * w;
  } else {
    rep.method = Method::PBuraMultiplicative;
    const auto& m = form.multiplicative;
    Vector y = v;
    for (const auto& [zeta, d] : m.factors) {
      // (delta M - d S)^{-1} (delta M - zeta S) y with (delta M - d S) = -d (S - (delta/d) M).
      const Vector r = (delta * p.M.apply(y) - zeta * p.A.apply(y)) / (-d);
      y = shifted_solve(p.A, -delta / d, p.M, r, sopts);
      ++rep.systems_solved;
    }
    rep.solution = (std::pow(delta, -alpha) * m.b) * y;
  }
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

SolveReport solve_bura_orig(const DiscreteProblem& p, const RationalMinimax& r, double Lambda, const SolveOptions& opts) {
  if (p.rhs.size() != p.size()) throw Error(ErrorCode::LengthMismatch, "rhs length differs from problem size");
  if (!(Lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "Lambda must be positive");
  if (p.bounds.lambdaN && Lambda < p.bounds.lambdaN->value * (1.0 - 1e-12)) {
    throw Error(ErrorCode::SpectrumViolation, "Lambda is below lambda_N");
  }
  const auto t0 = Clock::now();
  const double alpha = 1.0 - r.gamma;
  const auto pf = t_partial_fractions(r);

  SolveReport rep;
  rep.method = Method::BuraOrig;
  rep.scale = Lambda;
  const Vector v = apply_mass_inverse(p, p.rhs, opts, rep.mass_solves);

  Vector y = pf.b * v;
  for (int i = 0; i < r.k; ++i) {
    const Vector x = shifted_solve(p.A, -Lambda * pf.poles[i], p.M, p.rhs, opts);
    y += (pf.residues[i] * Lambda) * x;
    ++rep.systems_solved;
  }
  const Vector u = shifted_solve(p.A, 0.0, p.M, p.M.apply(y), opts);
  ++rep.systems_solved;
  rep.solution = std::pow(Lambda, 1.0 - alpha) * u;
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

Quadrature1D quadrature_from_k(double alpha, int k) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  Quadrature1D q;
  q.kprime = std::numbers::pi / (2.0 * std::sqrt(alpha * (1.0 - alpha) * k));
  q.m = static_cast<int>(std::ceil((1.0 - alpha) * k));
  q.M = static_cast<int>(std::ceil(alpha * k));
  return q;
}

Quadrature1D quadrature_from_kprime(double alpha, double kprime) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
  if (!(kprime > 0.0)) throw Error(ErrorCode::InvalidArgument, "k' must be positive");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  Quadrature1D q;
  q.kprime = kprime;
  q.m = static_cast<int>(std::ceil(pi2 / (4.0 * alpha * kprime * kprime)));
  q.M = static_cast<int>(std::ceil(pi2 / (4.0 * (1.0 - alpha) * kprime * kprime)));
  return q;
}

double qmethod_scalar(double alpha, const Quadrature1D& q, double lambda) {
  double s = 0.0;
  for (int l = -q.m; l <= q.M; ++l) {
    s += std::exp(2.0 * (alpha - 1.0) * l * q.kprime) / (lambda + std::exp(-2.0 * l * q.kprime));
  }
  return 2.0 * q.kprime * std::sin(std::numbers::pi * alpha) / std::numbers::pi * s;
}

SolveReport solve_qmethod(const DiscreteProblem& p, double alpha, const Quadrature1D& q, const SolveOptions& opts) {
  if (p.rhs.size() != p.size()) throw Error(ErrorCode::LengthMismatch, "rhs length differs from problem size");
  const auto t0 = Clock::now();
  SolveOptions sopts = opts;
  if (!sopts.lambda1 && p.bounds.lambda1) sopts.lambda1 = p.bounds.lambda1->value;

  SolveReport rep;
  rep.method = Method::QMethod;
  rep.scale = q.kprime;
  Vector w = Vector::Zero(p.size());
  for (int l = -q.m; l <= q.M; ++l) {
    const double mu = std::exp(-2.0 * l * q.kprime);
    const Vector x = shifted_solve(p.A, mu, p.M, p.rhs, sopts);
    w += std::exp(2.0 * (alpha - 1.0) * l * q.kprime) * x;
    ++rep.systems_solved;
  }
  rep.solution = (2.0 * q.kprime * std::sin(std::numbers::pi * alpha) / std::numbers::pi) * w;
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

PositivityReport check_positivity(const DiscreteProblem& p, const FractionForm& form, double delta, int random_count,
                                  std::uint64_t seed) {
  const int n = p.size();
  PositivityReport rep;
  rep.min_entry = std::numeric_limits<double>::infinity();
  rep.min_scaled = std::numeric_limits<double>::infinity();

  DiscreteProblem q = p;
  auto run = [&](const Vector& f, int id) {
    q.rhs = f;
    const double fmax = f.cwiseAbs().maxCoeff();
    const Vector w = solve_pbura(q, form, delta).solution;
    const double mn = w.size() ? w.minCoeff() : 0.0;
    rep.min_entry = std::min(rep.min_entry, mn);
    const double scaled = fmax > 0.0 ? mn / fmax : 0.0;
    if (scaled < rep.min_scaled) {
      rep.min_scaled = scaled;
      rep.worst_rhs = id;
    }
    ++rep.battery_size;
  };

  for (int j = 0; j < n; ++j) run(Vector::Unit(n, j), j);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int r = 0; r < random_count; ++r) {
    Vector f(n);
    for (int i = 0; i < n; ++i) {
      const double x = u(rng);
      f(i) = (r % 2 == 1 && x < 0.5) ? 0.0 : u(rng);
    }
    run(f, n + r);
  }
  rep.preserved = rep.min_scaled >= -10.0 * std::numeric_limits<double>::epsilon();
  return rep;
}

}  // namespace bura
