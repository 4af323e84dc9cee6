#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bura/discretize.hpp"
#include "bura/rational_minimax.hpp"

namespace bura {

enum class Method { PBuraAdditive, PBuraMultiplicative, BuraOrig, QMethod, KPrimeQMethod };

const char* to_string(Method m);
Method parse_method(const std::string& s);

struct ErrorNorms {
  double l2_abs = 0.0;
  double l2_rel = 0.0;
  double linf_rel = 0.0;
};

struct SolveReport {
  Vector solution;
  Method method = Method::PBuraAdditive;
  int systems_solved = 0;
  int mass_solves = 0;  // consistent-mass only: the extra M^{-1} F application
  double wall_seconds = 0.0;
  double scale = 0.0;   // delta for P-BURA, Lambda for BURA-orig
  std::string scale_provenance;
  std::optional<ErrorNorms> errors;
};

// Rescaling value for P-BURA: the exact lambda_1 when the problem carries it,
// otherwise an inverse-power estimate deflated by (1 - 2 tol).
struct Delta {
  double value = 0.0;
  std::string provenance;
};
Delta default_delta(const DiscreteProblem& p, double tol = 1e-3);

// w = delta^{-alpha} rtilde(A/delta) applied to the data, with rtilde taken from
// the BURA of t^alpha.
SolveReport solve_pbura(const DiscreteProblem& p, const FractionForm& form, double delta,
                        const SolveOptions& opts = {});

// Lambda^{1-alpha} A^{-1} r(A/Lambda) f with r the BURA of t^{1-alpha}:
// k partial-fraction solves plus one plain solve.
SolveReport solve_bura_orig(const DiscreteProblem& p, const RationalMinimax& r_one_minus_alpha, double Lambda,
                            const SolveOptions& opts = {});

struct Quadrature1D {
  double kprime = 0.0;
  int m = 0;   // nodes with l < 0
  int M = 0;   // nodes with l > 0
  int count() const { return m + M + 1; }
};

// k given: k' = pi / (2 sqrt(alpha (1-alpha) k)), m = ceil((1-alpha) k), M = ceil(alpha k).
Quadrature1D quadrature_from_k(double alpha, int k);
// k' given: m = ceil(pi^2 / (4 alpha k'^2)), M = ceil(pi^2 / (4 (1-alpha) k'^2)).
Quadrature1D quadrature_from_kprime(double alpha, double kprime);

// Scalar version of the sinc quadrature for lambda^{-alpha}.
double qmethod_scalar(double alpha, const Quadrature1D& q, double lambda);

SolveReport solve_qmethod(const DiscreteProblem& p, double alpha, const Quadrature1D& q,
                          const SolveOptions& opts = {});

struct PositivityReport {
  double min_entry = 0.0;         // most negative solution entry over the battery
  double min_scaled = 0.0;        // min over rhs of min(w) / ||f||_inf
  int worst_rhs = -1;             // battery index attaining min_scaled
  int battery_size = 0;
  bool preserved = true;          // min_scaled >= -10 eps
};

// Unit vectors e_j (all j) plus `random_count` random nonnegative vectors drawn
// with the given seed, solved with the additive P-BURA form.
PositivityReport check_positivity(const DiscreteProblem& p, const FractionForm& form, double delta,
                                  int random_count = 20, std::uint64_t seed = 1);

}  // namespace bura
