#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace bura {

// Best uniform rational approximation r(t) of t^gamma on [0,1], numerator and
// denominator of degree k.
//
// Two representations are carried. The barycentric one (support/weights/values)
// comes out of the equioscillation iteration and is absent for approximations
// loaded from a coefficient table. The product form
//   r(t) = b * prod_i (t - zeros[i]) / (t - poles[i])
// is always present. Zeros and poles are sorted so that
//   0 > zeros[0] > poles[0] > zeros[1] > ... > zeros[k-1] > poles[k-1].
struct RationalMinimax {
  double gamma = 0.0;
  int k = 0;

  std::vector<double> support;
  std::vector<double> weights;
  std::vector<double> values;

  // Final alternation set (2k+2 points, 0 and 1 included).
  std::vector<double> reference;

  double certified_error = 0.0;
  std::vector<double> zeros;
  std::vector<double> poles;
  double b = 0.0;

  int iterations = 0;

  bool has_barycentric() const { return !support.empty(); }

  // Barycentric evaluation when available, product form otherwise.
  double operator()(double t) const;
  double eval_barycentric(double t) const;
  double eval_product(double t) const;
  double deviation(double t) const;
};

struct RemezOptions {
  double tol = 1e-6;
  int max_iterations = 60;
};

RationalMinimax compute_bura(double gamma, int k, const RemezOptions& opts = {});

// Alternation points of r(t) - t^gamma found by dense sampling plus local
// refinement, independent of how r was produced.
struct EquioscillationCheck {
  std::vector<double> points;
  std::vector<double> deviations;
  double max_abs = 0.0;
  double min_abs = 0.0;

  bool alternates() const;
  double spread() const { return max_abs > 0.0 ? (max_abs - min_abs) / max_abs : 0.0; }
};

EquioscillationCheck check_equioscillation(const RationalMinimax& r, int samples_per_decade = 400);

// Strict interlacing 0 > z_1 > d_1 > ... > z_k > d_k.
bool interlaces(const std::vector<double>& zeros, const std::vector<double>& poles);

struct AdditiveForm {
  double c0 = 0.0;
  std::vector<double> residues;
  std::vector<double> shifted_poles;  // dtilde_i = 1/d_i, most negative first
};

struct MultiplicativeForm {
  double b = 0.0;
  std::vector<std::pair<double, double>> factors;  // (zeta_i, d_i)
};

// Solver-ready decomposition of rtilde(lambda) = r(1/lambda).
struct FractionForm {
  enum class Kind { Additive, Multiplicative };

  Kind kind = Kind::Additive;
  double gamma = 0.0;
  int k = 0;
  double error = 0.0;
  AdditiveForm additive;
  MultiplicativeForm multiplicative;

  double eval_rtilde(double lambda) const;
  // Scalar factor (delta - zeta t)/(delta - d t) of the sequential product.
  static double factor(double zeta, double d, double delta, double t) {
    return (delta - zeta * t) / (delta - d * t);
  }
};

FractionForm to_additive_form(const RationalMinimax& r);
FractionForm to_multiplicative_form(const RationalMinimax& r);

// Partial fractions of r in the variable t: r(t) = b + sum_i e_i / (t - d_i).
struct TPartialFractions {
  double b = 0.0;
  std::vector<double> residues;
  std::vector<double> poles;
};

TPartialFractions t_partial_fractions(const RationalMinimax& r);

// Coefficient table: header `gamma,k,E,b,zeros...,poles...`, then one row per
// approximation with k zeros followed by k poles, each list in interlaced order.
void write_coefficients(std::ostream& out, const std::vector<RationalMinimax>& rows);
void save_coefficients(const std::string& path, const std::vector<RationalMinimax>& rows);
std::vector<RationalMinimax> read_coefficients(std::istream& in);
std::vector<RationalMinimax> load_coefficients(const std::string& path);

// Rebuilds a RationalMinimax from product-form data, verifying interlacing and
// equioscillation and recomputing the error by sampling.
RationalMinimax from_product_form(double gamma, std::vector<double> zeros, std::vector<double> poles,
                                  double b);

}  // namespace bura
