#include "bura/rational_minimax.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "bura/error.hpp"

namespace bura {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double barycentric(const std::vector<double>& t, const std::vector<double>& w,
                   const std::vector<double>& g, double x) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double d = x - t[j];
    if (d == 0.0) return g[j];
    const double c = w[j] / d;
    num += c * g[j];
    den += c;
  }
  return num / den;
}

struct LevelSolution {
  double h = 0.0;
  std::vector<double> beta;
};

// Interpolation conditions r(t_j) = f(t_j) + h and r(y_i) = f(y_i) - h on the
// reference x, with t = even entries and y = odd entries. Eliminating the
// support values g_j = f(t_j) + h gives the pencil L beta = -2h C beta.
std::optional<LevelSolution> solve_reference(const std::vector<double>& x, double gamma) {
  const int n = static_cast<int>(x.size()) / 2;
  Eigen::MatrixXd C(n, n);
  Eigen::MatrixXd L(n, n);
  for (int i = 0; i < n; ++i) {
    const double y = x[2 * i + 1];
    const double fy = std::pow(y, gamma);
    for (int j = 0; j < n; ++j) {
      const double t = x[2 * j];
      C(i, j) = 1.0 / (y - t);
      L(i, j) = (std::pow(t, gamma) - fy) * C(i, j);
    }
  }

  // The nodes span many decades; without balancing QZ loses most digits for
  // gamma = 0.25 at moderate k.
  Eigen::VectorXd colscale = Eigen::VectorXd::Ones(n);
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (int i = 0; i < n; ++i) {
      const double r = std::sqrt(C.row(i).cwiseAbs().maxCoeff() * L.row(i).cwiseAbs().maxCoeff());
      if (r > 0.0) {
        C.row(i) /= r;
        L.row(i) /= r;
      }
    }
    for (int j = 0; j < n; ++j) {
      const double c = std::sqrt(C.col(j).cwiseAbs().maxCoeff() * L.col(j).cwiseAbs().maxCoeff());
      if (c > 0.0) {
        C.col(j) /= c;
        L.col(j) /= c;
        colscale(j) *= c;
      }
    }
  }

  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(L, C, false);
  const auto alphas = ges.alphas();
  const auto betas = ges.betas();

  std::optional<LevelSolution> best;
  for (int e = 0; e < n; ++e) {
    if (betas(e) == 0.0) continue;
    const std::complex<double> lam = alphas(e) / betas(e);
    if (!std::isfinite(lam.real()) || std::abs(lam.imag()) > 1e-8 * std::abs(lam)) continue;

    Eigen::MatrixXd P = L - lam.real() * C;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeFullV);
    Eigen::VectorXd v = svd.matrixV().col(n - 1);

    std::vector<double> beta(n);
    bool alternating = true;
    for (int j = 0; j < n; ++j) {
      beta[j] = v(j) / colscale(j);
      if (j > 0 && !(beta[j] * beta[j - 1] < 0.0)) alternating = false;
    }
    if (!alternating) continue;
    const double h = -0.5 * lam.real();
    if (!best || std::abs(h) < std::abs(best->h)) best = LevelSolution{h, std::move(beta)};
  }
  return best;
}

template <class F>
double bisect(const F& e, double lo, double hi) {
  double flo = e(lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = (lo > 0.0 && hi > 4.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    const double fm = e(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * kEps * hi) break;
  }
  return 0.5 * (lo + hi);
}

// Sign change of e in (0, hi] where e(0) and e(hi) differ in sign. The root can
// sit many decades below hi, so first bracket it by halving.
template <class F>
double bisect_from_zero(const F& e, double hi) {
  const bool s0 = e(0.0) > 0.0;
  double z = hi;
  while ((e(z) > 0.0) != s0) {
    z *= 0.5;
    if (z < 1e-300) return z;
  }
  return bisect(e, z, hi);
}

template <class F>
double golden_max(const F& absf, double l, double r) {
  constexpr double g1 = 0.3819660112501051;
  constexpr double g2 = 0.6180339887498949;
  for (int it = 0; it < 80 && r > l; ++it) {
    const double m1 = l + (r - l) * g1;
    const double m2 = l + (r - l) * g2;
    if (absf(m1) > absf(m2)) {
      r = m2;
    } else {
      l = m1;
    }
  }
  return 0.5 * (l + r);
}

// Location of max |e| on [lo, hi]: geometric sampling, then golden refinement
// around the best sample.
template <class F>
double locate_extremum(const F& e, double lo, double hi, int samples) {
  std::vector<double> pts;
  pts.reserve(samples + 1);
  if (lo == 0.0) {
    pts.push_back(0.0);
    for (int i = 0; i < samples; ++i) pts.push_back(hi * std::pow(10.0, -8.0 + 8.0 * i / (samples - 1)));
  } else {
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < samples; ++i) pts.push_back(lo * std::exp(ratio * i / (samples - 1)));
  }
  pts.back() = hi;

  std::size_t jbest = 0;
  double vbest = -1.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const double v = std::abs(e(pts[j]));
    if (v > vbest) {
      vbest = v;
      jbest = j;
    }
  }
  const double l = pts[jbest > 0 ? jbest - 1 : 0];
  const double r = pts[std::min(jbest + 1, pts.size() - 1)];
  auto absf = [&](double x) { return std::abs(e(x)); };
  const double xm = golden_max(absf, l, r);
  return absf(xm) > vbest ? xm : pts[jbest];
}

// Roots of D(x) = sum_j w_j / (x - t_j) from the arrowhead pencil, each
// polished by Newton iteration to full relative accuracy.
std::vector<double> barycentric_roots(const std::vector<double>& w, const std::vector<double>& t) {
  const int n = static_cast<int>(t.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n + 1, n + 1);
  B(0, 0) = 0.0;
  for (int j = 0; j < n; ++j) {
    A(0, j + 1) = w[j];
    A(j + 1, 0) = 1.0;
    A(j + 1, j + 1) = t[j];
  }
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(A, B, false);
  const auto alphas = ges.alphas();
  const auto betas = ges.betas();

  std::vector<double> roots;
  for (int e = 0; e <= n; ++e) {
    if (betas(e) == 0.0) continue;
    const std::complex<double> z = alphas(e) / betas(e);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
    if (std::abs(z.imag()) > 1e-6 * std::abs(z)) continue;
    double x = z.real();
    for (int it = 0; it < 60; ++it) {
      double D = 0.0;
      double Dp = 0.0;
      for (int j = 0; j < n; ++j) {
        const double d = x - t[j];
        D += w[j] / d;
        Dp -= w[j] / (d * d);
      }
      if (Dp == 0.0 || !std::isfinite(D)) break;
      const double step = D / Dp;
      x -= step;
      if (std::abs(step) <= 2.0 * kEps * std::abs(x)) break;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end(), std::greater<double>());
  return roots;
}

// Negative roots of D(x) = sum_j w_j / (x - t_j) for support t_j >= 0, found
// by sign changes on a logarithmic grid of -x and geometric bisection. This
// keeps full relative accuracy for roots many decades below 1, which the
// pencil cannot resolve.
std::vector<double> negative_roots(const std::vector<double>& w, const std::vector<double>& t) {
  auto D = [&](double x) {
    double s = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) s += w[j] / (x - t[j]);
    return s;
  };
  constexpr double lo_exp = -280.0;
  constexpr double hi_exp = 12.0;
  constexpr int per_decade = 40;
  const int count = static_cast<int>((hi_exp - lo_exp) * per_decade);
  std::vector<double> roots;
  double a = -std::pow(10.0, lo_exp);
  double fa = D(a);
  for (int i = 1; i <= count; ++i) {
    const double b = -std::pow(10.0, lo_exp + (hi_exp - lo_exp) * i / count);
    const double fb = D(b);
    if (fb == 0.0) {
      roots.push_back(b);
    } else if ((fa > 0.0) != (fb > 0.0) && fa != 0.0) {
      double lo = a, hi = b, flo = fa;  // |lo| < |hi|
      for (int it = 0; it < 200; ++it) {
        const double mid = -std::sqrt(lo * hi);
        const double fm = D(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
        if (std::abs(hi - lo) <= 4.0 * kEps * std::abs(hi)) break;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  std::sort(roots.begin(), roots.end(), std::greater<double>());
  return roots;
}

std::vector<double> continue_reference(const std::vector<double>& x) {
  const double s = x[1] / x[2];
  std::vector<double> out;
  out.reserve(x.size() + 2);
  out.push_back(0.0);
  out.push_back(x[1] * s * s);
  out.push_back(x[1] * s);
  out.insert(out.end(), x.begin() + 1, x.end());
  return out;
}

struct RemezLevel {
  std::vector<double> support;
  std::vector<double> weights;
  std::vector<double> values;
  std::vector<double> reference;
  double max_dev = 0.0;
  int iterations = 0;
};

RemezLevel remez_level(double gamma, int k, std::vector<double> x, const RemezOptions& opts) {
  constexpr int kSamples = 200;
  double best_spread = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opts.max_iterations; ++it) {
    auto sol = solve_reference(x, gamma);
    if (!sol) {
      throw Error(ErrorCode::NonConvergence,
                  "no sign-alternating barycentric solution at degree " + std::to_string(k) +
                      " iteration " + std::to_string(it));
    }
    const int n = k + 1;
    std::vector<double> t(n);
    std::vector<double> g(n);
    for (int j = 0; j < n; ++j) {
      t[j] = x[2 * j];
      g[j] = std::pow(t[j], gamma) + sol->h;
    }
    const auto& w = sol->beta;
    auto e = [&](double z) { return barycentric(t, w, g, z) - std::pow(z, gamma); };

    std::vector<double> edges{0.0};
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      edges.push_back(x[i] == 0.0 ? bisect_from_zero(e, x[i + 1]) : bisect(e, x[i], x[i + 1]));
    }
    edges.push_back(1.0);

    std::vector<double> nx;
    std::vector<double> vals;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double xm = locate_extremum(e, edges[i], edges[i + 1], kSamples);
      nx.push_back(xm);
      vals.push_back(e(xm));
    }

    double mx = 0.0;
    double mn = std::numeric_limits<double>::infinity();
    bool ordered = true;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      mx = std::max(mx, std::abs(vals[i]));
      mn = std::min(mn, std::abs(vals[i]));
      if (i > 0 && (!(nx[i] > nx[i - 1]) || !(vals[i] * vals[i - 1] < 0.0))) ordered = false;
    }
    if (!ordered) {
      throw Error(ErrorCode::NonConvergence,
                  "alternation set degenerated at degree " + std::to_string(k) + "; best spread " +
                      std::to_string(best_spread));
    }
    const double spread = (mx - mn) / mx;
    best_spread = std::min(best_spread, spread);
    if (spread <= opts.tol) {
      return RemezLevel{std::move(t), w, std::move(g), std::move(nx), mx, it};
    }
    x = std::move(nx);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "degree %d did not equioscillate within %d iterations; best spread %.3e",
                k, opts.max_iterations, best_spread);
  throw Error(ErrorCode::NonConvergence, buf);
}

double product_value(double b, const std::vector<double>& z, const std::vector<double>& d, double t) {
  double v = b;
  for (std::size_t i = 0; i < z.size(); ++i) v *= (t - z[i]) / (t - d[i]);
  return v;
}

}  // namespace

double RationalMinimax::eval_barycentric(double t) const {
  if (!has_barycentric()) throw Error(ErrorCode::InvalidArgument, "no barycentric data");
  return barycentric(support, weights, values, t);
}

double RationalMinimax::eval_product(double t) const { return product_value(b, zeros, poles, t); }

double RationalMinimax::operator()(double t) const {
  return has_barycentric() ? eval_barycentric(t) : eval_product(t);
}

double RationalMinimax::deviation(double t) const { return (*this)(t) - std::pow(t, gamma); }

bool EquioscillationCheck::alternates() const {
  for (std::size_t i = 1; i < deviations.size(); ++i) {
    if (!(deviations[i] * deviations[i - 1] < 0.0)) return false;
  }
  return !deviations.empty();
}

EquioscillationCheck check_equioscillation(const RationalMinimax& r, int samples_per_decade) {
  double scale = 1.0;
  if (!r.reference.empty() && r.reference.size() > 1) {
    scale = r.reference[1];
  } else if (!r.zeros.empty()) {
    scale = std::min(std::abs(r.zeros.front()), std::abs(r.poles.front()));
  }
  const double lo_exp = std::max(std::floor(std::log10(scale)) - 4.0, -300.0);
  const int count = static_cast<int>(std::ceil(-lo_exp * samples_per_decade)) + 1;

  std::vector<double> xs;
  xs.reserve(count + 1);
  xs.push_back(0.0);
  for (int i = 0; i < count; ++i) xs.push_back(std::pow(10.0, lo_exp - lo_exp * i / (count - 1)));
  xs.back() = 1.0;

  auto e = [&](double t) { return r.deviation(t); };
  std::vector<double> es(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) es[i] = e(xs[i]);

  EquioscillationCheck out;
  out.min_abs = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < xs.size()) {
    if (es[i] == 0.0) {
      ++i;
      continue;
    }
    const bool positive = es[i] > 0.0;
    std::size_t jbest = i;
    std::size_t j = i;
    while (j < xs.size() && es[j] != 0.0 && (es[j] > 0.0) == positive) {
      if (std::abs(es[j]) > std::abs(es[jbest])) jbest = j;
      ++j;
    }
    const double l = xs[jbest > 0 ? jbest - 1 : 0];
    const double rr = xs[std::min(jbest + 1, xs.size() - 1)];
    auto absf = [&](double t) { return std::abs(e(t)); };
    // Extrema at 0 and 1 stay on the end points.
    const bool at_end = jbest == 0 || jbest + 1 == xs.size();
    double xm = at_end ? xs[jbest] : golden_max(absf, l, rr);
    if (absf(xm) < std::abs(es[jbest])) xm = xs[jbest];
    const double v = e(xm);
    out.points.push_back(xm);
    out.deviations.push_back(v);
    out.max_abs = std::max(out.max_abs, std::abs(v));
    out.min_abs = std::min(out.min_abs, std::abs(v));
    i = j;
  }
  if (out.points.empty()) out.min_abs = 0.0;
  return out;
}

bool interlaces(const std::vector<double>& zeros, const std::vector<double>& poles) {
  if (zeros.size() != poles.size() || zeros.empty()) return false;
  double prev = 0.0;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (!(zeros[i] < prev)) return false;
    if (!(poles[i] < zeros[i])) return false;
    prev = poles[i];
  }
  return true;
}

RationalMinimax compute_bura(double gamma, int k, const RemezOptions& opts) {
  if (k < 1) throw Error(ErrorCode::DegenerateDegree, "degree must be at least 1");
  if (k > 12) throw Error(ErrorCode::InvalidArgument, "supported degrees are 1..12");
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0,1)");
  if (!(opts.tol >= 10.0 * kEps)) throw Error(ErrorCode::InvalidArgument, "tolerance below 10 eps");

  // Squared Chebyshev points for k = 1, then continuation in the degree.
  std::vector<double> x{0.0, 0.0625, 0.5625, 1.0};
  RemezLevel level;
  int total_iterations = 0;
  for (int kk = 1; kk <= k; ++kk) {
    if (kk > 1) x = continue_reference(level.reference);
    level = remez_level(gamma, kk, x, opts);
    total_iterations += level.iterations;
  }

  RationalMinimax r;
  r.gamma = gamma;
  r.k = k;
  r.support = level.support;
  r.weights = level.weights;
  r.values = level.values;
  r.reference = level.reference;
  r.iterations = total_iterations;

  std::vector<double> wg(r.weights.size());
  for (std::size_t j = 0; j < wg.size(); ++j) wg[j] = r.weights[j] * r.values[j];
  r.poles = negative_roots(r.weights, r.support);
  r.zeros = negative_roots(wg, r.support);
  if (static_cast<int>(r.poles.size()) != k || static_cast<int>(r.zeros.size()) != k ||
      !interlaces(r.zeros, r.poles)) {
    r.poles = barycentric_roots(r.weights, r.support);
    r.zeros = barycentric_roots(wg, r.support);
  }
  if (static_cast<int>(r.poles.size()) != k || static_cast<int>(r.zeros.size()) != k ||
      !interlaces(r.zeros, r.poles)) {
    throw Error(ErrorCode::NonConvergence,
                "extracted zeros/poles do not interlace at degree " + std::to_string(k));
  }
  r.b = r.eval_barycentric(1.0) / product_value(1.0, r.zeros, r.poles, 1.0);

  const auto check = check_equioscillation(r);
  if (static_cast<int>(check.points.size()) != 2 * k + 2 || !check.alternates()) {
    throw Error(ErrorCode::NonConvergence, "sampled deviation does not show 2k+2 alternations");
  }
  r.certified_error = std::max(level.max_dev, check.max_abs);
  return r;
}

FractionForm to_additive_form(const RationalMinimax& r) {
  if (!interlaces(r.zeros, r.poles) || !(r.b > 0.0)) {
    throw Error(ErrorCode::InterlacingViolated, "zeros and poles must interlace below 0 with b > 0");
  }
  const int k = r.k;
  FractionForm f;
  f.kind = FractionForm::Kind::Additive;
  f.gamma = r.gamma;
  f.k = k;
  f.error = r.certified_error;

  std::vector<double> zt(k);
  std::vector<double> dt(k);
  double c0 = r.b;
  for (int i = 0; i < k; ++i) {
    c0 *= r.zeros[i] / r.poles[i];
    zt[i] = 1.0 / r.zeros[i];
    dt[i] = 1.0 / r.poles[i];
  }
  f.additive.c0 = c0;
  f.additive.shifted_poles = dt;
  f.additive.residues.resize(k);
  for (int i = 0; i < k; ++i) {
    double c = c0;
    for (int j = 0; j < k; ++j) {
      c *= dt[i] - zt[j];
      if (j != i) c /= dt[i] - dt[j];
    }
    if (!(c > 0.0)) throw Error(ErrorCode::InvariantFailure, "nonpositive partial-fraction residue");
    f.additive.residues[i] = c;
  }
  if (!(c0 > 0.0)) throw Error(ErrorCode::InvariantFailure, "nonpositive constant term");
  return f;
}

FractionForm to_multiplicative_form(const RationalMinimax& r) {
  if (!interlaces(r.zeros, r.poles) || !(r.b > 0.0)) {
    throw Error(ErrorCode::InterlacingViolated, "zeros and poles must interlace below 0 with b > 0");
  }
  FractionForm f;
  f.kind = FractionForm::Kind::Multiplicative;
  f.gamma = r.gamma;
  f.k = r.k;
  f.error = r.certified_error;
  f.multiplicative.b = r.b;
  for (int i = 0; i < r.k; ++i) f.multiplicative.factors.emplace_back(r.zeros[i], r.poles[i]);
  return f;
}

double FractionForm::eval_rtilde(double lambda) const {
  if (kind == Kind::Additive) {
    double v = additive.c0;
    for (std::size_t i = 0; i < additive.residues.size(); ++i) {
      v += additive.residues[i] / (lambda - additive.shifted_poles[i]);
    }
    return v;
  }
  double v = multiplicative.b;
  for (const auto& [z, d] : multiplicative.factors) v *= factor(z, d, 1.0, lambda);
  return v;
}

TPartialFractions t_partial_fractions(const RationalMinimax& r) {
  if (!interlaces(r.zeros, r.poles)) {
    throw Error(ErrorCode::InterlacingViolated, "zeros and poles must interlace below 0");
  }
  TPartialFractions pf;
  pf.b = r.b;
  pf.poles = r.poles;
  pf.residues.resize(r.k);
  for (int i = 0; i < r.k; ++i) {
    double e = r.b;
    for (int j = 0; j < r.k; ++j) {
      e *= r.poles[i] - r.zeros[j];
      if (j != i) e /= r.poles[i] - r.poles[j];
    }
    pf.residues[i] = e;
  }
  return pf;
}

void write_coefficients(std::ostream& out, const std::vector<RationalMinimax>& rows) {
  out << "gamma,k,E,b,zeros...,poles...\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ',' << buf;
  };
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.gamma);
    out << buf << ',' << r.k;
    put(r.certified_error);
    put(r.b);
    for (double z : r.zeros) put(z);
    for (double d : r.poles) put(d);
    out << '\n';
  }
}

void save_coefficients(const std::string& path, const std::vector<RationalMinimax>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  write_coefficients(out, rows);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return cells;
}

double parse_real(const std::string& s, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::SchemaError, "line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

RationalMinimax from_product_form(double gamma, std::vector<double> zeros, std::vector<double> poles,
                                  double b) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorCode::InvariantFailure, "gamma outside (0,1)");
  if (!(b > 0.0)) throw Error(ErrorCode::InvariantFailure, "leading factor must be positive");
  if (!interlaces(zeros, poles)) throw Error(ErrorCode::InvariantFailure, "zeros and poles do not interlace");
  RationalMinimax r;
  r.gamma = gamma;
  r.k = static_cast<int>(zeros.size());
  r.zeros = std::move(zeros);
  r.poles = std::move(poles);
  r.b = b;
  const auto check = check_equioscillation(r);
  if (static_cast<int>(check.points.size()) != 2 * r.k + 2 || !check.alternates() || check.spread() > 1e-3) {
    throw Error(ErrorCode::InvariantFailure, "coefficients do not equioscillate");
  }
  r.certified_error = check.max_abs;
  r.reference = check.points;
  return r;
}

std::vector<RationalMinimax> read_coefficients(std::istream& in) {
  std::vector<RationalMinimax> rows;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv(line);
    if (!header) {
      if (cells.size() < 4 || cells[0] != "gamma" || cells[1] != "k" || cells[2] != "E" || cells[3] != "b") {
        throw Error(ErrorCode::SchemaError, "header must start with gamma,k,E,b");
      }
      header = true;
      continue;
    }
    if (cells.size() < 4) throw Error(ErrorCode::SchemaError, "line " + std::to_string(line_no) + ": too few columns");
    const double gamma = parse_real(cells[0], line_no);
    const double kd = parse_real(cells[1], line_no);
    const int k = static_cast<int>(kd);
    if (kd != k || k < 1) throw Error(ErrorCode::SchemaError, "line " + std::to_string(line_no) + ": bad degree");
    if (cells.size() != static_cast<std::size_t>(4 + 2 * k)) {
      throw Error(ErrorCode::SchemaError, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(4 + 2 * k) + " columns");
    }
    const double file_error = parse_real(cells[2], line_no);
    const double b = parse_real(cells[3], line_no);
    std::vector<double> zeros(k);
    std::vector<double> poles(k);
    for (int i = 0; i < k; ++i) {
      zeros[i] = parse_real(cells[4 + i], line_no);
      poles[i] = parse_real(cells[4 + k + i], line_no);
    }
    auto r = from_product_form(gamma, std::move(zeros), std::move(poles), b);
    if (std::abs(file_error - r.certified_error) > 1e-2 * r.certified_error) {
      throw Error(ErrorCode::InvariantFailure,
                  "line " + std::to_string(line_no) + ": stated error disagrees with sampled deviation");
    }
    rows.push_back(std::move(r));
  }
  if (!header) throw Error(ErrorCode::SchemaError, "missing header");
  return rows;
}

std::vector<RationalMinimax> load_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_coefficients(in);
}

}  // namespace bura
