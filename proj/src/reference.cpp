#include "bura/reference.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "bura/error.hpp"

namespace bura {

namespace {

struct FftwFree {
  void operator()(double* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<double, FftwFree>;

FftwBuffer fftw_buffer(std::size_t n) {
  auto* p = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  if (!p) throw Error(ErrorCode::InvalidArgument, "FFTW allocation failed");
  return FftwBuffer(p);
}

// In-place unnormalized DST-I (FFTW RODFT00) along both axes of an n x n array.
void dst2(double* data, int n) {
  fftw_plan plan = fftw_plan_r2r_2d(n, n, data, data, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

}  // namespace

Vector exact_discrete_sine(const Grid2D& grid, double alpha) {
  if (grid.domain() != Domain::UnitSquare) throw Error(ErrorCode::InvalidArgument, "unit-square grid required");
  const double h = grid.h();
  const double s = std::sin(std::numbers::pi * h);
  return std::pow(8.0 * s * s / (h * h), -alpha) * rhs_sine(grid);
}

Vector exact_discrete_dst(const Grid2D& grid, double alpha, const Vector& f) {
  if (grid.domain() != Domain::UnitSquare) throw Error(ErrorCode::InvalidArgument, "unit-square grid required");
  const int n = grid.n();
  if (f.size() != grid.size()) throw Error(ErrorCode::LengthMismatch, "data length differs from grid size");
  const double h = grid.h();
  const std::size_t N = static_cast<std::size_t>(n) * n;

  auto buf = fftw_buffer(N);
  double* d = buf.get();
  for (std::size_t k = 0; k < N; ++k) d[k] = f(static_cast<Eigen::Index>(k));
  dst2(d, n);

  std::vector<double> s2(n);
  for (int p = 0; p < n; ++p) {
    const double s = std::sin((p + 1) * std::numbers::pi * h / 2.0);
    s2[p] = s * s;
  }
  const double norm = 1.0 / (4.0 * (n + 1.0) * (n + 1.0));
  for (int q = 0; q < n; ++q) {
    for (int p = 0; p < n; ++p) {
      const double lam = 4.0 / (h * h) * (s2[p] + s2[q]);
      d[static_cast<std::size_t>(q) * n + p] *= std::pow(lam, -alpha) * norm;
    }
  }
  dst2(d, n);
  return Eigen::Map<Vector>(d, static_cast<Eigen::Index>(N));
}

double square_wave_heat(double t, double x) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "time must be positive");
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double pi = std::numbers::pi;
  if (t <= 0.05) {
    // Odd 2-periodic extension of g is the unit-period square wave: -1 on
    // (n, n+1/2), +1 on (n+1/2, n+1).
    const double s = 2.0 * std::sqrt(t);
    double v = 0.0;
    for (int n = -4; n <= 4; ++n) {
      v += -std::erf((x - n) / s) + 2.0 * std::erf((x - n - 0.5) / s) - std::erf((x - n - 1.0) / s);
    }
    return 0.5 * v;
  }
  // (g, psi_m) = -4 sqrt(2) / (m pi) for m = 2 mod 4, zero otherwise.
  double v = 0.0;
  for (int m = 2; m < 400; m += 4) {
    const double e = std::exp(-pi * pi * m * m * t);
    if (e < 1e-300) break;
    v += -8.0 / (m * pi) * e * std::sin(m * pi * x);
  }
  return v;
}

Eigen::MatrixXd checkerboard_exact(double alpha, const std::vector<double>& xs, const std::vector<double>& ys) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in (0,1)");
  // t = e^s; the integrand e^{alpha s} H_t(x) H_t(y) is analytic in s and decays
  // exponentially at both ends, so the trapezoid rule converges geometrically.
  const double s_min = -60.0;
  const double s_max = 3.0;
  const double ds = 0.05;
  const int steps = static_cast<int>(std::lround((s_max - s_min) / ds));
  const auto nx = static_cast<Eigen::Index>(xs.size());
  const auto ny = static_cast<Eigen::Index>(ys.size());
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(nx, ny);
  Vector hx(nx), hy(ny);
  for (int j = 0; j <= steps; ++j) {
    const double s = s_min + j * ds;
    const double t = std::exp(s);
    for (Eigen::Index i = 0; i < nx; ++i) hx(i) = square_wave_heat(t, xs[i]);
    for (Eigen::Index i = 0; i < ny; ++i) hy(i) = square_wave_heat(t, ys[i]);
    double w = std::exp(alpha * s) * ds;
    if (j == 0) w = w / 2.0 + std::exp(alpha * s) / alpha;  // int_{-inf}^{s_min} with H frozen
    if (j == steps) w /= 2.0;
    u.noalias() += w * hx * hy.transpose();
  }
  return u / std::tgamma(alpha);
}

double odd_power_tail(double p, long start) {
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "series diverges for p <= 1");
  // Direct summation for the first terms, Euler-Maclaurin for the rest.
  const long s0 = std::max(start, 1000L);
  double direct = 0.0;
  for (long i = s0 - 1; i >= start; --i) direct += std::pow(2.0 * i + 1.0, -p);
  const double y = 2.0 * s0 + 1.0;
  const double integral = std::pow(y, 1.0 - p) / (2.0 * (p - 1.0));
  const double g = std::pow(y, -p);
  const double g1 = -2.0 * p * std::pow(y, -p - 1.0);
  const double g3 = -8.0 * p * (p + 1.0) * (p + 2.0) * std::pow(y, -p - 3.0);
  return direct + integral + 0.5 * g - g1 / 12.0 + g3 / 720.0;
}

SeriesSolution::SeriesSolution(double alpha, SeriesRule rule, int terms) : alpha_(alpha), rule_(rule), terms_(terms) {
  if (terms < 1) throw Error(ErrorCode::InvalidArgument, "need at least one term");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in (0,1)");
  const double pi = std::numbers::pi;
  if (rule == SeriesRule::ConstantRhs) {
    // (1, psi_m) = 2 sqrt(2) / (m pi) for odd m, times (m pi)^{-2 alpha}.
    scale_ = 2.0 * std::sqrt(2.0) / std::pow(pi, 1.0 + 2.0 * alpha);
    power_ = 1.0 + 2.0 * alpha;
  } else {
    if (!(alpha > 0.25)) throw Error(ErrorCode::AlphaOutOfRange, "point-source solution is in L2 only for alpha > 0.25");
    // psi_m(1/2) = sqrt(2) (-1)^i for m = 2i+1.
    scale_ = std::sqrt(2.0) * std::pow(pi, -2.0 * alpha);
    power_ = 2.0 * alpha;
  }
  coef_.resize(terms);
  for (int i = 0; i < terms; ++i) {
    const double sign = (rule == SeriesRule::DeltaRhs && i % 2 == 1) ? -1.0 : 1.0;
    coef_[i] = sign * scale_ * std::pow(2.0 * i + 1.0, -power_);
  }
}

double SeriesSolution::mode_coefficient(int m) const {
  if (m < 1 || m % 2 == 0) return 0.0;
  const int i = (m - 1) / 2;
  return i < terms_ ? coef_[i] : 0.0;
}

double SeriesSolution::eval(double x) const {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double r2 = std::sqrt(2.0);
  double s = 0.0;
  for (int i = terms_ - 1; i >= 0; --i) s += coef_[i] * std::sin((2.0 * i + 1.0) * std::numbers::pi * x);
  return r2 * s;
}

std::vector<double> SeriesSolution::eval(const std::vector<double>& xs) const {
  std::vector<double> out(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) out[j] = eval(xs[j]);
  return out;
}

std::vector<double> SeriesSolution::sample_uniform(int intervals) const {
  if (intervals < 2 * terms_) throw Error(ErrorCode::InvalidArgument, "fine grid too coarse for the retained modes");
  const int n = intervals - 1;
  auto buf = fftw_buffer(static_cast<std::size_t>(n));
  double* d = buf.get();
  std::fill(d, d + n, 0.0);
  // RODFT00 computes 2 sum_j X_j sin(pi (j+1)(k+1)/(n+1)); psi_m carries sqrt(2).
  const double half_r2 = std::sqrt(2.0) / 2.0;
  for (int i = 0; i < terms_; ++i) d[2 * i] = coef_[i] * half_r2;
  fftw_plan plan = fftw_plan_r2r_1d(n, d, d, FFTW_RODFT00, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  std::vector<double> u(intervals + 1, 0.0);
  for (int j = 1; j < intervals; ++j) u[j] = d[j - 1];
  return u;
}

double SeriesSolution::l2_norm() const {
  // sum_{i>=0} (2i+1)^{-s} = (1 - 2^{-s}) zeta(s).
  const double s = 2.0 * power_;
  return scale_ * std::sqrt((1.0 - std::pow(2.0, -s)) * std::riemann_zeta(s));
}

double SeriesSolution::tail_bound() const { return scale_ * std::sqrt(odd_power_tail(2.0 * power_, terms_)); }

double relative_l2_vs_samples(const Mesh1D& mesh, const Vector& w, const std::vector<double>& u_fine, double u_norm) {
  const int N = mesh.interior_count();
  if (w.size() != N) throw Error(ErrorCode::LengthMismatch, "nodal values do not match the mesh");
  if (!(u_norm > 0.0)) throw Error(ErrorCode::ZeroReference, "reference norm is zero");
  const auto& x = mesh.nodes();
  const int F = static_cast<int>(u_fine.size()) - 1;
  auto nodal = [&](int i) { return (i == 0 || i == N + 1) ? 0.0 : w(i - 1); };

  double sum = 0.0;
  int seg = 1;
  for (int j = 0; j <= F; ++j) {
    const double xf = static_cast<double>(j) / F;
    while (seg < N + 1 && xf > x[seg]) ++seg;
    const double t = (xf - x[seg - 1]) / (x[seg] - x[seg - 1]);
    const double wf = (1.0 - t) * nodal(seg - 1) + t * nodal(seg);
    const double e = wf - u_fine[j];
    sum += (j == 0 || j == F ? 0.5 : 1.0) * e * e;
  }
  return std::sqrt(sum / F) / u_norm;
}

double relative_l2_vs_fine_grid(const Mesh1D& mesh, const Vector& w, const SeriesSolution& s, int fine_intervals) {
  return relative_l2_vs_samples(mesh, w, s.sample_uniform(fine_intervals), s.l2_norm());
}

}  // namespace bura
