#include "bura/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "bura/error.hpp"

namespace bura {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::FD: return "FD";
    case Scheme::FemConsistent: return "FemConsistent";
    case Scheme::FemLumped: return "FemLumped";
  }
  return "Unknown";
}

Mesh1D::Mesh1D(std::vector<double> nodes) : x_(std::move(nodes)) {
  if (x_.size() < 3) throw Error(ErrorCode::InvalidArgument, "mesh needs at least one interior node");
  if (x_.front() != 0.0 || x_.back() != 1.0) throw Error(ErrorCode::InvalidArgument, "mesh must span [0,1]");
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (!(x_[i] > x_[i - 1])) throw Error(ErrorCode::InvalidArgument, "mesh nodes must increase strictly");
  }
}

Mesh1D Mesh1D::uniform(int segments) {
  if (segments < 2) throw Error(ErrorCode::InvalidArgument, "need at least two segments");
  std::vector<double> x(segments + 1);
  for (int i = 0; i <= segments; ++i) x[i] = static_cast<double>(i) / segments;
  return Mesh1D(std::move(x));
}

double Mesh1D::min_segment() const {
  double m = x_[1] - x_[0];
  for (std::size_t i = 2; i < x_.size(); ++i) m = std::min(m, x_[i] - x_[i - 1]);
  return m;
}

Mesh1D Mesh1D::scaled(double factor) const {
  Mesh1D m;
  m.x_ = x_;
  for (double& v : m.x_) v *= factor;
  return m;
}

namespace {

void split_segment(std::vector<double>& out, double a, double b, int p) {
  for (int q = 1; q < p; ++q) out.push_back(a + (b - a) * q / p);
}

}  // namespace

Mesh1D refine_boundary(const Mesh1D& mesh, int steps, int p) {
  if (p < 2) throw Error(ErrorCode::InvalidArgument, "refinement factor p must be at least 2");
  std::vector<double> x = mesh.nodes();
  for (int s = 0; s < steps; ++s) {
    std::vector<double> y;
    y.reserve(x.size() + 2 * (p - 1));
    y.push_back(x[0]);
    split_segment(y, x[0], x[1], p);
    y.insert(y.end(), x.begin() + 1, x.end() - 1);
    split_segment(y, x[x.size() - 2], x.back(), p);
    y.push_back(x.back());
    x = std::move(y);
  }
  return Mesh1D(std::move(x));
}

Mesh1D refine_center(const Mesh1D& mesh, int steps, int p) {
  if (p < 2) throw Error(ErrorCode::InvalidArgument, "refinement factor p must be at least 2");
  std::vector<double> x = mesh.nodes();
  for (int s = 0; s < steps; ++s) {
    const auto it = std::find(x.begin(), x.end(), 0.5);
    if (it == x.end()) throw Error(ErrorCode::InvalidArgument, "mesh has no node at 0.5");
    const std::size_t j = static_cast<std::size_t>(it - x.begin());
    std::vector<double> y(x.begin(), x.begin() + j);
    split_segment(y, x[j - 1], x[j], p);
    y.push_back(x[j]);
    split_segment(y, x[j], x[j + 1], p);
    y.insert(y.end(), x.begin() + j + 1, x.end());
    x = std::move(y);
  }
  return Mesh1D(std::move(x));
}

int center_index(const Mesh1D& mesh) {
  const auto& x = mesh.nodes();
  const auto it = std::find(x.begin(), x.end(), 0.5);
  if (it == x.end()) throw Error(ErrorCode::IndexOutOfRange, "mesh has no node at 0.5");
  return static_cast<int>(it - x.begin()) - 1;
}

void write_mesh(const Mesh1D& mesh, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path);
  for (double v : mesh.nodes()) std::fprintf(f, "%.17g\n", v);
  if (std::fclose(f) != 0) throw Error(ErrorCode::IoError, "cannot write " + path);
}

Mesh1D read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::vector<double> x;
  double v;
  while (in >> v) x.push_back(v);
  if (!in.eof()) throw Error(ErrorCode::IoError, "malformed coordinate in " + path);
  return Mesh1D(std::move(x));
}

Grid2D::Grid2D(int n, Domain domain) : n_(n), domain_(domain) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need n >= 2 interior nodes per direction");
  if (domain == Domain::LShaped && (n + 1) % 2 != 0) {
    throw Error(ErrorCode::GridParity, "L-shaped grid needs n+1 even so that 0.5 is a grid line");
  }
  const int m = n + 2;
  index_.assign(static_cast<std::size_t>(m) * m, -1);
  const int half = (n + 1) / 2;
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      if (domain == Domain::LShaped && i >= half && j >= half) continue;
      index_[static_cast<std::size_t>(j) * m + i] = static_cast<int>(nodes_.size());
      nodes_.emplace_back(i, j);
    }
  }
}

int Grid2D::index(int i, int j) const {
  const int m = n_ + 2;
  if (i < 0 || j < 0 || i >= m || j >= m) return -1;
  return index_[static_cast<std::size_t>(j) * m + i];
}

double laplacian_1d_lambda1(int N) {
  const double h = 1.0 / (N + 1);
  const double s = std::sin(std::numbers::pi * h / 2.0);
  return 4.0 / (h * h) * s * s;
}

double laplacian_1d_lambdaN(int N) {
  const double h = 1.0 / (N + 1);
  const double s = std::sin(std::numbers::pi * N * h / 2.0);
  return 4.0 / (h * h) * s * s;
}

double laplacian_2d_lambda1(int n) { return 2.0 * laplacian_1d_lambda1(n); }
double laplacian_2d_lambdaN(int n) { return 2.0 * laplacian_1d_lambdaN(n); }

namespace {

double segment_average(const std::function<double(double)>& a, double lo, double hi) {
  // 5-point Gauss-Legendre on [lo, hi], divided by the length.
  static const double xg[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                               0.9061798459386640};
  static const double wg[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double s = 0.0;
  for (int q = 0; q < 5; ++q) s += wg[q] * a(mid + half * xg[q]);
  return 0.5 * s;
}

}  // namespace

DiscreteProblem fd_1d_variable(const std::function<double(double)>& a, int N, Quadrature q,
                               const std::function<double(double)>& f) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "need N >= 1");
  const double h = 1.0 / (N + 1);
  std::vector<double> ahalf(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double lo = i * h;
    const double hi = (i + 1) * h;
    ahalf[i] = q == Quadrature::Midpoint ? a(lo + 0.5 * h) : segment_average(a, lo, hi);
    if (!(ahalf[i] > 0.0)) throw Error(ErrorCode::NonpositiveCoefficient, "coefficient must be positive");
  }
  const double s = 1.0 / (h * h);
  Vector diag(N);
  Vector off(N - 1);
  for (int i = 0; i < N; ++i) diag(i) = s * (ahalf[i] + ahalf[i + 1]);
  for (int i = 0; i + 1 < N; ++i) off(i) = -s * ahalf[i + 1];

  DiscreteProblem p;
  p.scheme = Scheme::FD;
  p.A = SpdOperator::tridiagonal(std::move(diag), std::move(off));
  p.M = Mass::identity(N);
  p.rhs = Vector::Zero(N);
  if (f) {
    for (int i = 0; i < N; ++i) p.rhs(i) = f((i + 1) * h);
  }
  p.bounds.lambdaN = estimate_lambdaN(p.A, p.M);
  p.label = "fd1d";
  p.mesh = Mesh1D::uniform(N + 1);
  return p;
}

DiscreteProblem fd_1d_laplacian(int N, const std::function<double(double)>& f) {
  auto p = fd_1d_variable([](double) { return 1.0; }, N, Quadrature::Midpoint, f);
  p.bounds.lambda1 = Bound{laplacian_1d_lambda1(N), BoundProvenance::Exact};
  p.bounds.lambdaN = Bound{laplacian_1d_lambdaN(N), BoundProvenance::Exact};
  return p;
}

DiscreteProblem fd_2d_laplacian(int n, Domain domain) {
  Grid2D grid(n, domain);
  const double s = static_cast<double>(n + 1) * (n + 1);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(5 * static_cast<std::size_t>(grid.size()));
  for (int k = 0; k < grid.size(); ++k) {
    const auto [i, j] = grid.node(k);
    trips.emplace_back(k, k, 4.0 * s);
    const int nb[4] = {grid.index(i - 1, j), grid.index(i + 1, j), grid.index(i, j - 1), grid.index(i, j + 1)};
    for (int m : nb) {
      if (m >= 0) trips.emplace_back(k, m, -s);
    }
  }
  CsrMatrix A(grid.size(), grid.size());
  A.setFromTriplets(trips.begin(), trips.end());

  DiscreteProblem p;
  p.scheme = Scheme::FD;
  p.A = SpdOperator::csr(std::move(A));
  p.M = Mass::identity(grid.size());
  p.rhs = Vector::Zero(grid.size());
  if (domain == Domain::UnitSquare) {
    p.bounds.lambda1 = Bound{laplacian_2d_lambda1(n), BoundProvenance::Exact};
    p.bounds.lambdaN = Bound{laplacian_2d_lambdaN(n), BoundProvenance::Exact};
  } else {
    p.bounds.lambdaN = estimate_lambdaN(p.A, p.M);
  }
  p.label = domain == Domain::UnitSquare ? "fd2d" : "fd2d-lshaped";
  p.grid = grid;
  return p;
}

DiscreteProblem fd_1d_lumped_nonuniform(const Mesh1D& mesh, const std::function<double(double)>& f,
                                        std::optional<int> delta_at) {
  const int N = mesh.interior_count();
  const auto& x = mesh.nodes();
  Vector diag(N);
  Vector off(std::max(N - 1, 0));
  Vector ht(N);
  for (int i = 1; i <= N; ++i) {
    const double hl = mesh.segment(i);
    const double hr = mesh.segment(i + 1);
    diag(i - 1) = 1.0 / hl + 1.0 / hr;
    if (i < N) off(i - 1) = -1.0 / hr;
    ht(i - 1) = 0.5 * (hl + hr);
  }

  DiscreteProblem p;
  p.scheme = Scheme::FemLumped;
  p.A = SpdOperator::tridiagonal(std::move(diag), std::move(off));
  p.rhs = Vector::Zero(N);
  if (delta_at) {
    if (*delta_at < 0 || *delta_at >= N) throw Error(ErrorCode::IndexOutOfRange, "Dirac node outside mesh");
    p.rhs(*delta_at) = 1.0;
  } else if (f) {
    for (int i = 0; i < N; ++i) p.rhs(i) = ht(i) * f(x[i + 1]);
  }
  p.M = Mass::diagonal(std::move(ht));
  p.bounds.lambdaN = estimate_lambdaN(p.A, p.M);
  p.label = "lumped1d";
  p.mesh = mesh;
  return p;
}

Vector rhs_checkerboard(const Grid2D& grid) {
  Vector f(grid.size());
  const int c = grid.n() + 1;  // 2*i compared with n+1 decides the side of x = 0.5
  for (int k = 0; k < grid.size(); ++k) {
    const auto [i, j] = grid.node(k);
    const int sx = (2 * i > c) - (2 * i < c);
    const int sy = (2 * j > c) - (2 * j < c);
    f(k) = static_cast<double>(sx * sy);
  }
  return f;
}

Vector rhs_sine(const Grid2D& grid) {
  Vector f(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    const auto [x, y] = grid.coords(k);
    f(k) = std::sin(2.0 * std::numbers::pi * x) * std::sin(2.0 * std::numbers::pi * y);
  }
  return f;
}

void export_problem(const DiscreteProblem& p, const std::string& matrix_path, const std::string& rhs_path) {
  save_matrix_market(p.A, matrix_path);
  save_vector(p.rhs, rhs_path);
}

}  // namespace bura
