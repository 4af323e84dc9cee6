#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bura/spd_operator.hpp"

namespace bura {

// Nodes 0 = x_0 < x_1 < ... < x_{N+1} = 1; x_1..x_N are the unknowns.
class Mesh1D {
 public:
  explicit Mesh1D(std::vector<double> nodes);
  static Mesh1D uniform(int segments);

  const std::vector<double>& nodes() const { return x_; }
  int interior_count() const { return static_cast<int>(x_.size()) - 2; }
  double segment(int i) const { return x_[i] - x_[i - 1]; }  // h_i, i = 1..N+1
  double min_segment() const;
  Mesh1D scaled(double factor) const;  // nodes multiplied by factor, end point no longer 1

 private:
  Mesh1D() = default;
  std::vector<double> x_;
};

Mesh1D refine_boundary(const Mesh1D& mesh, int steps, int p = 2);
Mesh1D refine_center(const Mesh1D& mesh, int steps, int p = 2);

void write_mesh(const Mesh1D& mesh, const std::string& path);
Mesh1D read_mesh(const std::string& path);

enum class Domain { UnitSquare, LShaped };

// Interior nodes of the uniform grid with spacing h = 1/(n+1), numbered
// row-major over y then x. For the L-shape the closed quadrant
// [0.5,1] x [0.5,1] holds no unknowns.
class Grid2D {
 public:
  Grid2D(int n, Domain domain);

  int n() const { return n_; }
  double h() const { return 1.0 / (n_ + 1); }
  Domain domain() const { return domain_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  // Index of grid point (i, j), 0 <= i, j <= n+1, or -1 when not an unknown.
  int index(int i, int j) const;
  std::pair<int, int> node(int k) const { return nodes_[k]; }
  std::pair<double, double> coords(int k) const {
    return {nodes_[k].first * h(), nodes_[k].second * h()};
  }

 private:
  int n_;
  Domain domain_;
  std::vector<int> index_;
  std::vector<std::pair<int, int>> nodes_;
};

enum class Scheme { FD, FemConsistent, FemLumped };

const char* to_string(Scheme s);

// For FD the solution is A^{-alpha} rhs. For the finite element schemes rhs is
// the load vector F and the solution is (M^{-1} A)^{-alpha} M^{-1} F.
struct DiscreteProblem {
  Scheme scheme = Scheme::FD;
  SpdOperator A;
  Mass M;
  Vector rhs;
  SpectralBounds bounds;
  std::string label;
  std::optional<Mesh1D> mesh;
  std::optional<Grid2D> grid;

  int size() const { return A.size(); }
};

enum class Quadrature { Midpoint, SegmentAverage };

// Balanced three-point scheme for -(a u')' on a uniform mesh with N unknowns.
DiscreteProblem fd_1d_variable(const std::function<double(double)>& a, int N, Quadrature q,
                               const std::function<double(double)>& f = nullptr);

// a == 1, carrying the closed-form extreme eigenvalues.
DiscreteProblem fd_1d_laplacian(int N, const std::function<double(double)>& f = nullptr);

DiscreteProblem fd_2d_laplacian(int n, Domain domain);

// Lumped-mass scheme on a nonuniform mesh: stiffness with 1/h_i entries,
// diagonal mass htilde_i = (h_i + h_{i+1})/2, load htilde_i f(x_i), or the unit
// load e_j of a Dirac mass at interior node delta_at.
DiscreteProblem fd_1d_lumped_nonuniform(const Mesh1D& mesh, const std::function<double(double)>& f,
                                        std::optional<int> delta_at = std::nullopt);

// Interior index of the node at x = 0.5.
int center_index(const Mesh1D& mesh);

// Linear elements on a uniform 1D mesh: S = (1/h) tridiag(-1,2,-1),
// M = (h/6) tridiag(1,4,1). The load is F_i = (f, phi_i) for f == 1 unless given.
DiscreteProblem fem_1d_consistent(int N, const Vector* load = nullptr);

struct Fem2D {
  Grid2D grid;
  SpdOperator S;
  SpdOperator M;        // consistent mass
  Vector M_lumped;      // vertex-quadrature mass
  double total_mass;    // sum of consistent mass entries over all vertices, boundary included
};

// Linear elements on the uniform right-triangle mesh, each square cut along its
// lower-left to upper-right diagonal. Requires n+1 even.
Fem2D fem_2d(int n, Domain domain);
inline Fem2D fem_2d_lshaped(int n) { return fem_2d(n, Domain::LShaped); }

DiscreteProblem fem_problem(const Fem2D& fem, bool lumped, Vector load);

// +1 where (x-0.5)(y-0.5) > 0, -1 where < 0, 0 on the lines x = 0.5, y = 0.5.
Vector rhs_checkerboard(const Grid2D& grid);
// sin(2 pi x) sin(2 pi y) at the nodes.
Vector rhs_sine(const Grid2D& grid);

// Extreme eigenvalues of the 1D and 2D uniform Laplacians.
double laplacian_1d_lambda1(int N);
double laplacian_1d_lambdaN(int N);
double laplacian_2d_lambda1(int n);
double laplacian_2d_lambdaN(int n);

void export_problem(const DiscreteProblem& p, const std::string& matrix_path, const std::string& rhs_path);

}  // namespace bura
