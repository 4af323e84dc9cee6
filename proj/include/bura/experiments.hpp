#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bura/diagnostics.hpp"
#include "bura/rational_minimax.hpp"
#include "bura/solvers.hpp"

namespace bura {

// ---------------------------------------------------------------- CSV output

// Scientific notation with 10 significant digits.
std::string format_sci(double v);
std::string format_opt(const std::optional<double>& v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  void write(std::ostream& out) const;
  void save(const std::string& path) const;  // IoError when the file cannot be written

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Named columnar series for plotting. Written as blocks separated by a blank
// line, each headed by `# <name>` and a `# col1 col2 ...` line.
struct PlotSeries {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void emit_plotdata(const std::vector<PlotSeries>& set, const std::string& path);
void emit_plotdata(const std::vector<PlotSeries>& set, std::ostream& out);

// ---------------------------------------------------------------- Table 1

struct Table1Row {
  double gamma = 0.0;
  int k = 0;
  double error = 0.0;
  std::optional<double> paper;
  int iterations = 0;
  double spread = 0.0;        // relative spread of the alternation magnitudes
  bool interlaced = false;
  bool residues_positive = false;
};

std::vector<Table1Row> run_table1(const std::vector<double>& gammas, const std::vector<int>& ks,
                                  const RemezOptions& opts = {});
CsvTable table1_csv(const std::vector<Table1Row>& rows);

// ------------------------------------------------ Tables 2 and 3 (uniform 2D)

// Degrees for a common budget of `solves` linear systems: P-BURA k = solves,
// BURA-orig k = solves - 1, Q-method the smallest k with m + M + 1 == solves
// (largest k below the budget when no k hits it exactly).
int orig_degree_for_budget(int solves);
int q_degree_for_budget(double alpha, int solves);

struct UniformOptions {
  std::vector<double> alphas{0.25, 0.5, 0.75};
  std::vector<int> h_exps{6, 7, 8, 9};
  std::vector<Method> methods{Method::BuraOrig, Method::PBuraAdditive, Method::QMethod, Method::KPrimeQMethod};
  int budget = 9;               // P-BURA degree; the other methods are matched to it
  double kprime = 1.0 / 3.0;
  double tol = 1e-12;
};

struct UniformCell {
  int table = 3;                // 2: checkerboard data, 3: sine data
  double alpha = 0.0;
  int h_exp = 0;
  Method method = Method::PBuraAdditive;
  int degree = 0;               // k of the rational approximation or of the quadrature, 0 for k'-Q
  double kprime = 0.0;
  int systems_solved = 0;
  ErrorNorms errors;
  double scale = 0.0;
  std::string scale_provenance;
  // P-BURA only: delta^{-alpha} E ||f|| / ||ref||, a bound for the relative l2 error.
  std::optional<double> bound;
  std::optional<double> paper_l2;
  std::optional<double> paper_linf;
  double wall_seconds = 0.0;
};

// Example 2: sin(2 pi x) sin(2 pi y) data, reference = exact discrete solution.
std::vector<UniformCell> run_table3(const UniformOptions& opts);
// Example 1: checkerboard data, reference = same-mesh exact discrete solution by
// sine transforms.
std::vector<UniformCell> run_table2(const UniformOptions& opts);
CsvTable uniform_csv(const std::vector<UniformCell>& cells);
CsvTable uniform_timing_csv(const std::vector<UniformCell>& cells);

// ----------------------------------------- Tables 4 and 5 (1D local refinement)

struct RefinementOptions {
  std::vector<double> alphas;
  std::vector<int> h0_exps{6, 7, 8, 9, 10};
  std::optional<int> steps;     // refinement steps of the last level; default reaches the published min segment
  int p = 2;
  int k = 9;
  int fine_exp = 18;
  int terms = 10000;
};

struct RefinementCell {
  int table = 4;
  double alpha = 0.0;
  int h0_exp = 0;
  bool last = false;
  int steps = 0;
  int nodes = 0;
  double min_segment = 0.0;
  double error = 0.0;
  std::optional<double> paper;
  std::optional<int> paper_nodes;
  double wall_seconds = 0.0;
};

// Constant data, boundary refinement.
std::vector<RefinementCell> run_table4(RefinementOptions opts);
// Point source at x = 1/2, central refinement.
std::vector<RefinementCell> run_table5(RefinementOptions opts);
CsvTable refinement_csv(const std::vector<RefinementCell>& cells);
// Two-point series (level 0, last level) per (alpha, h0).
std::vector<PlotSeries> refinement_plotdata(const std::vector<RefinementCell>& cells);

// ------------------------------------------------ Tables 6-8 (M-matrix study)

struct MmatrixCell {
  int table = 6;
  double alpha = 0.0;
  int inverse_h = 0;
  MmatrixReport report;
  std::optional<double> paper_mrows;
  std::optional<double> paper_moffd;
  int mrows_decimals = 5;       // printed precision of the published entries
  int moffd_decimals = 6;
};

// table = 6, 7 (1D consistent mass) or 8 (L-shaped domain); empty lists select
// the published rows and columns.
std::vector<MmatrixCell> run_mmatrix(int table, std::vector<double> alphas = {}, std::vector<int> inverse_hs = {});
CsvTable mmatrix_csv(const std::vector<MmatrixCell>& cells);

// ------------------------------------------------ Tensor-product checkerboard

struct Figure2Options {
  double alpha = 0.25;
  int h0_exp = 9;
  int steps = 6;
  int k = 9;
  double window_lo = 0.496;
  double window_hi = 0.504;
  int sample_exp = 16;
  int stride = 4;               // subsampling of the written error and solution grids
};

struct Figure2Result {
  int nodes_1d = 0;             // interior nodes of the refined 1D mesh on [0, 1/2]
  int grid_size = 0;            // 2 * nodes_1d + 1 per direction on the unit square
  double delta = 0.0;
  double max_error = 0.0;       // over the full sample grid of the window
  std::vector<PlotSeries> series;
};

Figure2Result run_figure2(const Figure2Options& opts);

// ------------------------------------------------------------- CLI plumbing

enum class Experiment { BuraTable, Table2, Table3, Table4, Table5, MmatrixStudy, Figure2, SingleSolve };

struct ExperimentConfig {
  Experiment experiment = Experiment::BuraTable;
  std::vector<double> alphas;
  std::vector<int> ks;
  std::vector<double> hs;
  std::optional<int> refine_steps;
  int p = 2;
  std::vector<Method> methods;
  std::optional<double> kprime;
  double tol = 1e-12;
  std::string out;              // empty: CSV to stdout
  std::uint64_t seed = 1;
  std::string problem = "fd2d"; // SingleSolve: fd2d, checkerboard, fd1d
  std::optional<int> table;     // MmatrixStudy: 6, 7 or 8
};

// Validates the configuration (ConfigError) and runs it. CSV goes to cfg.out or
// `out`; run times go to a sibling `<out>.timing.csv` so that the main file is
// reproducible byte for byte.
void run(const ExperimentConfig& cfg, std::ostream& out);

// h given as a power of two, returns the exponent e with h = 2^-e.
int power_of_two_exponent(double h);

}  // namespace bura
