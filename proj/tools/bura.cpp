// Experiment runner: regenerates the BURA error table, the uniform-mesh and
// refined-mesh error studies and the consistent-mass M-matrix study as CSV.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bura/error.hpp"
#include "bura/experiments.hpp"

namespace {

using bura::Error;
using bura::ErrorCode;

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& s) {
  try {
    // 2^-8 and 1/10 forms.
    if (auto p = s.find('^'); p != std::string::npos) return std::pow(std::stod(s.substr(0, p)), std::stod(s.substr(p + 1)));
    if (auto p = s.find('/'); p != std::string::npos) return std::stod(s.substr(0, p)) / std::stod(s.substr(p + 1));
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, "cannot parse number '" + s + "'");
  }
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s)) out.push_back(parse_real(item));
  return out;
}

// "5..10", "5,7,9" or "9".
std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split(s)) {
    try {
      if (auto p = item.find(".."); p != std::string::npos) {
        const int a = std::stoi(item.substr(0, p)), b = std::stoi(item.substr(p + 2));
        if (b < a) throw std::invalid_argument(item);
        for (int k = a; k <= b; ++k) out.push_back(k);
      } else {
        out.push_back(std::stoi(item));
      }
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "cannot parse integer list '" + s + "'");
    }
  }
  return out;
}

struct Flags {
  std::string alpha, k, h, h0, method;
  std::optional<double> kprime;
  std::optional<int> refine_steps;
  int p = 2;
  double tol = 1e-12;
  std::string out;
  std::uint64_t seed = 1;
  std::string problem = "fd2d";
  std::optional<int> table;
};

void add_common(CLI::App* sub, Flags& f, bool solver_flags, bool mesh_flags) {
  sub->add_option("--alpha,--alphas", f.alpha, "Exponent(s), comma separated");
  sub->add_option("--k", f.k, "Degree(s) or solve budget, e.g. 5..10 or 9");
  sub->add_option("--h", f.h, "Mesh size(s), e.g. 2^-8,2^-9 or 1/10");
  sub->add_option("--tol", f.tol, "Solver tolerance (Remez tolerance for bura-table)");
  sub->add_option("--out", f.out, "Output CSV path (stdout when omitted)");
  sub->add_option("--seed", f.seed, "Seed for randomized batteries");
  if (solver_flags) {
    sub->add_option("--method", f.method, "Methods: pbura, pbura-mult, bura-orig, q, kprime-q");
    sub->add_option("--kprime", f.kprime, "Quadrature step of the k'-Q-method");
  }
  if (mesh_flags) {
    sub->add_option("--h0", f.h0, "Initial uniform mesh size(s)");
    sub->add_option("--refine-steps", f.refine_steps, "Refinement steps of the last level");
    sub->add_option("--p", f.p, "Parts per refined segment");
  }
}

bura::ExperimentConfig to_config(bura::Experiment e, const Flags& f, bool method_flag_given) {
  bura::ExperimentConfig c;
  c.experiment = e;
  c.alphas = parse_reals(f.alpha);
  c.ks = parse_ints(f.k);
  c.hs = parse_reals(f.h0.empty() ? f.h : f.h0);
  c.refine_steps = f.refine_steps;
  c.p = f.p;
  c.kprime = f.kprime;
  c.tol = f.tol;
  c.out = f.out;
  c.seed = f.seed;
  c.problem = f.problem;
  c.table = f.table;
  if (method_flag_given) {
    for (const auto& m : split(f.method)) c.methods.push_back(bura::parse_method(m));
  } else if (e == bura::Experiment::SingleSolve) {
    c.methods = {bura::Method::PBuraAdditive};
  } else {
    c.methods = {bura::Method::BuraOrig, bura::Method::PBuraAdditive, bura::Method::QMethod,
                 bura::Method::KPrimeQMethod};
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional power solvers based on best uniform rational approximation"};
  app.require_subcommand(1);
  // --h is a mesh size, so help is --help only.
  app.set_help_flag("--help", "Print this help message and exit");
  Flags f;

  struct Sub {
    const char* name;
    const char* help;
    bura::Experiment kind;
    bool solver;
    bool mesh;
  };
  const Sub subs[] = {
      {"bura-table", "E_{gamma,k} of the best uniform rational approximation", bura::Experiment::BuraTable, false, false},
      {"solve", "One problem, one exponent, one or more methods", bura::Experiment::SingleSolve, true, false},
      {"table2", "Checkerboard data on uniform meshes", bura::Experiment::Table2, true, false},
      {"table3", "Sine data on uniform meshes", bura::Experiment::Table3, true, false},
      {"table4", "Constant data, boundary refinement in 1D", bura::Experiment::Table4, false, true},
      {"table5", "Point source, central refinement in 1D", bura::Experiment::Table5, false, true},
      {"mmatrix", "Entries of M A^alpha for the consistent mass matrix", bura::Experiment::MmatrixStudy, false, false},
      {"figure2", "Tensor-product checkerboard on a refined mesh, plot data", bura::Experiment::Figure2, false, true},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> apps;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->set_help_flag("--help", "Print this help message and exit");
    add_common(sub, f, s.solver, s.mesh);
    if (s.kind == bura::Experiment::SingleSolve) {
      sub->add_option("--problem", f.problem, "fd2d (sine data), checkerboard, fd1d");
    }
    if (s.kind == bura::Experiment::MmatrixStudy) {
      sub->add_option("--table", f.table, "6, 7 or 8 (all when omitted)");
    }
    apps.emplace_back(sub, &s);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [sub, s] : apps) {
      if (!sub->parsed()) continue;
      const bool method_given = s->solver && sub->count("--method") > 0;
      bura::run(to_config(s->kind, f, method_given), std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "bura: " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "bura: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
