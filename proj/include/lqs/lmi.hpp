#pragma once

#include "lqs/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace lqs {
namespace lmi {

// One affine symmetric constraint G(x) = f0 + sum_i x_i coeffs[i],
// required negative semidefinite (up to the solve margin).
struct Constraint {
  RMat f0;
  std::vector<RMat> coeffs;
};

struct Problem {
  Index num_vars = 0;
  std::vector<Constraint> constraints;
  std::vector<std::string> var_names;  // optional, for diagnostics

  // Probe an affine assembler at the unit vectors to extract coefficient
  // blocks. assemble(x) must return the same block list for every x.
  static Problem from_affine(Index p,
                             const std::function<std::vector<RMat>(const RVec&)>& assemble);

  std::vector<RMat> eval(const RVec& x) const;
  double max_eigenvalue(const RVec& x) const;
  // Fix variable `idx` to `value`: folds its coefficients into f0.
  Problem substitute(Index idx, double value) const;
};

enum class Status { Feasible, Infeasible, Stalled };

struct Solution {
  Status status = Status::Stalled;
  RVec x;
  double max_eig = 0.0;  // recomputed by direct eigenvalue evaluation
  std::string note;
};

struct Options {
  double margin = 1e-7;      // require G(x) <= -margin I
  double slack_tol = 1e-8;   // acceptance slack on the eigenvalue recheck
  double var_bound = 1e4;    // |x_i| <= var_bound box
  int max_newton = 200;
  double mu0 = 1.0;
  double mu_factor = 20.0;
  double infeasible_tol = 1e-9;  // t* above margin+this certifies failure to find
};

// Phase-I barrier method: minimize t subject to G_j(x) <= t I (plus the
// variable box), Newton on the log-det barrier with an increasing mu
// ladder. Early exit as soon as t clears the margin.
Solution feasibility(const Problem& problem, const Options& opts = {},
                     const RVec* warm_start = nullptr);

// Bisection on the linear gain variable with the feasibility inner loop.
// The problem must be feasible at g = hi. Returns the smallest certified
// g within tol and its assignment (gain variable removed).
struct GainResult {
  double g = 0.0;
  Solution solution;
};
GainResult minimize_gain(const Problem& problem, Index gain_var, double lo, double hi,
                         double tol = 1e-4, const Options& opts = {});

// Hermitian H <= 0 iff [[Re H, -Im H], [Im H, Re H]] <= 0.
RMat hermitian_embed(const CMat& h);

// Matrix-valued decision variables flattened to named scalars. Symmetric
// blocks use the upper-triangle parameterization.
struct VarBlock {
  std::string name;
  Index rows = 0, cols = 0;
  bool symmetric = false;
  Index offset = 0;
};

struct VarLayout {
  std::vector<VarBlock> blocks;
  Index size = 0;

  void add(const std::string& name, Index rows, Index cols, bool symmetric = false);
  RMat unpack(const RVec& x, const std::string& name) const;
  void pack(RVec& x, const std::string& name, const RMat& value) const;
  std::vector<std::string> scalar_names() const;
};

// Hermitian n x n matrix variable over n^2 real scalars.
struct HermitianVar {
  Index n = 0;
  Index size() const { return n * n; }
  CMat unpack(const RVec& x, Index offset = 0) const;
};

}  // namespace lmi
}  // namespace lqs
