#pragma once

#include "lqs/types.hpp"

#include <functional>
#include <vector>

namespace lqs {

using Objective = std::function<double(const RVec&)>;

struct NelderMeadOptions {
  double simplex_tol = 1e-8;   // terminate when the simplex diameter shrinks below this
  int max_evals_per_dim = 500;
  double initial_step = 1.0;
};

struct NelderMeadResult {
  RVec x;
  double f = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Standard reflect/expand/contract/shrink simplex search. Never returns
// a point worse than the start.
NelderMeadResult nelder_mead(const Objective& f, const RVec& x0,
                             const NelderMeadOptions& opts = {});

// Wrap an objective with a Hurwitz barrier: outside the stabilizing
// region the value is 1e6 plus the spectral abscissa, keeping the search
// pointed back toward stability.
Objective penalized(const Objective& f, const std::function<CMat(const RVec&)>& drift_of);

struct GridResult {
  RVec x;
  double f = 0.0;
  std::vector<Index> index;  // grid coordinates of the argmin
};

// Exhaustive evaluation over an axis-aligned grid with `steps[d]` points
// per dimension; ties break toward the lexicographically first index.
GridResult grid_search(const Objective& f, const RVec& lo, const RVec& hi,
                       const std::vector<Index>& steps);

}  // namespace lqs
