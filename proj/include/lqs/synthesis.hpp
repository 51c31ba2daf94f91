#pragma once

#include "lqs/analysis.hpp"
#include "lqs/interconnect.hpp"
#include "lqs/lmi.hpp"

#include <optional>

namespace lqs {

struct HinfOptions {
  std::optional<double> target_g;  // fixed attenuation; bisect down when absent
  double g_tol = 1e-4;             // bisection tolerance and loop-improvement threshold
  int max_rounds = 10;
  double margin = 1e-7;
  double var_bound = 1e4;
  double ill_conditioned_norm = 1e6;
  bool step3_identity_mn = true;   // use M = N = I in the restart step
};

// Multi-step H-infinity synthesis state. The controller is full order
// (n_K = n) and kept in quadrature form; b12/b21 are the direct-coupling
// blocks. verified_norm is always the independently recomputed
// closed-loop norm, never the solver's certificate alone.
struct SynthesisState {
  int step = 0;
  RMat x, y, a_hat, b_hat, c_hat;
  RMat m, n;
  RMat b12, b21;
  double certified_g = std::numeric_limits<double>::infinity();
  double verified_norm = std::numeric_limits<double>::infinity();
  Controller controller;
  std::string note;
};

// Step 1: solve the change-of-variables LMIs with zero direct coupling,
// choose M = I - XY, N = I, recover (A_K, B_K, C_K).
SynthesisState hinf_step1(const PlantModel& plant, const HinfOptions& opts = {});

// Step 2: freeze the step-1 variables and solve for the direct coupling
// B12 (B21 = Theta B12^T Theta) and the gain.
SynthesisState hinf_step2(const PlantModel& plant, const SynthesisState& state,
                          const HinfOptions& opts = {});

// Step 3: freeze coupling and (M, N), re-solve for (X, Y, A^, B^, C^)
// and the gain, recover with the same (M, N). Recoveries that fail the
// independent norm check are reported and the incoming state is kept.
SynthesisState hinf_step3(const PlantModel& plant, const SynthesisState& state,
                          const HinfOptions& opts = {});

// Full procedure: step 1, then the step-2/step-3 loop until the verified
// norm stops improving by more than g_tol or max_rounds is reached.
SynthesisState synthesize_hinf(const PlantModel& plant, const HinfOptions& opts = {});

// Controller recovery from the transformed variables (Eq. solution).
struct RecoveredController {
  RMat a_k, b_k, c_k;
};
RecoveredController recover_controller(const RMat& x, const RMat& y, const RMat& a_hat,
                                       const RMat& b_hat, const RMat& c_hat, const RMat& m,
                                       const RMat& n, const PlantModel& plant);

// Xi = P^-1 Pi1^-T Omega Pi1^-1.
RMat recover_coupling(const RMat& omega, const RMat& pi1, const RMat& p);

struct LqgOptions {
  bool polish = true;            // Nelder-Mead refinement from the grid argmin
  double penalty_floor = 1e6;    // Hurwitz penalty level
};

struct LqgResult {
  Controller controller;  // coupling set and realizability completion applied
  double cost = 0.0;      // recomputed on the returned controller
  RVec coupling;          // searched parameters at the optimum
};

// Search direct-coupling parameters minimizing the closed-loop LQG cost
// with a Hurwitz penalty. Annihilation plants with a 2-vector box search
// scalar (K-, K+); quadrature plants search the B12 entries row-major.
LqgResult lqg_synthesize(const PlantModel& plant, const Controller& indirect, const RVec& lo,
                         const RVec& hi, const std::vector<Index>& steps,
                         const LqgOptions& opts = {});

// Physical-realizability completion of a controller's noise ports; never
// changes (A_K, B_K, C_K, B_12).
Controller finalize(const Controller& k);

}  // namespace lqs
