#pragma once

#include "lqs/interconnect.hpp"
#include "lqs/model.hpp"

#include <optional>
#include <string>

namespace lqs {

enum class StabilityClass { ExponentiallyStable, MarginallyStable, Unstable };

const char* to_string(StabilityClass c);

// Spectral classification: exponentially stable iff the spectral
// abscissa is negative; imaginary-axis eigenvalues must be semisimple
// for marginal stability, otherwise the system is unstable.
StabilityClass classify_stability(const CMat& a, double tol = 1e-8);

// Solve A P + P A^dagger + W = 0 by Kronecker vectorization. Throws if A
// is not Hurwitz. The returned P is Hermitian; P >= 0 whenever W >= 0.
CMat lyapunov_solve(const CMat& a, const CMat& w);

// Theorem-1 certificate check: holds iff P >= 0, Q >= cP, c > 0 and
// A^dag P + P A + Q <= 0. lambda = tr(B_f^dag P B_f F).
struct DecayBound {
  bool holds = false;
  double lambda = 0.0;
  std::string note;
};
DecayBound decay_bound(const CMat& a, const CMat& b_f, const CMat& p, const CMat& q, double c,
                       double tol = 1e-8);

// Quadratic supply rate r = 1/2 [a; u]^dag R [a; u].
struct SupplyRate {
  CMat r11, r12, r22;
  CMat assemble() const;
};

SupplyRate passivity_supply(const CMat& q, const CMat& c_p);
SupplyRate gain_supply(const CMat& c_p, const CMat& d_p, double g);

enum class LMIVerdict { Feasible, Infeasible, SolverFailure };

struct DissipationResult {
  LMIVerdict status = LMIVerdict::SolverFailure;
  CMat p;
  double lambda = 0.0;
  std::string note;
};

// Dissipation LMI of Theorem 2 over Hermitian P >= 0. b must be the
// joint (v, w)-ordered input matrix.
DissipationResult dissipation_feasible(const CMat& a, const CMat& b, const CMat& b_f,
                                       const SupplyRate& r);

struct PassivityResult {
  bool passive = false;
  CMat p, q;
  bool natural_certificate = false;  // P = I, C_p = B^dag, Q = -(A + A^dag)
  std::string note;
};

// Positive real lemma feasibility for performance variable z = C_p a.
PassivityResult passivity_check(const CMat& a, const CMat& b, const CMat& c_p);
PassivityResult passivity_check(const SystemMatrices& sys, const CMat& c_p);

// L2 gain of C (sI - A)^-1 B + D via bisection on the Hamiltonian
// imaginary-axis eigenvalue test. Returns +inf when A is not Hurwitz.
double hinf_norm(const CMat& a, const CMat& b, const CMat& c, const CMat& d,
                 double rtol = 1e-6);
double hinf_norm(const ClosedLoop& cl, double rtol = 1e-6);

// Strict bounded real lemma record: the three equivalent routes are
// evaluated independently and reported together.
struct StrictBrlResult {
  bool holds = false;           // overall verdict
  bool norm_ok = false;         // A Hurwitz and ||.||_inf < g
  bool lmi_feasible = false;    // item iii
  bool riccati_ok = false;      // item iv (stabilizing solution exists, P2 > 0)
  bool ordering_ok = false;     // P1 strictly between the extremal Riccati solutions
  CMat p1, p2;
  std::string note;
};
StrictBrlResult strict_brl(const CMat& a, const CMat& b, const CMat& c_p, const CMat& d_p,
                           double g);

// Infinite-horizon LQG cost Tr(C P C^dag). The noise intensity follows
// the representation: annihilation form drives the Lyapunov equation
// with (1/2) G G^dag, quadrature form with G G^T (unit-intensity
// quadrature noise convention of the synthesis examples). Returns +inf
// if the drift is not Hurwitz.
double lqg_cost(const CMat& a, const CMat& g, const CMat& c, Rep rep);
double lqg_cost(const ClosedLoop& cl);

// Stabilizing solution of A^dag P + P A + P S P + Q = 0, S,Q Hermitian,
// via the stable invariant subspace of the Hamiltonian matrix. Empty
// optional when no stabilizing solution exists; throws on ill-conditioned
// subspace extraction.
std::optional<CMat> care_solve(const CMat& a, const CMat& s, const CMat& q,
                               bool antistabilizing = false);

}  // namespace lqs
