#pragma once

#include "lqs/model.hpp"

namespace lqs {

// Residuals of the commutation-preservation identities. verdict is true
// when every residual is at or below the tolerance used for the check.
struct RealizabilityReport {
  double ccr_residual = 0.0;   // J A + A^dag J + C_f^dag J C_f
  double bf_residual = 0.0;    // B_f + flat(C_f)
  double bd_residual = 0.0;    // B_d + flat(Delta(K-, K+))
  double ck_residual = 0.0;    // C_K - Theta B_K1^T Theta       (quadrature check)
  double bk0_residual = 0.0;   // B_K0 - I                        (quadrature check)
  double b21_residual = 0.0;   // B_21 - Theta B_12^T Theta       (quadrature check)
  double tolerance = 0.0;
  bool verdict = false;
};

RealizabilityReport check_annihilation(const CMat& a, const CMat& b_f, const CMat& c_f,
                                       const CMat& b_d, const CMat& k_minus,
                                       const CMat& k_plus, double tol = 1e-9);
RealizabilityReport check_annihilation(const SystemMatrices& sys, const CMat& k_minus,
                                       const CMat& k_plus, double tol = 1e-9);

// Quadrature-form controller realizability: the Theta-skew Lyapunov
// identity over all noise ports plus the port-matrix ties.
RealizabilityReport check_quadrature_controller(const RMat& a_k, const RMat& b_k,
                                                const RMat& b_k1, const RMat& b_k2,
                                                const RMat& c_k, const RMat& b_k0,
                                                const RMat& b_12, const RMat& b_21,
                                                double tol = 1e-9);
RealizabilityReport check_quadrature_controller(const Controller& k, double tol = 1e-9);

// Factor a real skew-symmetric Z as B Theta B^T with B square of Z's
// size. Rank-deficient Z yields zero columns.
RMat skew_factor(const RMat& z, double tol = 1e-9);

// Given (A_K, B_K, C_K) in quadrature form, produce noise ports
// (B_K1, B_K2, B_K0) making the controller physically realizable.
struct Completion {
  RMat b_k1, b_k2, b_k0;
};
Completion complete_controller(const RMat& a_k, const RMat& b_k, const RMat& c_k);

}  // namespace lqs
