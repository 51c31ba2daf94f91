#pragma once

#include "lqs/doubled.hpp"

namespace lqs {

// Physical parameters of the general open-system model: self-energy
// Omega+/-, field couplings C+/-, direct couplings K+/-, plus free
// performance matrices. Omega_- must be Hermitian and Omega_+ symmetric.
struct GeneralModel {
  Index modes = 0;
  CMat omega_minus, omega_plus;  // n x n
  CMat c_minus, c_plus;          // m x n field coupling rows
  CMat k_minus, k_plus;          // n_d x n direct coupling
  CMat c_p, d_pd, d_pf;          // performance variable (shape-checked only)

  Index field_channels() const { return c_minus.rows(); }
  Index direct_channels() const { return k_minus.rows(); }
  void validate(double tol = 1e-9) const;
};

struct SystemMatrices {
  DoubledMatrix a;    // -Delta(i Omega-, i Omega+) - Delta(Gamma-, Gamma+)
  DoubledMatrix b_d;  // -flat(Delta(K-, K+))
  DoubledMatrix b_f;  // -flat(Delta(C-, C+))
  DoubledMatrix c_f;  // Delta(C-, C+)
};

// Gamma-/+ = (C-^dag C-/+  -  C+^T C+/-^#) / 2
std::pair<CMat, CMat> gamma_pair(const CMat& c_minus, const CMat& c_plus);

SystemMatrices build(const GeneralModel& g);

// Q = -(A + A^dagger), Hermitian; nonnegative exactly when the natural
// storage function certifies passivity.
CMat natural_q(const SystemMatrices& sys);

// The u = (v, w) input ordering of the dissipation analysis: interleaves
// [B_d B_f] so that the joint B multiplies the doubled-up [v; w] vector.
DoubledMatrix joint_b(const DoubledMatrix& b_d, const DoubledMatrix& b_f);

// Plant of the closed-loop synthesis arrangement. Input groups carry
// fixed roles: b_v noise-only channels, w + b_in the disturbance-bearing
// field channels, u the control field from the controller. Any group may
// be absent (zero-width matrices).
struct PlantModel {
  Rep rep = Rep::Annihilation;
  CMat a;
  CMat b_v, b_f, b_u;   // state inputs
  CMat c, d_v, d_f;     // measured output y
  CMat c_p, d_u, d_pf;  // performance row
  Index n() const { return a.rows(); }
  void validate() const;
  PlantModel to_rep(Rep target) const;
};

// Quantum controller parameter set. B_12/B_21 are the direct-coupling
// blocks injected into the closed loop; B_K0 is pinned to identity by
// physical realizability.
struct Controller {
  Rep rep = Rep::Annihilation;
  CMat a_k;
  CMat b_k;            // from measurement y
  CMat c_k;            // field output u
  CMat b_k1, b_k2;     // realizability noise ports
  CMat b_k0;           // identity
  CMat b_12, b_21;
  Index n() const { return a_k.rows(); }
  void validate() const;
  Controller to_rep(Rep target) const;
};

// Zero-width controller of a given mode count, matched to the plant's
// port dimensions (useful as the "no controller" element).
Controller zero_controller(const PlantModel& plant, Index controller_modes);

}  // namespace lqs
