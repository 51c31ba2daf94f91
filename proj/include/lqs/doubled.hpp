#pragma once

#include "lqs/types.hpp"

namespace lqs {

// Doubled-up matrix [[U, V], [V#, U#]] (# = entrywise conjugate), stored
// compactly as the pair (U, V). Sums, real scalings and products of
// doubled-up matrices are doubled-up again, so all model algebra can stay
// in the compact form.
struct DoubledMatrix {
  CMat minus;  // U
  CMat plus;   // V

  DoubledMatrix() = default;
  DoubledMatrix(CMat u, CMat v);

  Index rows() const { return 2 * minus.rows(); }
  Index cols() const { return 2 * minus.cols(); }
  Index block_rows() const { return minus.rows(); }
  Index block_cols() const { return minus.cols(); }

  CMat expand() const;

  static DoubledMatrix Identity(Index n);
  static DoubledMatrix Zero(Index r, Index c);
  // Split an explicit 2r x 2k matrix into (U, V); throws if the lower
  // block row is not the conjugate copy of the upper one within tol.
  static DoubledMatrix FromExpanded(const CMat& x, double tol = 1e-9);
};

DoubledMatrix delta(const CMat& u, const CMat& v);
inline DoubledMatrix delta(Complex u, Complex v) {
  return delta(CMat::Constant(1, 1, u), CMat::Constant(1, 1, v));
}

DoubledMatrix operator+(const DoubledMatrix& a, const DoubledMatrix& b);
DoubledMatrix operator-(const DoubledMatrix& a, const DoubledMatrix& b);
DoubledMatrix operator-(const DoubledMatrix& a);
DoubledMatrix operator*(const DoubledMatrix& a, const DoubledMatrix& b);
DoubledMatrix operator*(double s, const DoubledMatrix& a);

// X -> J_m X^dagger J_n for even-dimensioned X (the flat operation).
CMat flat(const CMat& x);
// On doubled-up matrices: flat(Delta(U, V)) = Delta(U^dagger, -V^T).
DoubledMatrix flat(const DoubledMatrix& x);

// Structure constants.
CMat signature_j(Index n);        // diag(I_n, -I_n)
RMat symplectic_theta(Index n);   // [[0, I_n], [-I_n, 0]]
CMat quadrature_lambda(Index n);  // (1/sqrt2) [[I, I], [-iI, iI]], unitary
RMat ito_f(Index m);              // diag(0_m, I_m)

// Channel concatenation in the compact representation.
DoubledMatrix hstack(const DoubledMatrix& a, const DoubledMatrix& b);
DoubledMatrix vstack(const DoubledMatrix& a, const DoubledMatrix& b);
DoubledMatrix block_diag(const DoubledMatrix& a, const DoubledMatrix& b);

}  // namespace lqs
