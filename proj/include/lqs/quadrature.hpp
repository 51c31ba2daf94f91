#pragma once

#include "lqs/doubled.hpp"

namespace lqs {

// Lambda_r M Lambda_c^dagger. A doubled-up-structured M comes out real;
// a residual imaginary part above tol means M was not doubled-up.
RMat to_quadrature(const CMat& m, double tol = kImagTol);
RMat to_quadrature(const CMat& m, Index row_channels, Index col_channels,
                   double tol = kImagTol);
inline RMat to_quadrature(const DoubledMatrix& m, double tol = kImagTol) {
  return to_quadrature(m.expand(), tol);
}

// Inverse transform: Lambda_r^dagger M Lambda_c.
CMat from_quadrature(const RMat& m);
CMat from_quadrature(const RMat& m, Index row_channels, Index col_channels);

}  // namespace lqs
