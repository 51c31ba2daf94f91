#include "lqs/quadrature.hpp"

namespace lqs {

namespace {

void require_even(const Index rows, const Index cols) {
  if (rows % 2 != 0 || cols % 2 != 0) {
    throw std::invalid_argument("quadrature transform: dimensions must be even");
  }
}

}  // namespace

RMat to_quadrature(const CMat& m, double tol) {
  require_even(m.rows(), m.cols());
  return to_quadrature(m, m.rows() / 2, m.cols() / 2, tol);
}

RMat to_quadrature(const CMat& m, Index row_channels, Index col_channels, double tol) {
  if (m.rows() != 2 * row_channels || m.cols() != 2 * col_channels) {
    throw std::invalid_argument("to_quadrature: channel counts do not match matrix shape");
  }
  const CMat out = quadrature_lambda(row_channels) * m * quadrature_lambda(col_channels).adjoint();
  // Scale the residual test by the matrix magnitude so large models are
  // not rejected on round-off.
  const double scale = std::max(1.0, m.rows() == 0 ? 0.0 : m.cwiseAbs().maxCoeff());
  return real_part_checked(out, tol * scale);
}

CMat from_quadrature(const RMat& m) {
  require_even(m.rows(), m.cols());
  return from_quadrature(m, m.rows() / 2, m.cols() / 2);
}

CMat from_quadrature(const RMat& m, Index row_channels, Index col_channels) {
  if (m.rows() != 2 * row_channels || m.cols() != 2 * col_channels) {
    throw std::invalid_argument("from_quadrature: channel counts do not match matrix shape");
  }
  return quadrature_lambda(row_channels).adjoint() * m.cast<Complex>() *
         quadrature_lambda(col_channels);
}

}  // namespace lqs
