#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <type_traits>

namespace lqs {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

// Residual imaginary part allowed when a matrix is claimed to be real.
inline constexpr double kImagTol = 1e-10;

// Representation of a state-space model: complex annihilation-creation
// form, or the real quadrature (q, p) form obtained by conjugation with
// the unitary Lambda.
enum class Rep { Annihilation, Quadrature };

inline const char* to_string(Rep r) {
  return r == Rep::Annihilation ? "annihilation" : "quadrature";
}

template <typename Derived>
CMat to_cmat(const Eigen::MatrixBase<Derived>& m) {
  if constexpr (std::is_same_v<typename Derived::Scalar, Complex>) {
    return m;
  } else {
    return m.template cast<Complex>();
  }
}

// Real part of a nominally-real complex matrix; throws if the imaginary
// residual exceeds tol.
RMat real_part_checked(const CMat& m, double tol = kImagTol);

inline double spectral_abscissa(const CMat& a) {
  if (a.rows() == 0) return -std::numeric_limits<double>::infinity();
  return a.eigenvalues().real().maxCoeff();
}

inline double max_sigma(const CMat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return m.jacobiSvd().singularValues()(0);
}

}  // namespace lqs
