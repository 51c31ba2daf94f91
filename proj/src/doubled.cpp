#include "lqs/doubled.hpp"

namespace lqs {

RMat real_part_checked(const CMat& m, double tol) {
  const double resid = m.rows() == 0 ? 0.0 : m.imag().cwiseAbs().maxCoeff();
  if (resid > tol) {
    throw std::invalid_argument("matrix has imaginary residual " + std::to_string(resid) +
                                " above tolerance; not real-representable");
  }
  return m.real();
}

DoubledMatrix::DoubledMatrix(CMat u, CMat v) : minus(std::move(u)), plus(std::move(v)) {
  if (minus.rows() != plus.rows() || minus.cols() != plus.cols()) {
    throw std::invalid_argument("DoubledMatrix: U and V must have the same shape");
  }
}

CMat DoubledMatrix::expand() const {
  const Index r = minus.rows(), k = minus.cols();
  CMat out(2 * r, 2 * k);
  out.topLeftCorner(r, k) = minus;
  out.topRightCorner(r, k) = plus;
  out.bottomLeftCorner(r, k) = plus.conjugate();
  out.bottomRightCorner(r, k) = minus.conjugate();
  return out;
}

DoubledMatrix DoubledMatrix::Identity(Index n) {
  return {CMat::Identity(n, n), CMat::Zero(n, n)};
}

DoubledMatrix DoubledMatrix::Zero(Index r, Index c) {
  return {CMat::Zero(r, c), CMat::Zero(r, c)};
}

DoubledMatrix DoubledMatrix::FromExpanded(const CMat& x, double tol) {
  if (x.rows() % 2 != 0 || x.cols() % 2 != 0) {
    throw std::invalid_argument("FromExpanded: dimensions must be even");
  }
  const Index r = x.rows() / 2, k = x.cols() / 2;
  CMat u = x.topLeftCorner(r, k);
  CMat v = x.topRightCorner(r, k);
  const double resid =
      std::max((x.bottomLeftCorner(r, k) - v.conjugate()).cwiseAbs().maxCoeff(),
               (x.bottomRightCorner(r, k) - u.conjugate()).cwiseAbs().maxCoeff());
  if (resid > tol) {
    throw std::invalid_argument("FromExpanded: matrix is not doubled-up (residual " +
                                std::to_string(resid) + ")");
  }
  return {std::move(u), std::move(v)};
}

DoubledMatrix delta(const CMat& u, const CMat& v) { return {u, v}; }

DoubledMatrix operator+(const DoubledMatrix& a, const DoubledMatrix& b) {
  return {a.minus + b.minus, a.plus + b.plus};
}

DoubledMatrix operator-(const DoubledMatrix& a, const DoubledMatrix& b) {
  return {a.minus - b.minus, a.plus - b.plus};
}

DoubledMatrix operator-(const DoubledMatrix& a) { return {-a.minus, -a.plus}; }

DoubledMatrix operator*(const DoubledMatrix& a, const DoubledMatrix& b) {
  // [[U1,V1],[V1#,U1#]] [[U2,V2],[V2#,U2#]] = Delta(U1 U2 + V1 V2#, U1 V2 + V1 U2#)
  return {a.minus * b.minus + a.plus * b.plus.conjugate(),
          a.minus * b.plus + a.plus * b.minus.conjugate()};
}

DoubledMatrix operator*(double s, const DoubledMatrix& a) { return {s * a.minus, s * a.plus}; }

CMat flat(const CMat& x) {
  if (x.rows() % 2 != 0 || x.cols() % 2 != 0) {
    throw std::invalid_argument("flat: dimensions must be even");
  }
  const Index n = x.rows() / 2, m = x.cols() / 2;
  return signature_j(m) * x.adjoint() * signature_j(n);
}

DoubledMatrix flat(const DoubledMatrix& x) {
  return {x.minus.adjoint(), -x.plus.transpose()};
}

CMat signature_j(Index n) {
  CMat j = CMat::Identity(2 * n, 2 * n);
  j.bottomRightCorner(n, n) = -CMat::Identity(n, n);
  return j;
}

RMat symplectic_theta(Index n) {
  RMat t = RMat::Zero(2 * n, 2 * n);
  t.topRightCorner(n, n) = RMat::Identity(n, n);
  t.bottomLeftCorner(n, n) = -RMat::Identity(n, n);
  return t;
}

CMat quadrature_lambda(Index n) {
  const double s = 1.0 / std::sqrt(2.0);
  CMat l(2 * n, 2 * n);
  l.topLeftCorner(n, n) = s * CMat::Identity(n, n);
  l.topRightCorner(n, n) = s * CMat::Identity(n, n);
  l.bottomLeftCorner(n, n) = Complex(0, -s) * CMat::Identity(n, n);
  l.bottomRightCorner(n, n) = Complex(0, s) * CMat::Identity(n, n);
  return l;
}

RMat ito_f(Index m) {
  RMat f = RMat::Zero(2 * m, 2 * m);
  f.bottomRightCorner(m, m) = RMat::Identity(m, m);
  return f;
}

DoubledMatrix hstack(const DoubledMatrix& a, const DoubledMatrix& b) {
  if (a.block_rows() != b.block_rows()) {
    throw std::invalid_argument("hstack: row mismatch");
  }
  CMat u(a.block_rows(), a.block_cols() + b.block_cols());
  CMat v = u;
  u << a.minus, b.minus;
  v << a.plus, b.plus;
  return {std::move(u), std::move(v)};
}

DoubledMatrix vstack(const DoubledMatrix& a, const DoubledMatrix& b) {
  if (a.block_cols() != b.block_cols()) {
    throw std::invalid_argument("vstack: column mismatch");
  }
  CMat u(a.block_rows() + b.block_rows(), a.block_cols());
  CMat v = u;
  u << a.minus, b.minus;
  v << a.plus, b.plus;
  return {std::move(u), std::move(v)};
}

DoubledMatrix block_diag(const DoubledMatrix& a, const DoubledMatrix& b) {
  CMat u = CMat::Zero(a.block_rows() + b.block_rows(), a.block_cols() + b.block_cols());
  CMat v = u;
  u.topLeftCorner(a.block_rows(), a.block_cols()) = a.minus;
  u.bottomRightCorner(b.block_rows(), b.block_cols()) = b.minus;
  v.topLeftCorner(a.block_rows(), a.block_cols()) = a.plus;
  v.bottomRightCorner(b.block_rows(), b.block_cols()) = b.plus;
  return {std::move(u), std::move(v)};
}

}  // namespace lqs
