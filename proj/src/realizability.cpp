#include "lqs/realizability.hpp"

#include <Eigen/Eigenvalues>

namespace lqs {

namespace {

double fro(const CMat& m) { return m.size() == 0 ? 0.0 : m.norm(); }
double fro(const RMat& m) { return m.size() == 0 ? 0.0 : m.norm(); }

// Skew part of A Theta + Theta A^T plus the B Theta B^T port terms.
RMat theta_lyap(const RMat& a_k, std::initializer_list<const RMat*> ports) {
  const Index n = a_k.rows() / 2;
  const RMat th = symplectic_theta(n);
  RMat s = a_k * th + th * a_k.transpose();
  for (const RMat* b : ports) {
    if (b->size() == 0) continue;
    s += (*b) * symplectic_theta(b->cols() / 2) * b->transpose();
  }
  return s;
}

}  // namespace

RealizabilityReport check_annihilation(const CMat& a, const CMat& b_f, const CMat& c_f,
                                       const CMat& b_d, const CMat& k_minus,
                                       const CMat& k_plus, double tol) {
  const Index n = a.rows() / 2;
  const Index m = c_f.rows() / 2;
  RealizabilityReport rep;
  rep.tolerance = tol;
  const CMat jn = signature_j(n);
  rep.ccr_residual = fro(CMat(jn * a + a.adjoint() * jn + c_f.adjoint() * signature_j(m) * c_f));
  rep.bf_residual = fro(CMat(b_f + flat(c_f)));
  if (b_d.size() > 0 || k_minus.size() > 0) {
    rep.bd_residual = fro(CMat(b_d + flat(delta(k_minus, k_plus).expand())));
  }
  rep.verdict = rep.ccr_residual <= tol && rep.bf_residual <= tol && rep.bd_residual <= tol;
  return rep;
}

RealizabilityReport check_annihilation(const SystemMatrices& sys, const CMat& k_minus,
                                       const CMat& k_plus, double tol) {
  return check_annihilation(sys.a.expand(), sys.b_f.expand(), sys.c_f.expand(),
                            sys.b_d.expand(), k_minus, k_plus, tol);
}

RealizabilityReport check_quadrature_controller(const RMat& a_k, const RMat& b_k,
                                                const RMat& b_k1, const RMat& b_k2,
                                                const RMat& c_k, const RMat& b_k0,
                                                const RMat& b_12, const RMat& b_21,
                                                double tol) {
  RealizabilityReport rep;
  rep.tolerance = tol;
  rep.ccr_residual = fro(theta_lyap(a_k, {&b_k, &b_k1, &b_k2}));
  const Index nk = a_k.rows() / 2;
  if (c_k.size() > 0 && b_k1.size() > 0) {
    const RMat th_m = symplectic_theta(c_k.rows() / 2);
    rep.ck_residual = fro(RMat(c_k - th_m * b_k1.transpose() * symplectic_theta(nk)));
  }
  if (b_k0.size() > 0) {
    rep.bk0_residual = fro(RMat(b_k0 - RMat::Identity(b_k0.rows(), b_k0.cols())));
  }
  if (b_12.size() > 0 && b_21.size() > 0) {
    const RMat th_n = symplectic_theta(b_12.rows() / 2);
    rep.b21_residual = fro(RMat(b_21 - symplectic_theta(nk) * b_12.transpose() * th_n));
  }
  rep.verdict = rep.ccr_residual <= tol && rep.ck_residual <= tol && rep.bk0_residual <= tol &&
                rep.b21_residual <= tol;
  return rep;
}

RealizabilityReport check_quadrature_controller(const Controller& k, double tol) {
  if (k.rep != Rep::Quadrature) {
    return check_quadrature_controller(k.to_rep(Rep::Quadrature), tol);
  }
  auto re = [](const CMat& m) { return real_part_checked(m, 1e-9); };
  return check_quadrature_controller(re(k.a_k), re(k.b_k), re(k.b_k1), re(k.b_k2), re(k.c_k),
                                     re(k.b_k0), re(k.b_12), re(k.b_21), tol);
}

RMat skew_factor(const RMat& z, double tol) {
  if (z.rows() != z.cols() || z.rows() % 2 != 0) {
    throw std::invalid_argument("skew_factor: input must be square with even dimension");
  }
  const Index dim = z.rows();
  const double scale = std::max(1.0, fro(z));
  if (fro(RMat(z + z.transpose())) > tol * scale) {
    throw std::invalid_argument("skew_factor: input is not skew-symmetric");
  }
  const Index k = dim / 2;
  // Eigenstructure of the Hermitian iZ: pairs (+s, -s); an eigenvector
  // x + iy of +s spans an invariant plane with Z x = s y, Z y = -s x.
  Eigen::SelfAdjointEigenSolver<CMat> es(Complex(0, 1) * z.cast<Complex>());
  if (es.info() != Eigen::Success) throw std::runtime_error("skew_factor: eigensolver failed");
  RMat b = RMat::Zero(dim, dim);
  Index pair = 0;
  for (Index j = 0; j < dim; ++j) {
    const double s = es.eigenvalues()(j);
    if (s <= tol * scale) continue;
    if (pair >= k) throw std::runtime_error("skew_factor: too many positive eigenvalues");
    const CVec u = es.eigenvectors().col(j);
    const double r = std::sqrt(s);
    b.col(pair) = std::sqrt(2.0) * r * u.imag();      // o2
    b.col(k + pair) = std::sqrt(2.0) * r * u.real();  // o1
    ++pair;
  }
  return b;
}

Completion complete_controller(const RMat& a_k, const RMat& b_k, const RMat& c_k) {
  const Index nk2 = a_k.rows();
  if (nk2 % 2 != 0) throw std::invalid_argument("complete_controller: odd dimension");
  const Index nk = nk2 / 2;
  Completion out;
  if (c_k.size() > 0) {
    out.b_k1 = symplectic_theta(nk) * c_k.transpose() * symplectic_theta(c_k.rows() / 2);
    out.b_k0 = RMat::Identity(c_k.rows(), c_k.rows());
  } else {
    out.b_k1 = RMat::Zero(nk2, 0);
    out.b_k0 = RMat::Zero(0, 0);
  }
  const RMat z = -theta_lyap(a_k, {&out.b_k1, &b_k});
  out.b_k2 = skew_factor(z);
  return out;
}

}  // namespace lqs
