#include "lqs/analysis.hpp"

#include "lqs/lmi.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lqs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mat_scale(const CMat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::ExponentiallyStable: return "exponentially stable";
    case StabilityClass::MarginallyStable: return "marginally stable";
    default: return "unstable";
  }
}

StabilityClass classify_stability(const CMat& a, double tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("classify_stability: square matrix");
  if (a.rows() == 0) return StabilityClass::ExponentiallyStable;
  Eigen::ComplexEigenSolver<CMat> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw std::runtime_error("classify_stability: eigensolver failed");
  const CVec lam = es.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  const double eps = tol * scale;
  if (lam.real().maxCoeff() > eps) return StabilityClass::Unstable;

  // Collect imaginary-axis eigenvalues and test each cluster for
  // semisimplicity via the rank of A - lambda I.
  std::vector<Complex> axis;
  for (Index i = 0; i < lam.size(); ++i) {
    if (std::abs(lam(i).real()) <= eps) axis.push_back(lam(i));
  }
  if (axis.empty()) return StabilityClass::ExponentiallyStable;

  std::sort(axis.begin(), axis.end(),
            [](Complex x, Complex y) { return x.imag() < y.imag(); });
  size_t i = 0;
  while (i < axis.size()) {
    size_t j = i + 1;
    while (j < axis.size() && std::abs(axis[j].imag() - axis[j - 1].imag()) <= 10 * eps) ++j;
    const Index algebraic = static_cast<Index>(j - i);
    if (algebraic > 1 || true) {
      Complex center(0.0, 0.0);
      for (size_t k = i; k < j; ++k) center += axis[k];
      center /= static_cast<double>(algebraic);
      center = Complex(0.0, center.imag());
      Eigen::JacobiSVD<CMat> svd(a - center * CMat::Identity(a.rows(), a.cols()));
      const Index geometric =
          a.rows() - (svd.singularValues().array() > 10 * eps).count();
      if (geometric < algebraic) return StabilityClass::Unstable;  // defective mode
    }
    i = j;
  }
  return StabilityClass::MarginallyStable;
}

CMat lyapunov_solve(const CMat& a, const CMat& w) {
  const Index n = a.rows();
  if (a.cols() != n || w.rows() != n || w.cols() != n) {
    throw std::invalid_argument("lyapunov_solve: shape mismatch");
  }
  if (spectral_abscissa(a) >= 0.0) {
    throw std::domain_error("lyapunov_solve: A is not Hurwitz, no solution");
  }
  // (I (x) A + conj(A) (x) I) vec(P) = -vec(W)
  CMat k = CMat::Zero(n * n, n * n);
  for (Index j = 0; j < n; ++j) k.block(j * n, j * n, n, n) = a;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Complex c = std::conj(a(j, i));
      if (c != Complex(0, 0))
        for (Index r = 0; r < n; ++r) k(i * n + r, j * n + r) += c;
    }
  CVec rhs(n * n);
  for (Index j = 0; j < n; ++j) rhs.segment(j * n, n) = -w.col(j);
  const CVec sol = k.partialPivLu().solve(rhs);
  CMat p(n, n);
  for (Index j = 0; j < n; ++j) p.col(j) = sol.segment(j * n, n);
  p = 0.5 * (p + p.adjoint()).eval();
  const double resid = (a * p + p * a.adjoint() + w).norm();
  const double bound = 1e-9 * (a.norm() * p.norm() + w.norm()) + 1e-12;
  if (resid > bound) {
    throw std::runtime_error("lyapunov_solve: residual " + std::to_string(resid) +
                             " exceeds tolerance");
  }
  return p;
}

DecayBound decay_bound(const CMat& a, const CMat& b_f, const CMat& p, const CMat& q, double c,
                       double tol) {
  DecayBound out;
  Eigen::SelfAdjointEigenSolver<CMat> ep(p, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<CMat> eq(CMat(q - c * p), Eigen::EigenvaluesOnly);
  if (c <= 0.0) out.note = "c must be positive";
  else if (ep.eigenvalues().minCoeff() < -tol) out.note = "P is not nonnegative";
  else if (eq.eigenvalues().minCoeff() < -tol) out.note = "Q >= cP fails";
  const CMat lhs = a.adjoint() * p + p * a + q;
  Eigen::SelfAdjointEigenSolver<CMat> el(CMat(0.5 * (lhs + lhs.adjoint())),
                                         Eigen::EigenvaluesOnly);
  const bool lyap_ok = el.eigenvalues().maxCoeff() <= tol * std::max(1.0, mat_scale(lhs));
  out.holds = out.note.empty() && lyap_ok;
  if (!lyap_ok && out.note.empty()) out.note = "A^dag P + P A + Q has a positive eigenvalue";
  if (b_f.size() > 0) {
    const Index m = b_f.cols() / 2;
    out.lambda = (b_f.adjoint() * p * b_f * ito_f(m).cast<Complex>()).trace().real();
  }
  return out;
}

CMat SupplyRate::assemble() const {
  const Index n = r11.rows(), m = r22.rows();
  CMat r(n + m, n + m);
  r.topLeftCorner(n, n) = r11;
  r.topRightCorner(n, m) = r12;
  r.bottomLeftCorner(m, n) = r12.adjoint();
  r.bottomRightCorner(m, m) = r22;
  return r;
}

SupplyRate passivity_supply(const CMat& q, const CMat& c_p) {
  return {-q, c_p.adjoint(), CMat::Zero(c_p.rows(), c_p.rows())};
}

SupplyRate gain_supply(const CMat& c_p, const CMat& d_p, double g) {
  return {-c_p.adjoint() * c_p, -c_p.adjoint() * d_p,
          g * g * CMat::Identity(d_p.cols(), d_p.cols()) - d_p.adjoint() * d_p};
}

DissipationResult dissipation_feasible(const CMat& a, const CMat& b, const CMat& b_f,
                                       const SupplyRate& r) {
  const Index n = a.rows();
  const Index m = b.cols();
  if (r.r11.rows() != n || r.r12.rows() != n || r.r12.cols() != m || r.r22.rows() != m) {
    throw std::invalid_argument("dissipation_feasible: supply rate shape mismatch");
  }
  lmi::HermitianVar pv{n};
  auto assemble = [&](const RVec& x) {
    const CMat p = pv.unpack(x);
    CMat big(n + m, n + m);
    big.topLeftCorner(n, n) = p * a + a.adjoint() * p - r.r11;
    big.topRightCorner(n, m) = p * b - r.r12;
    big.bottomLeftCorner(m, n) = big.topRightCorner(n, m).adjoint();
    big.bottomRightCorner(m, m) = -r.r22;
    return std::vector<RMat>{lmi::hermitian_embed(-p), lmi::hermitian_embed(big)};
  };
  lmi::Problem prob = lmi::Problem::from_affine(pv.size(), assemble);
  lmi::Options opts;
  opts.margin = 0.0;
  opts.var_bound = 1e6;
  lmi::Solution sol = lmi::feasibility(prob, opts);
  DissipationResult out;
  out.status = sol.status == lmi::Status::Feasible    ? LMIVerdict::Feasible
               : sol.status == lmi::Status::Infeasible ? LMIVerdict::Infeasible
                                                        : LMIVerdict::SolverFailure;
  out.note = sol.note;
  if (out.status == LMIVerdict::Feasible) {
    out.p = pv.unpack(sol.x);
    if (b_f.size() > 0) {
      out.lambda =
          (b_f.adjoint() * out.p * b_f * ito_f(b_f.cols() / 2).cast<Complex>()).trace().real();
    }
  }
  return out;
}

namespace {

// Hermitian-basis matrix of the linear map P -> P B, stacked re/im.
struct HermitianMap {
  Index n = 0;
  lmi::HermitianVar var;
  RMat map;  // (2 n m) x n^2

  HermitianMap(const CMat& b) : n(b.rows()), var{b.rows()} {
    const Index m = b.cols();
    map.resize(2 * n * m, var.size());
    RVec e = RVec::Zero(var.size());
    for (Index k = 0; k < var.size(); ++k) {
      e.setZero();
      e(k) = 1.0;
      const CMat pb = var.unpack(e) * b;
      for (Index j = 0; j < m; ++j) {
        map.block(2 * n * j, k, n, 1) = pb.col(j).real();
        map.block(2 * n * j + n, k, n, 1) = pb.col(j).imag();
      }
    }
  }

  RVec stack(const CMat& rhs) const {
    const Index m = rhs.cols();
    RVec v(2 * n * m);
    for (Index j = 0; j < m; ++j) {
      v.segment(2 * n * j, n) = rhs.col(j).real();
      v.segment(2 * n * j + n, n) = rhs.col(j).imag();
    }
    return v;
  }
};

}  // namespace

PassivityResult passivity_check(const CMat& a, const CMat& b, const CMat& c_p) {
  const Index n = a.rows();
  if (c_p.cols() != n || b.rows() != n || c_p.rows() != b.cols()) {
    throw std::invalid_argument("passivity_check: shape mismatch");
  }
  PassivityResult out;
  out.natural_certificate =
      (c_p - b.adjoint()).norm() <= 1e-9 * (1.0 + b.norm());

  // The zero block in the PRL forces P B = C_p^dagger exactly; reduce to
  // that affine slice and test P >= 0, P A + A^dag P <= 0 on it.
  HermitianMap hm(b);
  const RVec rhs = hm.stack(c_p.adjoint());
  Eigen::JacobiSVD<RMat> svd(hm.map, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  const double rank_tol = std::max(1e-12, 1e-10 * smax);
  const RVec x0 = svd.solve(rhs);
  if ((hm.map * x0 - rhs).norm() > 1e-8 * (1.0 + rhs.norm())) {
    out.note = "no Hermitian P satisfies P B = C_p^dagger";
    return out;
  }
  std::vector<RVec> kernel;
  for (Index k = 0; k < svd.matrixV().cols(); ++k) {
    if (k >= svd.singularValues().size() || svd.singularValues()(k) <= rank_tol) {
      kernel.push_back(svd.matrixV().col(k));
    }
  }

  const double tol = 1e-8;
  auto accept = [&](const CMat& p) {
    Eigen::SelfAdjointEigenSolver<CMat> ep(p, Eigen::EigenvaluesOnly);
    const CMat lyap = p * a + a.adjoint() * p;
    Eigen::SelfAdjointEigenSolver<CMat> el(lyap, Eigen::EigenvaluesOnly);
    const double s = std::max(1.0, mat_scale(p) + mat_scale(lyap));
    return ep.eigenvalues().minCoeff() >= -tol * s &&
           el.eigenvalues().maxCoeff() <= tol * s;
  };

  CMat p = hm.var.unpack(x0);
  p = 0.5 * (p + p.adjoint()).eval();
  if (kernel.empty()) {
    out.passive = accept(p);
    if (!out.passive) out.note = "P is pinned by P B = C_p^dagger and fails the sign conditions";
  } else {
    auto assemble = [&](const RVec& t) {
      RVec x = x0;
      for (size_t k = 0; k < kernel.size(); ++k) x += t(static_cast<Index>(k)) * kernel[k];
      const CMat pt = hm.var.unpack(x);
      return std::vector<RMat>{lmi::hermitian_embed(-pt),
                               lmi::hermitian_embed(pt * a + a.adjoint() * pt)};
    };
    lmi::Problem prob = lmi::Problem::from_affine(static_cast<Index>(kernel.size()), assemble);
    lmi::Options opts;
    opts.margin = 0.0;
    opts.var_bound = 1e6;
    lmi::Solution sol = lmi::feasibility(prob, opts);
    out.passive = sol.status == lmi::Status::Feasible;
    if (out.passive) {
      RVec x = x0;
      for (size_t k = 0; k < kernel.size(); ++k) x += sol.x(static_cast<Index>(k)) * kernel[k];
      p = hm.var.unpack(x);
    } else {
      out.note = "PRL LMI infeasible on the P B = C_p^dagger slice";
    }
  }
  if (out.passive) {
    out.p = p;
    out.q = -(p * a + a.adjoint() * p);
  }
  return out;
}

PassivityResult passivity_check(const SystemMatrices& sys, const CMat& c_p) {
  const CMat b = joint_b(sys.b_d, sys.b_f).expand();
  return passivity_check(sys.a.expand(), b, c_p);
}

namespace {

// Hamiltonian matrix of the g-level singular value test / BRL Riccati.
CMat brl_hamiltonian(const CMat& a, const CMat& b, const CMat& c, const CMat& d, double g) {
  const Index n = a.rows(), m = b.cols(), q = c.rows();
  const CMat r = g * g * CMat::Identity(m, m) - d.adjoint() * d;
  const CMat rinv = r.inverse();
  const CMat ahat = a + b * rinv * d.adjoint() * c;
  const CMat s = b * rinv * b.adjoint();
  const CMat qhat = c.adjoint() * (CMat::Identity(q, q) + d * rinv * d.adjoint()) * c;
  CMat h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = ahat;
  h.topRightCorner(n, n) = s;
  h.bottomLeftCorner(n, n) = -qhat;
  h.bottomRightCorner(n, n) = -ahat.adjoint();
  return h;
}

bool has_imaginary_axis_eigen(const CMat& h) {
  Eigen::ComplexEigenSolver<CMat> es(h, false);
  const CVec lam = es.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  return (lam.real().cwiseAbs().array() < 1e-8 * scale).any();
}

}  // namespace

double hinf_norm(const CMat& a, const CMat& b, const CMat& c, const CMat& d, double rtol) {
  const Index n = a.rows();
  if (b.rows() != n || c.cols() != n || d.rows() != c.rows() || d.cols() != b.cols()) {
    throw std::invalid_argument("hinf_norm: shape mismatch");
  }
  if (b.cols() == 0 || c.rows() == 0) return max_sigma(d);
  if (n == 0) return max_sigma(d);
  if (!a.allFinite() || !b.allFinite() || !c.allFinite() || !d.allFinite()) return kInf;
  if (spectral_abscissa(a) >= 0.0) return kInf;

  Eigen::ComplexEigenSolver<CMat> es(a, false);
  const CVec lam = es.eigenvalues();

  auto sigma_at = [&](double w) {
    const CMat m =
        c * (Complex(0, w) * CMat::Identity(n, n) - a).partialPivLu().solve(b) + d;
    return max_sigma(m);
  };

  // Lower bound from a frequency scan biased toward the system's own
  // scales (resonances sit near the eigenvalue imaginary parts).
  double lo = max_sigma(d);
  lo = std::max(lo, sigma_at(0.0));
  for (Index i = 0; i < lam.size(); ++i) {
    lo = std::max(lo, sigma_at(lam(i).imag()));
  }
  const double wmax = 10.0 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  const double wmin = 1e-3 * std::max(1e-6, lam.cwiseAbs().minCoeff());
  for (int k = 0; k < 60; ++k) {
    const double w = wmin * std::pow(wmax / wmin, k / 59.0);
    lo = std::max(lo, std::max(sigma_at(w), sigma_at(-w)));
  }
  if (lo == 0.0) return 0.0;

  double hi = 2.0 * lo;
  int guard = 0;
  while (has_imaginary_axis_eigen(brl_hamiltonian(a, b, c, d, hi))) {
    hi *= 2.0;
    if (++guard > 60) return kInf;
  }
  while (hi - lo > rtol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= max_sigma(d)) {
      lo = mid;
      continue;
    }
    if (has_imaginary_axis_eigen(brl_hamiltonian(a, b, c, d, mid))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double hinf_norm(const ClosedLoop& cl, double rtol) {
  return hinf_norm(cl.a, cl.b_w, cl.c_z, cl.d_zw, rtol);
}

std::optional<CMat> care_solve(const CMat& a, const CMat& s, const CMat& q,
                               bool antistabilizing) {
  const Index n = a.rows();
  CMat h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = a;
  h.topRightCorner(n, n) = s;
  h.bottomLeftCorner(n, n) = -q;
  h.bottomRightCorner(n, n) = -a.adjoint();
  Eigen::ComplexEigenSolver<CMat> es(h);
  if (es.info() != Eigen::Success) return std::nullopt;
  const CVec lam = es.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  CMat basis(2 * n, n);
  Index got = 0;
  for (Index i = 0; i < 2 * n; ++i) {
    const double re = lam(i).real();
    if (std::abs(re) <= 1e-10 * scale) return std::nullopt;  // axis eigenvalue: no solution
    if ((re < 0.0) != antistabilizing) {
      if (got == n) return std::nullopt;
      basis.col(got++) = es.eigenvectors().col(i);
    }
  }
  if (got != n) return std::nullopt;
  const CMat x = basis.topRows(n);
  const CMat y = basis.bottomRows(n);
  Eigen::JacobiSVD<CMat> svd(x);
  const double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
  if (!std::isfinite(cond) || cond > 1e12) {
    throw std::runtime_error("care_solve: invariant-subspace basis is ill-conditioned");
  }
  CMat p = y * x.partialPivLu().inverse();
  p = 0.5 * (p + p.adjoint()).eval();
  const double resid = (a.adjoint() * p + p * a + p * s * p + q).norm();
  const double bound = 1e-6 * (1.0 + p.norm()) * (1.0 + a.norm() + s.norm() + q.norm());
  if (resid > bound) return std::nullopt;
  return p;
}

StrictBrlResult strict_brl(const CMat& a, const CMat& b, const CMat& c_p, const CMat& d_p,
                           double g) {
  StrictBrlResult out;
  const Index n = a.rows(), m = b.cols();
  const CMat r = g * g * CMat::Identity(m, m) - d_p.adjoint() * d_p;
  Eigen::SelfAdjointEigenSolver<CMat> er(r, Eigen::EigenvaluesOnly);
  if (er.eigenvalues().minCoeff() <= 0.0) {
    out.note = "g^2 I - D^dag D is not positive definite";
    return out;
  }

  // (ii) direct norm test
  const double nrm = hinf_norm(a, b, c_p, d_p);
  out.norm_ok = std::isfinite(nrm) && nrm < g;

  // (iii) LMI with P1 > 0
  lmi::HermitianVar pv{n};
  auto assemble = [&](const RVec& x) {
    const CMat p = pv.unpack(x);
    CMat big(n + m, n + m);
    big.topLeftCorner(n, n) = a.adjoint() * p + p * a + c_p.adjoint() * c_p;
    big.topRightCorner(n, m) = p * b + c_p.adjoint() * d_p;
    big.bottomLeftCorner(m, n) = big.topRightCorner(n, m).adjoint();
    big.bottomRightCorner(m, m) = d_p.adjoint() * d_p - g * g * CMat::Identity(m, m);
    return std::vector<RMat>{lmi::hermitian_embed(-p), lmi::hermitian_embed(big)};
  };
  lmi::Problem prob = lmi::Problem::from_affine(pv.size(), assemble);
  lmi::Options opts;
  opts.margin = 1e-9;
  opts.var_bound = 1e6;
  lmi::Solution sol = lmi::feasibility(prob, opts);
  out.lmi_feasible = sol.status == lmi::Status::Feasible;
  if (out.lmi_feasible) out.p1 = pv.unpack(sol.x);

  // (iv) Riccati with the stabilizing side condition. The equality form
  // carries the C_p^dag C_p term of the Schur complement of (iii).
  const CMat rinv = r.inverse();
  const CMat ahat = a + b * rinv * d_p.adjoint() * c_p;
  const CMat s = b * rinv * b.adjoint();
  const CMat qhat =
      c_p.adjoint() * (CMat::Identity(c_p.rows(), c_p.rows()) + d_p * rinv * d_p.adjoint()) *
      c_p;
  std::optional<CMat> p2;
  try {
    p2 = care_solve(ahat, s, qhat);
  } catch (const std::exception& e) {
    out.note = e.what();
  }
  if (p2) {
    Eigen::SelfAdjointEigenSolver<CMat> ep(*p2, Eigen::EigenvaluesOnly);
    const bool closed_ok = spectral_abscissa(ahat + s * *p2) < 0.0;
    out.riccati_ok = ep.eigenvalues().minCoeff() > -1e-10 && closed_ok;
    out.p2 = *p2;
  }

  // Strict LMI solutions sit strictly between the extremal Riccati
  // solutions; report that ordering when everything is available.
  if (out.lmi_feasible && p2) {
    bool above_min = (Eigen::SelfAdjointEigenSolver<CMat>(CMat(out.p1 - *p2),
                                                          Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .minCoeff() > 0.0);
    bool below_max = true;
    try {
      if (auto pmax = care_solve(ahat, s, qhat, /*antistabilizing=*/true)) {
        below_max = (Eigen::SelfAdjointEigenSolver<CMat>(CMat(*pmax - out.p1),
                                                         Eigen::EigenvaluesOnly)
                         .eigenvalues()
                         .minCoeff() > 0.0);
      }
    } catch (const std::exception&) {
    }
    out.ordering_ok = above_min && below_max;
  }

  out.holds = out.norm_ok && out.lmi_feasible && out.riccati_ok;
  return out;
}

double lqg_cost(const CMat& a, const CMat& g, const CMat& c, Rep rep) {
  if (!a.allFinite()) return kInf;
  if (spectral_abscissa(a) >= 0.0) return kInf;
  const double intensity = rep == Rep::Annihilation ? 0.5 : 1.0;
  const CMat w = intensity * g * g.adjoint();
  const CMat p = lyapunov_solve(a, w);
  return (c * p * c.adjoint()).trace().real();
}

double lqg_cost(const ClosedLoop& cl) { return lqg_cost(cl.a, cl.g, cl.c_z, cl.rep); }

}  // namespace lqs
