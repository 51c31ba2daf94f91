#include "lqs/lmi.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace lqs {
namespace lmi {

Problem Problem::from_affine(Index p,
                             const std::function<std::vector<RMat>(const RVec&)>& assemble) {
  Problem prob;
  prob.num_vars = p;
  std::vector<RMat> f0 = assemble(RVec::Zero(p));
  prob.constraints.resize(f0.size());
  for (size_t j = 0; j < f0.size(); ++j) {
    prob.constraints[j].f0 = 0.5 * (f0[j] + f0[j].transpose());
    prob.constraints[j].coeffs.resize(p);
  }
  for (Index i = 0; i < p; ++i) {
    RVec e = RVec::Zero(p);
    e(i) = 1.0;
    std::vector<RMat> fi = assemble(e);
    if (fi.size() != f0.size()) throw std::invalid_argument("from_affine: block count varies");
    for (size_t j = 0; j < f0.size(); ++j) {
      RMat d = fi[j] - f0[j];
      prob.constraints[j].coeffs[i] = 0.5 * (d + d.transpose());
    }
  }
  return prob;
}

std::vector<RMat> Problem::eval(const RVec& x) const {
  std::vector<RMat> out;
  out.reserve(constraints.size());
  for (const Constraint& c : constraints) {
    RMat g = c.f0;
    for (Index i = 0; i < num_vars; ++i) {
      if (x(i) != 0.0) g += x(i) * c.coeffs[i];
    }
    out.push_back(std::move(g));
  }
  return out;
}

double Problem::max_eigenvalue(const RVec& x) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const RMat& g : eval(x)) {
    if (g.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<RMat> es(g, Eigen::EigenvaluesOnly);
    worst = std::max(worst, es.eigenvalues().maxCoeff());
  }
  return worst;
}

Problem Problem::substitute(Index idx, double value) const {
  Problem out;
  out.num_vars = num_vars - 1;
  out.constraints.resize(constraints.size());
  for (size_t j = 0; j < constraints.size(); ++j) {
    out.constraints[j].f0 = constraints[j].f0 + value * constraints[j].coeffs[idx];
    for (Index i = 0; i < num_vars; ++i) {
      if (i == idx) continue;
      out.constraints[j].coeffs.push_back(constraints[j].coeffs[i]);
    }
  }
  for (Index i = 0; i < static_cast<Index>(var_names.size()); ++i) {
    if (i != idx) out.var_names.push_back(var_names[i]);
  }
  return out;
}

namespace {

struct Workspace {
  std::vector<RMat> blocks;        // tI - G_j(x), factored state
  std::vector<Eigen::LLT<RMat>> llt;
};

bool refresh(const Problem& prob, const RVec& x, double t, double bound,
             std::vector<RMat>& sinv) {
  sinv.clear();
  for (const Constraint& c : prob.constraints) {
    RMat s = -c.f0;
    for (Index i = 0; i < prob.num_vars; ++i) {
      if (x(i) != 0.0) s -= x(i) * c.coeffs[i];
    }
    s.diagonal().array() += t;
    Eigen::LLT<RMat> llt(s);
    if (llt.info() != Eigen::Success) return false;
    sinv.push_back(llt.solve(RMat::Identity(s.rows(), s.rows())));
  }
  // box: t + bound - x_i > 0 and t + bound + x_i > 0
  for (Index i = 0; i < prob.num_vars; ++i) {
    const double up = t + bound - x(i);
    const double dn = t + bound + x(i);
    if (up <= 0.0 || dn <= 0.0) return false;
    sinv.push_back(RMat::Constant(1, 1, 1.0 / up));
    sinv.push_back(RMat::Constant(1, 1, 1.0 / dn));
  }
  return true;
}

}  // namespace

Solution feasibility(const Problem& prob, const Options& opts, const RVec* warm_start) {
  const Index p = prob.num_vars;
  Solution sol;
  RVec x = warm_start && warm_start->size() == p ? *warm_start : RVec::Zero(p);
  if (p > 0 && x.cwiseAbs().maxCoeff() >= opts.var_bound) x.setZero();
  double t = prob.max_eigenvalue(x);
  if (!std::isfinite(t)) t = 0.0;
  t += 1.0 + 0.1 * std::abs(t);

  double total_dim = 2.0 * static_cast<double>(p);
  for (const Constraint& c : prob.constraints) total_dim += static_cast<double>(c.f0.rows());

  const double target = -opts.margin;
  std::vector<RMat> sinv;
  double mu = opts.mu0;
  while (true) {
    for (int it = 0; it < opts.max_newton; ++it) {
      if (!refresh(prob, x, t, opts.var_bound, sinv)) {
        sol.status = Status::Stalled;
        sol.note = "interior lost during refresh";
        break;
      }
      // gradient and Hessian of mu*t - sum log det S_j
      RVec grad = RVec::Zero(p + 1);
      RMat hess = RMat::Zero(p + 1, p + 1);
      const size_t nb = prob.constraints.size();
      // precompute S^-1 F_i per block
      std::vector<std::vector<RMat>> sf(p);
      for (Index i = 0; i < p; ++i) {
        sf[i].resize(nb);
        for (size_t j = 0; j < nb; ++j) sf[i][j] = sinv[j] * prob.constraints[j].coeffs[i];
      }
      for (Index i = 0; i < p; ++i) {
        double gi = 0.0;
        for (size_t j = 0; j < nb; ++j) gi += sf[i][j].trace();
        // box terms: d(-log(t+R-x_i))/dx_i = +1/(t+R-x_i) ; other sign for the lower side
        const double su = sinv[nb + 2 * i](0, 0), sd = sinv[nb + 2 * i + 1](0, 0);
        gi += su - sd;
        grad(i) = gi;
        for (Index k = i; k < p; ++k) {
          double h = 0.0;
          for (size_t j = 0; j < nb; ++j) h += (sf[i][j] * sf[k][j]).trace();
          if (k == i) h += su * su + sd * sd;
          hess(i, k) = hess(k, i) = h;
        }
        double hit = 0.0;
        for (size_t j = 0; j < nb; ++j) hit -= (sf[i][j] * sinv[j]).trace();
        hit += -su * su + sd * sd;
        hess(i, p) = hess(p, i) = hit;
      }
      double trs = 0.0, trs2 = 0.0;
      for (size_t j = 0; j < nb; ++j) {
        trs += sinv[j].trace();
        trs2 += (sinv[j] * sinv[j]).trace();
      }
      for (Index i = 0; i < p; ++i) {
        const double su = sinv[nb + 2 * i](0, 0), sd = sinv[nb + 2 * i + 1](0, 0);
        trs += su + sd;
        trs2 += su * su + sd * sd;
      }
      grad(p) = mu - trs;
      hess(p, p) = trs2;
      hess.diagonal().array() += 1e-12;

      Eigen::LDLT<RMat> ldlt(hess);
      RVec dz = ldlt.solve(-grad);
      const double decrement = -grad.dot(dz);
      if (!std::isfinite(decrement) || decrement < 1e-13) break;
      double step = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        RVec xn = x + step * dz.head(p);
        const double tn = t + step * dz(p);
        std::vector<RMat> tmp;
        if (refresh(prob, xn, tn, opts.var_bound, tmp)) {
          x = std::move(xn);
          t = tn;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
      if (t < target && mu >= opts.mu0 * opts.mu_factor) break;  // confirmed below target
      if (decrement * step < 1e-15) break;
    }
    if (t < target) break;
    if (total_dim / mu < std::max(opts.infeasible_tol, 1e-12 * std::abs(t))) break;
    mu *= opts.mu_factor;
    if (mu > 1e18) break;
  }

  sol.x = x;
  sol.max_eig = prob.max_eigenvalue(x);
  if (sol.max_eig <= -opts.margin + opts.slack_tol) {
    sol.status = Status::Feasible;
  } else if (t > opts.margin + opts.infeasible_tol) {
    sol.status = Status::Infeasible;
    sol.note = "phase-I optimum stayed above the margin";
  } else {
    sol.status = Status::Stalled;
    sol.note = "could not certify either way at the requested margin";
  }
  return sol;
}

GainResult minimize_gain(const Problem& problem, Index gain_var, double lo, double hi,
                         double tol, const Options& opts) {
  Solution at_hi = feasibility(problem.substitute(gain_var, hi), opts);
  if (at_hi.status != Status::Feasible) {
    throw std::runtime_error("minimize_gain: no feasible gain in the bracket");
  }
  GainResult best{hi, at_hi};
  RVec warm = at_hi.x;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    Solution s = feasibility(problem.substitute(gain_var, mid), opts, &warm);
    if (s.status == Status::Feasible) {
      hi = mid;
      warm = s.x;
      best = {mid, std::move(s)};
    } else {
      lo = mid;
    }
  }
  return best;
}

RMat hermitian_embed(const CMat& h) {
  const Index n = h.rows();
  RMat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.topRightCorner(n, n) = -h.imag();
  out.bottomLeftCorner(n, n) = h.imag();
  out.bottomRightCorner(n, n) = h.real();
  return out;
}

void VarLayout::add(const std::string& name, Index rows, Index cols, bool symmetric) {
  if (symmetric && rows != cols) throw std::invalid_argument("symmetric block must be square");
  VarBlock b{name, rows, cols, symmetric, size};
  size += symmetric ? rows * (rows + 1) / 2 : rows * cols;
  blocks.push_back(std::move(b));
}

RMat VarLayout::unpack(const RVec& x, const std::string& name) const {
  for (const VarBlock& b : blocks) {
    if (b.name != name) continue;
    RMat m(b.rows, b.cols);
    Index k = b.offset;
    if (b.symmetric) {
      for (Index i = 0; i < b.rows; ++i)
        for (Index j = i; j < b.cols; ++j) m(i, j) = m(j, i) = x(k++);
    } else {
      for (Index i = 0; i < b.rows; ++i)
        for (Index j = 0; j < b.cols; ++j) m(i, j) = x(k++);
    }
    return m;
  }
  throw std::invalid_argument("VarLayout: unknown block " + name);
}

void VarLayout::pack(RVec& x, const std::string& name, const RMat& value) const {
  for (const VarBlock& b : blocks) {
    if (b.name != name) continue;
    Index k = b.offset;
    if (b.symmetric) {
      for (Index i = 0; i < b.rows; ++i)
        for (Index j = i; j < b.cols; ++j) x(k++) = value(i, j);
    } else {
      for (Index i = 0; i < b.rows; ++i)
        for (Index j = 0; j < b.cols; ++j) x(k++) = value(i, j);
    }
    return;
  }
  throw std::invalid_argument("VarLayout: unknown block " + name);
}

std::vector<std::string> VarLayout::scalar_names() const {
  std::vector<std::string> names(static_cast<size_t>(size));
  for (const VarBlock& b : blocks) {
    Index k = b.offset;
    if (b.symmetric) {
      for (Index i = 0; i < b.rows; ++i)
        for (Index j = i; j < b.cols; ++j)
          names[k++] = b.name + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
    } else {
      for (Index i = 0; i < b.rows; ++i)
        for (Index j = 0; j < b.cols; ++j)
          names[k++] = b.name + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
  }
  return names;
}

CMat HermitianVar::unpack(const RVec& x, Index offset) const {
  CMat h = CMat::Zero(n, n);
  Index k = offset;
  for (Index i = 0; i < n; ++i) h(i, i) = x(k++);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double re = x(k++);
      const double im = x(k++);
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
    }
  return h;
}

}  // namespace lmi
}  // namespace lqs
