#include "lqs/model.hpp"

#include "lqs/quadrature.hpp"

namespace lqs {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

CMat rep_convert(const CMat& m, Rep from, Rep to) {
  if (from == to) return m;
  if (m.size() == 0) return m;
  if (to == Rep::Quadrature) return to_quadrature(m).cast<Complex>();
  return from_quadrature(real_part_checked(m));
}

}  // namespace

void GeneralModel::validate(double tol) const {
  const Index n = modes;
  require(omega_minus.rows() == n && omega_minus.cols() == n, "omega_minus must be n x n");
  require(omega_plus.rows() == n && omega_plus.cols() == n, "omega_plus must be n x n");
  require(c_minus.cols() == n && c_plus.cols() == n, "c_minus/c_plus must have n columns");
  require(c_minus.rows() == c_plus.rows(), "c_minus/c_plus row mismatch");
  require(k_minus.cols() == n && k_plus.cols() == n, "k_minus/k_plus must have n columns");
  require(k_minus.rows() == k_plus.rows(), "k_minus/k_plus row mismatch");
  const double scale = std::max(1.0, n == 0 ? 0.0 : omega_minus.cwiseAbs().maxCoeff() +
                                                        omega_plus.cwiseAbs().maxCoeff());
  if (n > 0) {
    require((omega_minus - omega_minus.adjoint()).cwiseAbs().maxCoeff() <= tol * scale,
            "omega_minus must be Hermitian");
    require((omega_plus - omega_plus.transpose()).cwiseAbs().maxCoeff() <= tol * scale,
            "omega_plus must be symmetric");
  }
}

std::pair<CMat, CMat> gamma_pair(const CMat& c_minus, const CMat& c_plus) {
  require(c_minus.rows() == c_plus.rows() && c_minus.cols() == c_plus.cols(),
          "gamma_pair: shape mismatch");
  CMat gm = 0.5 * (c_minus.adjoint() * c_minus - c_plus.transpose() * c_plus.conjugate());
  CMat gp = 0.5 * (c_minus.adjoint() * c_plus - c_plus.transpose() * c_minus.conjugate());
  return {std::move(gm), std::move(gp)};
}

SystemMatrices build(const GeneralModel& g) {
  g.validate();
  const Complex i(0, 1);
  auto [gm, gp] = gamma_pair(g.c_minus, g.c_plus);
  SystemMatrices sys;
  sys.a = -delta(i * g.omega_minus, i * g.omega_plus) - delta(gm, gp);
  sys.b_d = -flat(delta(g.k_minus, g.k_plus));
  sys.c_f = delta(g.c_minus, g.c_plus);
  sys.b_f = -flat(sys.c_f);
  return sys;
}

CMat natural_q(const SystemMatrices& sys) {
  CMat a = sys.a.expand();
  return -(a + a.adjoint());
}

DoubledMatrix joint_b(const DoubledMatrix& b_d, const DoubledMatrix& b_f) {
  return hstack(b_d, b_f);
}

void PlantModel::validate() const {
  const Index nn = a.rows();
  require(a.cols() == nn && nn % 2 == 0, "plant A must be square with even dimension");
  for (const CMat* m : {&b_v, &b_f, &b_u}) {
    require(m->size() == 0 || m->rows() == nn, "plant input matrix row mismatch");
    require(m->cols() % 2 == 0, "plant input width must be even");
  }
  require(c.size() == 0 || c.cols() == nn, "plant C column mismatch");
  const Index my = c.rows();
  require(d_v.size() == 0 || (d_v.rows() == my && d_v.cols() == b_v.cols()),
          "plant D_v shape mismatch");
  require(d_f.size() == 0 || (d_f.rows() == my && d_f.cols() == b_f.cols()),
          "plant D_f shape mismatch");
  require(c_p.size() == 0 || c_p.cols() == nn, "plant C_p column mismatch");
  const Index mz = c_p.rows();
  require(d_u.size() == 0 || (d_u.rows() == mz && d_u.cols() == b_u.cols()),
          "plant D_u shape mismatch");
  require(d_pf.size() == 0 || (d_pf.rows() == mz && d_pf.cols() == b_f.cols()),
          "plant D_pf shape mismatch");
}

PlantModel PlantModel::to_rep(Rep target) const {
  if (target == rep) return *this;
  PlantModel out = *this;
  out.rep = target;
  for (CMat* m : {&out.a, &out.b_v, &out.b_f, &out.b_u, &out.c, &out.d_v, &out.d_f, &out.c_p,
                  &out.d_u, &out.d_pf}) {
    *m = rep_convert(*m, rep, target);
  }
  return out;
}

void Controller::validate() const {
  const Index nn = a_k.rows();
  require(a_k.cols() == nn && nn % 2 == 0, "controller A_K must be square with even dimension");
  for (const CMat* m : {&b_k, &b_k1, &b_k2, &b_21}) {
    require(m->size() == 0 || m->rows() == nn, "controller input matrix row mismatch");
  }
  require(c_k.size() == 0 || c_k.cols() == nn, "controller C_K column mismatch");
  require(b_12.size() == 0 || b_12.cols() == nn, "controller B_12 column mismatch");
  if (b_k0.size() > 0) {
    require(b_k0.rows() == b_k0.cols(), "B_K0 must be square");
    require((b_k0 - CMat::Identity(b_k0.rows(), b_k0.cols())).cwiseAbs().maxCoeff() <= 1e-9,
            "B_K0 must be identity");
  }
}

Controller Controller::to_rep(Rep target) const {
  if (target == rep) return *this;
  Controller out = *this;
  out.rep = target;
  for (CMat* m : {&out.a_k, &out.b_k, &out.c_k, &out.b_k1, &out.b_k2, &out.b_k0, &out.b_12,
                  &out.b_21}) {
    *m = rep_convert(*m, rep, target);
  }
  return out;
}

Controller zero_controller(const PlantModel& plant, Index controller_modes) {
  const Index nk = 2 * controller_modes;
  const Index my = plant.c.rows();
  const Index mu = plant.b_u.cols();
  Controller k;
  k.rep = plant.rep;
  k.a_k = CMat::Zero(nk, nk);
  k.b_k = CMat::Zero(nk, my);
  k.c_k = CMat::Zero(mu, nk);
  k.b_k1 = CMat::Zero(nk, mu);
  k.b_k2 = CMat::Zero(nk, 0);
  k.b_k0 = CMat::Identity(mu, mu);
  k.b_12 = CMat::Zero(plant.n(), nk);
  k.b_21 = CMat::Zero(nk, plant.n());
  return k;
}

}  // namespace lqs
