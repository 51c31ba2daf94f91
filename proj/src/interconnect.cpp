#include "lqs/interconnect.hpp"

#include "lqs/quadrature.hpp"

namespace lqs {

namespace {

// A_cl off-diagonal convention: annihilation ties B_21 = -flat(B_12),
// quadrature ties B_21 = Theta B_12^T Theta.
CMat partner_b21(const CMat& b_12, Rep rep) {
  if (rep == Rep::Annihilation) return -flat(b_12);
  const Index n = b_12.rows() / 2, nk = b_12.cols() / 2;
  return symplectic_theta(nk) * real_part_checked(b_12).transpose() * symplectic_theta(n);
}

CMat hcat(std::initializer_list<const CMat*> ms, Index rows) {
  Index cols = 0;
  for (const CMat* m : ms) cols += m->cols();
  CMat out(rows, cols);
  Index at = 0;
  for (const CMat* m : ms) {
    if (m->cols() > 0) out.middleCols(at, m->cols()) = *m;
    at += m->cols();
  }
  return out;
}

}  // namespace

SystemMatrices direct_couple(const SystemMatrices& g1, const SystemMatrices& g2,
                             const CMat& k_minus, const CMat& k_plus) {
  const Index n1 = g1.a.block_rows(), n2 = g2.a.block_rows();
  if (k_minus.rows() != n2 || k_minus.cols() != n1 || k_plus.rows() != n2 ||
      k_plus.cols() != n1) {
    throw std::invalid_argument("direct_couple: K-/K+ must be n2 x n1");
  }
  const DoubledMatrix b21 = delta(k_minus, k_plus);
  const DoubledMatrix b12 = -flat(b21);
  SystemMatrices out;
  CMat au = CMat::Zero(n1 + n2, n1 + n2), av = au;
  au.topLeftCorner(n1, n1) = g1.a.minus;
  au.topRightCorner(n1, n2) = b12.minus;
  au.bottomLeftCorner(n2, n1) = b21.minus;
  au.bottomRightCorner(n2, n2) = g2.a.minus;
  av.topLeftCorner(n1, n1) = g1.a.plus;
  av.topRightCorner(n1, n2) = b12.plus;
  av.bottomLeftCorner(n2, n1) = b21.plus;
  av.bottomRightCorner(n2, n2) = g2.a.plus;
  out.a = delta(au, av);
  out.b_d = block_diag(g1.b_d, g2.b_d);
  out.b_f = block_diag(g1.b_f, g2.b_f);
  out.c_f = block_diag(g1.c_f, g2.c_f);
  return out;
}

SystemMatrices series(const SystemMatrices& g1, const SystemMatrices& g2) {
  if (g1.c_f.block_rows() != g2.c_f.block_rows()) {
    throw std::invalid_argument("series: field channel counts must agree");
  }
  const Index n1 = g1.a.block_rows(), n2 = g2.a.block_rows();
  const DoubledMatrix a21 = g2.b_f * g1.c_f;
  SystemMatrices out;
  CMat au = CMat::Zero(n1 + n2, n1 + n2), av = au;
  au.topLeftCorner(n1, n1) = g1.a.minus;
  au.bottomLeftCorner(n2, n1) = a21.minus;
  au.bottomRightCorner(n2, n2) = g2.a.minus;
  av.topLeftCorner(n1, n1) = g1.a.plus;
  av.bottomLeftCorner(n2, n1) = a21.plus;
  av.bottomRightCorner(n2, n2) = g2.a.plus;
  out.a = delta(au, av);
  out.b_d = block_diag(g1.b_d, g2.b_d);
  out.b_f = vstack(g1.b_f, g2.b_f);
  out.c_f = hstack(g1.c_f, g2.c_f);
  return out;
}

ClosedLoop ClosedLoop::to_rep(Rep target) const {
  if (target == rep) return *this;
  ClosedLoop out = *this;
  out.rep = target;
  for (CMat* m : {&out.a, &out.b_w, &out.g, &out.c_z, &out.d_zw}) {
    if (m->size() == 0) continue;
    *m = target == Rep::Quadrature ? CMat(to_quadrature(*m).cast<Complex>())
                                   : from_quadrature(real_part_checked(*m));
  }
  return out;
}

ClosedLoop close_loop(const PlantModel& plant, const Controller& k_in) {
  plant.validate();
  const Controller k = k_in.rep == plant.rep ? k_in : k_in.to_rep(plant.rep);
  k.validate();
  const Index n = plant.n(), nk = k.n();
  const Index my = plant.c.rows();
  if (k.b_k.cols() != my) {
    throw std::invalid_argument("close_loop: controller B_K width must match plant output");
  }
  if (plant.b_u.cols() != k.c_k.rows()) {
    throw std::invalid_argument("close_loop: plant B_u width must match controller C_K");
  }

  ClosedLoop cl;
  cl.rep = plant.rep;
  cl.a = CMat::Zero(n + nk, n + nk);
  cl.a.topLeftCorner(n, n) = plant.a;
  cl.a.bottomRightCorner(nk, nk) = k.a_k;
  if (k.c_k.size() > 0) cl.a.topRightCorner(n, nk) += plant.b_u * k.c_k;
  if (k.b_k.size() > 0 && plant.c.size() > 0) cl.a.bottomLeftCorner(nk, n) += k.b_k * plant.c;
  if (k.b_12.size() > 0) {
    cl.a.topRightCorner(n, nk) += k.b_12;
    cl.a.bottomLeftCorner(nk, n) +=
        k.b_21.size() > 0 ? k.b_21 : partner_b21(k.b_12, plant.rep);
  }

  // w columns
  cl.b_w = CMat::Zero(n + nk, plant.b_f.cols());
  if (plant.b_f.size() > 0) {
    cl.b_w.topRows(n) = plant.b_f;
    if (k.b_k.size() > 0 && plant.d_f.size() > 0) cl.b_w.bottomRows(nk) = k.b_k * plant.d_f;
  }

  // Noise columns (b_in, b_v, b_vK1, b_vK2).
  CMat g_in = cl.b_w;
  CMat g_v = CMat::Zero(n + nk, plant.b_v.cols());
  if (plant.b_v.size() > 0) {
    g_v.topRows(n) = plant.b_v;
    if (k.b_k.size() > 0 && plant.d_v.size() > 0) g_v.bottomRows(nk) = k.b_k * plant.d_v;
  }
  CMat g_k1 = CMat::Zero(n + nk, k.b_k1.cols());
  if (k.b_k1.size() > 0) {
    if (plant.b_u.size() > 0 && k.b_k0.size() > 0) g_k1.topRows(n) = plant.b_u * k.b_k0;
    g_k1.bottomRows(nk) = k.b_k1;
  }
  CMat g_k2 = CMat::Zero(n + nk, k.b_k2.cols());
  if (k.b_k2.size() > 0) g_k2.bottomRows(nk) = k.b_k2;
  cl.g = hcat({&g_in, &g_v, &g_k1, &g_k2}, n + nk);

  const Index mz = plant.c_p.rows();
  cl.c_z = CMat::Zero(mz, n + nk);
  if (plant.c_p.size() > 0) cl.c_z.leftCols(n) = plant.c_p;
  if (plant.d_u.size() > 0 && k.c_k.size() > 0) cl.c_z.rightCols(nk) = plant.d_u * k.c_k;
  cl.d_zw = plant.d_pf.size() > 0 ? plant.d_pf : CMat::Zero(mz, plant.b_f.cols());
  return cl;
}

}  // namespace lqs
