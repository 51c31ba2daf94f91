#include "lqs/synthesis.hpp"

#include "lqs/quadrature.hpp"
#include "lqs/realizability.hpp"
#include "lqs/optimize.hpp"

#include <Eigen/LU>

namespace lqs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Real quadrature-form plant pieces used by the synthesis LMIs.
struct QuadPlant {
  RMat a, bf, bu, c, df, cp, du, dpf;
  Index n() const { return a.rows(); }
};

QuadPlant quad_plant(const PlantModel& plant_in) {
  const PlantModel plant = plant_in.to_rep(Rep::Quadrature);
  auto re = [](const CMat& m) { return real_part_checked(m, 1e-9); };
  QuadPlant q{re(plant.a), re(plant.b_f), re(plant.b_u), re(plant.c),
              re(plant.d_f), re(plant.c_p), re(plant.d_u), re(plant.d_pf)};
  if (q.dpf.size() == 0) q.dpf = RMat::Zero(q.cp.rows(), q.bf.cols());
  return q;
}

RMat theta_partner(const RMat& b12) {
  const Index n = b12.rows() / 2, nk = b12.cols() / 2;
  return symplectic_theta(nk) * b12.transpose() * symplectic_theta(n);
}

// The (LMIs2) block and the big change-of-variables block, in that order.
std::vector<RMat> hinf_lmi_blocks(const QuadPlant& pl, double g, const RMat& b12,
                                  const RMat& m, const RMat& n_mat, const RMat& x,
                                  const RMat& y, const RMat& a_hat, const RMat& b_hat,
                                  const RMat& c_hat) {
  const Index n = pl.n();
  const Index mw = pl.bf.cols();
  const Index mz = pl.cp.rows();
  const RMat b21 = theta_partner(b12);

  RMat lmis2 = RMat::Zero(2 * n, 2 * n);
  lmis2.topLeftCorner(n, n) = -x;
  lmis2.topRightCorner(n, n) = -RMat::Identity(n, n);
  lmis2.bottomLeftCorner(n, n) = -RMat::Identity(n, n);
  lmis2.bottomRightCorner(n, n) = -y;

  RMat big = RMat::Zero(2 * n + mw + mz, 2 * n + mw + mz);
  const RMat buc = pl.bu * c_hat;
  const RMat bhc = b_hat * pl.c;
  big.block(0, 0, n, n) = pl.a * x + x * pl.a.transpose() + buc + buc.transpose() +
                          b12 * m.transpose() + m * b12.transpose();
  RMat blk21 = a_hat + pl.a.transpose() + n_mat * b21 * x + y * b12 * m.transpose();
  big.block(n, 0, n, n) = blk21;
  big.block(0, n, n, n) = blk21.transpose();
  big.block(n, n, n, n) = pl.a.transpose() * y + y * pl.a + bhc + bhc.transpose() +
                          n_mat * b21 + b21.transpose() * n_mat.transpose();
  big.block(2 * n, 0, mw, n) = pl.bf.transpose();
  big.block(0, 2 * n, n, mw) = pl.bf;
  RMat blk32 = (y * pl.bf + b_hat * pl.df).transpose();
  big.block(2 * n, n, mw, n) = blk32;
  big.block(n, 2 * n, n, mw) = blk32.transpose();
  big.block(2 * n, 2 * n, mw, mw) = -g * RMat::Identity(mw, mw);
  RMat blk41 = pl.cp * x + pl.du * c_hat;
  big.block(2 * n + mw, 0, mz, n) = blk41;
  big.block(0, 2 * n + mw, n, mz) = blk41.transpose();
  big.block(2 * n + mw, n, mz, n) = pl.cp;
  big.block(n, 2 * n + mw, n, mz) = pl.cp.transpose();
  big.block(2 * n + mw, 2 * n, mz, mw) = pl.dpf;
  big.block(2 * n, 2 * n + mw, mw, mz) = pl.dpf.transpose();
  big.block(2 * n + mw, 2 * n + mw, mz, mz) = -g * RMat::Identity(mz, mz);

  return {lmis2, big};
}

struct StepProblem {
  lmi::Problem problem;
  lmi::VarLayout layout;
  Index gain_var = -1;
};

// LMI over (X, Y, A^, B^, C^, g) with the coupling contribution frozen.
StepProblem controller_step_problem(const QuadPlant& pl, const RMat& b12, const RMat& m,
                                    const RMat& n_mat) {
  const Index n = pl.n();
  StepProblem sp;
  sp.layout.add("X", n, n, /*symmetric=*/true);
  sp.layout.add("Y", n, n, /*symmetric=*/true);
  sp.layout.add("Ah", n, n);
  sp.layout.add("Bh", n, pl.c.rows());
  sp.layout.add("Ch", pl.bu.cols(), n);
  sp.layout.add("g", 1, 1);
  sp.gain_var = sp.layout.size - 1;
  auto assemble = [&pl, b12, m, n_mat, layout = sp.layout](const RVec& v) {
    return hinf_lmi_blocks(pl, layout.unpack(v, "g")(0, 0), b12, m, n_mat,
                           layout.unpack(v, "X"), layout.unpack(v, "Y"),
                           layout.unpack(v, "Ah"), layout.unpack(v, "Bh"),
                           layout.unpack(v, "Ch"));
  };
  sp.problem = lmi::Problem::from_affine(sp.layout.size, assemble);
  sp.problem.var_names = sp.layout.scalar_names();
  return sp;
}

// LMI over (B12, g) with the controller variables frozen.
StepProblem coupling_step_problem(const QuadPlant& pl, const RMat& m, const RMat& n_mat,
                                  const RMat& x, const RMat& y, const RMat& a_hat,
                                  const RMat& b_hat, const RMat& c_hat) {
  const Index n = pl.n();
  StepProblem sp;
  sp.layout.add("B12", n, n);
  sp.layout.add("g", 1, 1);
  sp.gain_var = sp.layout.size - 1;
  auto assemble = [&pl, m, n_mat, x, y, a_hat, b_hat, c_hat,
                   layout = sp.layout](const RVec& v) {
    return hinf_lmi_blocks(pl, layout.unpack(v, "g")(0, 0), layout.unpack(v, "B12"), m,
                           n_mat, x, y, a_hat, b_hat, c_hat);
  };
  sp.problem = lmi::Problem::from_affine(sp.layout.size, assemble);
  sp.problem.var_names = sp.layout.scalar_names();
  return sp;
}

Controller make_controller(const QuadPlant& pl, const RecoveredController& rc,
                           const RMat& b12) {
  Controller k;
  k.rep = Rep::Quadrature;
  k.a_k = rc.a_k.cast<Complex>();
  k.b_k = rc.b_k.cast<Complex>();
  k.c_k = rc.c_k.cast<Complex>();
  k.b_k1 = CMat::Zero(rc.a_k.rows(), 0);
  k.b_k2 = CMat::Zero(rc.a_k.rows(), 0);
  k.b_k0 = CMat::Identity(pl.bu.cols(), pl.bu.cols());
  k.b_12 = b12.cast<Complex>();
  k.b_21 = theta_partner(b12).cast<Complex>();
  return k;
}

double verify_norm(const PlantModel& plant, const Controller& k) {
  try {
    return hinf_norm(close_loop(plant.to_rep(Rep::Quadrature), k));
  } catch (const std::exception&) {
    return kInf;
  }
}

double controller_magnitude(const RecoveredController& rc) {
  auto mx = [](const RMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); };
  return std::max({mx(rc.a_k), mx(rc.b_k), mx(rc.c_k)});
}

lmi::Options solver_options(const HinfOptions& opts) {
  lmi::Options o;
  o.margin = opts.margin;
  o.var_bound = opts.var_bound;
  return o;
}

// Feasible upper bracket for the gain bisection: start from hint (or 1)
// and double until feasible.
std::optional<lmi::GainResult> bracket_and_minimize(const StepProblem& sp, double hint,
                                                    const HinfOptions& opts) {
  const lmi::Options lopts = solver_options(opts);
  double hi = std::max(hint, 1e-3);
  for (int k = 0; k < 40; ++k) {
    lmi::Solution s = lmi::feasibility(sp.problem.substitute(sp.gain_var, hi), lopts);
    if (s.status == lmi::Status::Feasible) {
      lmi::GainResult gr = lmi::minimize_gain(sp.problem, sp.gain_var, 0.0, hi, opts.g_tol,
                                              lopts);
      return gr;
    }
    hi *= 2.0;
    if (hi > opts.var_bound) break;
  }
  return std::nullopt;
}

}  // namespace

RecoveredController recover_controller(const RMat& x, const RMat& y, const RMat& a_hat,
                                       const RMat& b_hat, const RMat& c_hat, const RMat& m,
                                       const RMat& n, const PlantModel& plant) {
  const QuadPlant pl = quad_plant(plant);
  Eigen::PartialPivLU<RMat> lu_n(n);
  Eigen::PartialPivLU<RMat> lu_m(m);
  const double det_n = std::abs(lu_n.determinant());
  const double det_m = std::abs(lu_m.determinant());
  if (det_n < 1e-300 || det_m < 1e-300) {
    throw std::runtime_error("recover_controller: singular M or N");
  }
  RecoveredController rc;
  rc.b_k = lu_n.solve(b_hat);
  // Right-multiplications by (M^T)^-1 via Z (M^T)^-1 = (M^-1 Z^T)^T.
  rc.c_k = lu_m.solve(c_hat.transpose()).transpose();
  const RMat inner =
      a_hat - n * rc.b_k * pl.c * x - y * (pl.bu * rc.c_k * m.transpose() + pl.a * x);
  rc.a_k = lu_m.solve(lu_n.solve(inner).transpose()).transpose();
  return rc;
}

RMat recover_coupling(const RMat& omega, const RMat& pi1, const RMat& p) {
  const RMat pi1_inv = pi1.partialPivLu().inverse();
  return p.partialPivLu().solve(pi1_inv.transpose() * omega * pi1_inv);
}

SynthesisState hinf_step1(const PlantModel& plant, const HinfOptions& opts) {
  const QuadPlant pl = quad_plant(plant);
  const Index n = pl.n();
  const RMat zero12 = RMat::Zero(n, n);
  const RMat eye = RMat::Identity(n, n);
  StepProblem sp = controller_step_problem(pl, zero12, eye, eye);

  SynthesisState st;
  st.step = 1;
  st.b12 = zero12;
  st.b21 = zero12;

  RVec assignment;
  if (opts.target_g) {
    lmi::Solution s = lmi::feasibility(sp.problem.substitute(sp.gain_var, *opts.target_g),
                                       solver_options(opts));
    if (s.status != lmi::Status::Feasible) {
      throw std::runtime_error("hinf_step1: LMIs infeasible at the requested attenuation");
    }
    st.certified_g = *opts.target_g;
    assignment = s.x;
  } else {
    const double open_norm = hinf_norm(pl.a.cast<Complex>(), pl.bf.cast<Complex>(),
                                       pl.cp.cast<Complex>(), pl.dpf.cast<Complex>());
    auto gr = bracket_and_minimize(sp, std::isfinite(open_norm) ? 2.0 * open_norm : 1.0, opts);
    if (!gr) throw std::runtime_error("hinf_step1: no feasible attenuation found");
    st.certified_g = gr->g;
    assignment = gr->solution.x;
  }
  RVec full(sp.layout.size);
  full.head(sp.gain_var) = assignment;
  full(sp.gain_var) = st.certified_g;
  st.x = sp.layout.unpack(full, "X");
  st.y = sp.layout.unpack(full, "Y");
  st.a_hat = sp.layout.unpack(full, "Ah");
  st.b_hat = sp.layout.unpack(full, "Bh");
  st.c_hat = sp.layout.unpack(full, "Ch");
  st.m = RMat::Identity(n, n) - st.x * st.y;  // M N^-1 = I - XY with N = I
  st.n = RMat::Identity(n, n);

  const RecoveredController rc =
      recover_controller(st.x, st.y, st.a_hat, st.b_hat, st.c_hat, st.m, st.n, plant);
  if (controller_magnitude(rc) > opts.ill_conditioned_norm) {
    st.note = "step-1 recovery is ill-conditioned";
  }
  st.controller = make_controller(pl, rc, st.b12);
  st.verified_norm = verify_norm(plant, st.controller);
  return st;
}

SynthesisState hinf_step2(const PlantModel& plant, const SynthesisState& state,
                          const HinfOptions& opts) {
  const QuadPlant pl = quad_plant(plant);
  if (state.controller.n() == 0) {
    throw std::invalid_argument("hinf_step2: run step 1 first");
  }
  StepProblem sp = coupling_step_problem(pl, state.m, state.n, state.x, state.y, state.a_hat,
                                         state.b_hat, state.c_hat);
  SynthesisState st = state;
  st.step = 2;
  auto gr = bracket_and_minimize(sp, state.certified_g, opts);
  if (!gr) {
    st.note = "step-2 LMI infeasible; keeping previous coupling";
    return st;
  }
  RVec full(sp.layout.size);
  full.head(sp.gain_var) = gr->solution.x;
  full(sp.gain_var) = gr->g;
  const RMat b12 = sp.layout.unpack(full, "B12");
  st.certified_g = gr->g;
  st.b12 = b12;
  st.b21 = theta_partner(b12);
  st.controller.b_12 = b12.cast<Complex>();
  st.controller.b_21 = st.b21.cast<Complex>();
  st.verified_norm = verify_norm(plant, st.controller);
  st.note.clear();
  return st;
}

SynthesisState hinf_step3(const PlantModel& plant, const SynthesisState& state,
                          const HinfOptions& opts) {
  const QuadPlant pl = quad_plant(plant);
  const Index n = pl.n();
  const RMat m = opts.step3_identity_mn ? RMat::Identity(n, n) : state.m;
  const RMat n_mat = opts.step3_identity_mn ? RMat::Identity(n, n) : state.n;
  StepProblem sp = controller_step_problem(pl, state.b12, m, n_mat);

  SynthesisState st = state;
  st.step = 3;
  auto gr = bracket_and_minimize(sp, state.certified_g, opts);
  if (!gr) {
    st.note = "step-3 LMI infeasible; keeping previous controller";
    return st;
  }
  RVec full(sp.layout.size);
  full.head(sp.gain_var) = gr->solution.x;
  full(sp.gain_var) = gr->g;
  const RMat x = sp.layout.unpack(full, "X");
  const RMat y = sp.layout.unpack(full, "Y");
  RecoveredController rc;
  try {
    rc = recover_controller(x, y, sp.layout.unpack(full, "Ah"), sp.layout.unpack(full, "Bh"),
                            sp.layout.unpack(full, "Ch"), m, n_mat, plant);
  } catch (const std::exception& e) {
    st.note = std::string("step-3 recovery failed: ") + e.what();
    return st;
  }
  Controller cand = make_controller(pl, rc, state.b12);
  const double norm = verify_norm(plant, cand);
  if (controller_magnitude(rc) > opts.ill_conditioned_norm) {
    st.note = "step-3 recovery is ill-conditioned; keeping previous controller";
    return st;
  }
  if (norm > state.verified_norm) {
    // The fixed (M, N) break the congruence certificate, so a recovered
    // controller can verify worse than the certified level; keep the
    // incumbent in that case.
    st.note = "step-3 recovery verified worse than incumbent; keeping previous controller";
    return st;
  }
  st.x = x;
  st.y = y;
  st.a_hat = sp.layout.unpack(full, "Ah");
  st.b_hat = sp.layout.unpack(full, "Bh");
  st.c_hat = sp.layout.unpack(full, "Ch");
  st.m = m;
  st.n = n_mat;
  st.certified_g = gr->g;
  st.controller = std::move(cand);
  st.verified_norm = norm;
  st.note.clear();
  return st;
}

SynthesisState synthesize_hinf(const PlantModel& plant, const HinfOptions& opts) {
  SynthesisState best = hinf_step1(plant, opts);
  HinfOptions loop_opts = opts;
  loop_opts.target_g.reset();
  for (int round = 0; round < opts.max_rounds; ++round) {
    const double before = best.verified_norm;
    SynthesisState s2 = hinf_step2(plant, best, loop_opts);
    if (s2.verified_norm <= best.verified_norm) best = s2;
    SynthesisState s3 = hinf_step3(plant, best, loop_opts);
    if (s3.verified_norm <= best.verified_norm) best = s3;
    if (before - best.verified_norm < opts.g_tol) break;
  }
  return best;
}

LqgResult lqg_synthesize(const PlantModel& plant, const Controller& indirect, const RVec& lo,
                         const RVec& hi, const std::vector<Index>& steps,
                         const LqgOptions& opts) {
  const Index n = plant.n();
  const Index nk = indirect.n();
  const bool scalar_kpm = plant.rep == Rep::Annihilation && lo.size() == 2;
  if (!scalar_kpm && lo.size() != n * nk) {
    throw std::invalid_argument("lqg_synthesize: box dimension matches neither (K-, K+) nor B12");
  }
  if (scalar_kpm && (n != 2 || nk != 2)) {
    throw std::invalid_argument("lqg_synthesize: scalar (K-, K+) needs single-mode systems");
  }

  auto with_coupling = [&](const RVec& v) {
    Controller k = indirect;
    if (scalar_kpm) {
      const DoubledMatrix b21 = delta(CMat::Constant(1, 1, v(0)), CMat::Constant(1, 1, v(1)));
      k.b_12 = (-flat(b21)).expand();
      k.b_21 = b21.expand();
    } else {
      RMat b12(n, nk);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < nk; ++j) b12(i, j) = v(i * nk + j);
      k.b_12 = b12.cast<Complex>();
      k.b_21 = theta_partner(b12).cast<Complex>();
    }
    return k;
  };
  auto drift_of = [&](const RVec& v) { return close_loop(plant, with_coupling(v)).a; };
  const Objective objective = penalized(
      [&](const RVec& v) { return lqg_cost(close_loop(plant, with_coupling(v))); }, drift_of);

  GridResult grid = grid_search(objective, lo, hi, steps);
  RVec at = grid.x;
  double val = grid.f;
  if (opts.polish && val < opts.penalty_floor) {
    NelderMeadOptions nm;
    nm.initial_step = 0.05;
    const NelderMeadResult polish = nelder_mead(objective, at, nm);
    if (polish.f < val) {
      // keep the polished point only if it stays inside the box
      bool inside = true;
      for (Index i = 0; i < lo.size(); ++i) {
        inside = inside && polish.x(i) >= lo(i) - 1e-12 && polish.x(i) <= hi(i) + 1e-12;
      }
      if (inside) {
        at = polish.x;
        val = polish.f;
      }
    }
  }
  if (val >= opts.penalty_floor) {
    throw std::runtime_error("lqg_synthesize: no stabilizing coupling found in the box");
  }

  LqgResult out;
  out.controller = finalize(with_coupling(at));
  out.cost = lqg_cost(close_loop(plant, out.controller));
  out.coupling = at;
  return out;
}

Controller finalize(const Controller& k_in) {
  const Rep original = k_in.rep;
  Controller k = k_in.to_rep(Rep::Quadrature);
  auto re = [](const CMat& m) { return real_part_checked(m, 1e-9); };
  const Completion comp = complete_controller(re(k.a_k), re(k.b_k), re(k.c_k));
  k.b_k1 = comp.b_k1.cast<Complex>();
  k.b_k2 = comp.b_k2.cast<Complex>();
  k.b_k0 = comp.b_k0.cast<Complex>();
  const RealizabilityReport rep = check_quadrature_controller(k, 1e-8);
  if (!rep.verdict) {
    throw std::runtime_error("finalize: completion failed the realizability check");
  }
  return k.to_rep(original);
}

}  // namespace lqs
