#pragma once

#include "lqs/model.hpp"

namespace lqs {

// Bidirectional direct coupling G1 |><| G2 through the interaction
// Hamiltonian with S = Delta(iK-, iK+), K-/+ of shape n2 x n1.
SystemMatrices direct_couple(const SystemMatrices& g1, const SystemMatrices& g2,
                             const CMat& k_minus, const CMat& k_plus);

// Series (cascade) product G2 <| G1: the output field of G1 drives G2.
// Field channel counts must agree.
SystemMatrices series(const SystemMatrices& g1, const SystemMatrices& g2);

// Assembled plant-controller loop. Noise columns of g are ordered
// (b_in, b_v, b_vK1, b_vK2); absent groups have zero width.
struct ClosedLoop {
  Rep rep = Rep::Annihilation;
  CMat a;     // closed-loop drift
  CMat b_w;   // disturbance w columns
  CMat g;     // vacuum noise columns
  CMat c_z;   // performance rows
  CMat d_zw;  // w -> z feedthrough
  ClosedLoop to_rep(Rep target) const;
};

ClosedLoop close_loop(const PlantModel& plant, const Controller& k);

}  // namespace lqs
