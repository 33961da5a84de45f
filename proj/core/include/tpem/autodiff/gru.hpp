#pragma once

#include "tpem/autodiff/tape.hpp"

namespace tpem::ad {

// Gate parameters of one GRU cell as recorded on a tape. w_* map the input
// (H x E), u_* the previous state (H x H), b_* are H x 1 biases.
struct GruVars {
  Var w_z, u_z, b_z;
  Var w_r, u_r, b_r;
  Var w_n, u_n, b_n;
};

// Standard GRU step:
//   z = sigmoid(W_z x + U_z h + b_z)
//   r = sigmoid(W_r x + U_r h + b_r)
//   n = tanh(W_n x + U_n (r * h) + b_n)
//   h' = (1 - z) * h + z * n
Var gru_cell(Tape& tape, const GruVars& w, Var x, Var h);

}  // namespace tpem::ad
