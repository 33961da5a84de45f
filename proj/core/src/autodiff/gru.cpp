#include "tpem/autodiff/gru.hpp"

namespace tpem::ad {

Var gru_cell(Tape& tape, const GruVars& w, Var x, Var h) {
  auto gate = [&](Var wx, Var uh, Var b) { return tape.add(tape.add(tape.matmul(wx, x), tape.matmul(uh, h)), b); };
  const Var z = tape.sigmoid(gate(w.w_z, w.u_z, w.b_z));
  const Var r = tape.sigmoid(gate(w.w_r, w.u_r, w.b_r));
  const Var n = tape.tanh(tape.add(tape.add(tape.matmul(w.w_n, x), tape.matmul(w.u_n, tape.mul(r, h))), w.b_n));
  const Var keep = tape.mul(tape.affine(z, -1.0, 1.0), h);
  return tape.add(keep, tape.mul(z, n));
}

}  // namespace tpem::ad
