#pragma once

#include "qicost/protocol.hpp"

namespace qicost::fixtures {

inline ComplexMatrix copy_matrix(std::size_t d) {
  ComplexMatrix m(d * d, d);
  for (std::size_t v = 0; v < d; ++v) m.at(v * d + v, v) = cplx(1.0, 0.0);
  return m;
}

/// Alice moves her input register into the message, unmodified.
inline QuantumProtocol unsafe_send_x(std::size_t d = 2) {
  QuantumProtocol p;
  p.x_dim = d;
  p.y_dim = d;
  Round r;
  r.owner = Party::alice;
  r.iso.in_regs = {"X"};
  r.iso.out_regs = {{"C1", d}};
  r.iso.matrix = ComplexMatrix::identity(d);
  r.message = "C1";
  p.rounds.push_back(std::move(r));
  return p;
}

/// Send X, then Bob returns it without keeping a copy.
inline QuantumProtocol bounce_uncopied(std::size_t d = 2) {
  QuantumProtocol p = unsafe_send_x(d);
  Round r;
  r.owner = Party::bob;
  r.iso.in_regs = {"C1"};
  r.iso.out_regs = {{"C2", d}};
  r.iso.matrix = ComplexMatrix::identity(d);
  r.message = "C2";
  p.rounds.push_back(std::move(r));
  return p;
}

/// Send X; Bob copies it and returns the original; r-fold trips alternate
/// Bob copy-return and Alice passing the register onward.
inline QuantumProtocol bounce_copied(std::size_t trips, std::size_t d = 2) {
  QuantumProtocol p = unsafe_send_x(d);
  std::size_t fresh = 2;
  for (std::size_t t = 0; t < trips; ++t) {
    if (t > 0) {
      Round fwd;  // Alice passes the register back to Bob, uncopied
      fwd.owner = Party::alice;
      fwd.iso.in_regs = {"C" + std::to_string(fresh - 1)};
      fwd.iso.out_regs = {{"C" + std::to_string(fresh), d}};
      fwd.iso.matrix = ComplexMatrix::identity(d);
      fwd.message = "C" + std::to_string(fresh);
      ++fresh;
      p.rounds.push_back(std::move(fwd));
    }
    Round back;  // Bob keeps a copy and returns the register
    back.owner = Party::bob;
    back.iso.in_regs = {"C" + std::to_string(fresh - 1)};
    back.iso.out_regs = {{"B" + std::to_string(fresh), d},
                         {"C" + std::to_string(fresh), d}};
    back.iso.matrix = copy_matrix(d);
    back.message = "C" + std::to_string(fresh);
    ++fresh;
    p.rounds.push_back(std::move(back));
  }
  return p;
}

/// Alice sends a safe copy of X; Bob keeps it.
inline QuantumProtocol safe_send_x(std::size_t d = 2) {
  QuantumProtocol p;
  p.x_dim = d;
  p.y_dim = d;
  Round r;
  r.owner = Party::alice;
  r.iso.in_regs = {"X"};
  r.iso.out_regs = {{"X", d}, {"C1", d}};
  r.iso.matrix = copy_matrix(d);
  r.message = "C1";
  r.controls = {"X"};
  p.rounds.push_back(std::move(r));
  return p;
}

/// Alice sends the two bits of her input in separate rounds (with a dummy
/// reply in between to keep the alternation); Bob evaluates f at the end.
/// Inputs: x on 2 bits, y of dimension f_y_dim; zero error by construction.
inline QuantumProtocol split_send_x_protocol(
    std::size_t y_dim, const std::vector<std::size_t>& f_table) {
  QuantumProtocol p;
  p.x_dim = 4;
  p.y_dim = y_dim;
  Round hi;
  hi.owner = Party::alice;
  hi.iso.in_regs = {"X"};
  hi.iso.out_regs = {{"X", 4}, {"C1", 2}};
  ComplexMatrix mhi(8, 4);
  for (std::size_t x = 0; x < 4; ++x) mhi.at(x * 2 + (x >> 1), x) = cplx(1, 0);
  hi.iso.matrix = std::move(mhi);
  hi.message = "C1";
  hi.controls = {"X"};
  p.rounds.push_back(std::move(hi));

  Round dummy;
  dummy.owner = Party::bob;
  dummy.iso.in_regs = {"C1"};
  dummy.iso.out_regs = {{"C1", 2}, {"C2", 2}};
  ComplexMatrix md(4, 2);
  for (std::size_t c = 0; c < 2; ++c) md.at(c * 2 + 0, c) = cplx(1, 0);
  dummy.iso.matrix = std::move(md);
  dummy.message = "C2";
  dummy.controls = {"C1"};
  p.rounds.push_back(std::move(dummy));

  Round lo;
  lo.owner = Party::alice;
  lo.iso.in_regs = {"X", "C2"};
  lo.iso.out_regs = {{"X", 4}, {"C2", 2}, {"C3", 2}};
  ComplexMatrix mlo(16, 8);
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t c = 0; c < 2; ++c)
      mlo.at((x * 2 + c) * 2 + (x & 1), x * 2 + c) = cplx(1, 0);
  lo.iso.matrix = std::move(mlo);
  lo.message = "C3";
  lo.controls = {"X", "C2"};
  p.rounds.push_back(std::move(lo));

  Round eval;
  eval.owner = Party::bob;
  eval.iso.in_regs = {"Y", "C1", "C3"};
  eval.iso.out_regs = {{"Y", y_dim}, {"C1", 2}, {"C3", 2}, {"BOUT", 2}};
  ComplexMatrix me(y_dim * 4 * 2, y_dim * 4);
  for (std::size_t y = 0; y < y_dim; ++y)
    for (std::size_t c1 = 0; c1 < 2; ++c1)
      for (std::size_t c3 = 0; c3 < 2; ++c3) {
        const std::size_t in = (y * 2 + c1) * 2 + c3;
        const std::size_t x = c1 * 2 + c3;
        me.at(in * 2 + f_table[x * y_dim + y], in) = cplx(1, 0);
      }
  eval.iso.matrix = std::move(me);
  eval.controls = {"Y", "C1", "C3"};
  p.rounds.push_back(std::move(eval));
  p.bob_outputs = {"BOUT"};
  return p;
}

/// Bob outputs the constant 0 regardless of the inputs.
inline QuantumProtocol constant_zero_protocol() {
  QuantumProtocol p;
  p.x_dim = 2;
  p.y_dim = 2;
  Round r1;
  r1.owner = Party::alice;
  r1.iso.in_regs = {};
  r1.iso.out_regs = {{"C1", 2}};
  ComplexMatrix prep(2, 1);
  prep.at(0, 0) = 1.0;
  r1.iso.matrix = std::move(prep);
  r1.message = "C1";
  p.rounds.push_back(std::move(r1));
  Round r2;
  r2.owner = Party::bob;
  r2.iso.in_regs = {"C1"};
  r2.iso.out_regs = {{"BOUT", 2}};
  r2.iso.matrix = ComplexMatrix::identity(2);
  p.rounds.push_back(std::move(r2));
  p.bob_outputs = {"BOUT"};
  return p;
}

}  // namespace qicost::fixtures
