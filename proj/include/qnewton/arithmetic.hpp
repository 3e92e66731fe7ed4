// Copyright 2026 qnewton contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QNEWTON_ARITHMETIC_HPP
#define QNEWTON_ARITHMETIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qnewton/common.hpp"
#include "qnewton/statevector.hpp"

namespace qnewton {

/// A reversible circuit over {X, CX, CCX} together with the register map it
/// was built against. Basis states evaluate classically (the gates are bit
/// permutations), which is what the exhaustive truth-table checks use; the
/// same gate list applies to a StateVector inside the full pipeline.
struct ArithmeticCircuit {
  Circuit circuit;
  RegisterLayout layout;
  std::vector<std::string> ancilla_registers;  // must return to 0 on clean inputs

  int num_bits() const { return layout.total_qubits(); }

  /// Classical evaluation on one basis state.
  std::uint64_t apply_to_bits(std::uint64_t in) const {
    for (const GateOp& g : circuit.ops) {
      switch (g.kind) {
        case GateKind::X:
          in ^= std::uint64_t{1} << g.q0;
          break;
        case GateKind::CX:
          if ((in >> g.q0) & 1ULL) in ^= std::uint64_t{1} << g.q1;
          break;
        case GateKind::CCX:
          if (((in >> g.q0) & 1ULL) && ((in >> g.q1) & 1ULL)) in ^= std::uint64_t{1} << g.q2;
          break;
        default:
          throw ConfigError("arithmetic circuits contain only X/CX/CCX gates");
      }
    }
    return in;
  }

  std::uint64_t pack(const std::vector<std::pair<std::string, std::uint64_t>>& values) const {
    std::uint64_t in = 0;
    for (const auto& [name, v] : values) in |= v << layout.find(name).lo;
    return in;
  }

  std::uint64_t unpack(std::uint64_t state, const std::string& reg) const {
    return layout.extract(state, reg);
  }
};

namespace detail {

// Cuccaro MAJ/UMA ripple-carry addition of register a into register b,
// modulo 2^w, with one ancilla carry wire c (|0> in, |0> out). When
// carry_out >= 0 the final carry is XORed onto that qubit. When ctrl >= 0 every
// gate is controlled on ctrl; Toffolis then need one clean borrow qubit.
inline void emit_cx(Circuit& c, int a, int b, int ctrl, int borrow) {
  if (ctrl < 0) {
    c.append(GateOp::cx(a, b));
  } else {
    c.append(GateOp::ccx(ctrl, a, b));
  }
  (void)borrow;
}

inline void emit_ccx(Circuit& c, int a, int b, int t, int ctrl, int borrow) {
  if (ctrl < 0) {
    c.append(GateOp::ccx(a, b, t));
  } else {
    // CCCX from three Toffolis through a clean borrow qubit.
    c.append(GateOp::ccx(a, b, borrow));
    c.append(GateOp::ccx(ctrl, borrow, t));
    c.append(GateOp::ccx(a, b, borrow));
  }
}

inline void emit_cuccaro_adder(Circuit& c, const std::vector<int>& a, const std::vector<int>& b,
                               int carry_anc, int carry_out = -1, int ctrl = -1,
                               int borrow = -1) {
  const int w = static_cast<int>(a.size());
  if (ctrl >= 0 && borrow < 0) throw ConfigError("controlled adder needs a borrow qubit");
  auto maj = [&](int x, int y, int z) {
    emit_cx(c, z, y, ctrl, borrow);
    emit_cx(c, z, x, ctrl, borrow);
    emit_ccx(c, x, y, z, ctrl, borrow);
  };
  auto uma = [&](int x, int y, int z) {
    emit_ccx(c, x, y, z, ctrl, borrow);
    emit_cx(c, z, x, ctrl, borrow);
    emit_cx(c, x, y, ctrl, borrow);
  };
  maj(carry_anc, b[0], a[0]);
  for (int i = 1; i < w; ++i) maj(a[i - 1], b[i], a[i]);
  if (carry_out >= 0) emit_cx(c, a[w - 1], carry_out, ctrl, borrow);
  for (int i = w - 1; i >= 1; --i) uma(a[i - 1], b[i], a[i]);
  uma(carry_anc, b[0], a[0]);
}

// Shift-and-add product: for each multiplier bit x_k, a controlled addition of
// `a` into the product slice [k, k+w) with carry into p[k+w]. The addend is
// stored out of place, so the whole thing inverts gate by gate.
inline void emit_multiplier(Circuit& c, const std::vector<int>& x, const std::vector<int>& a,
                            const std::vector<int>& p, int carry_anc, int borrow) {
  const int w = static_cast<int>(x.size());
  for (int k = 0; k < w; ++k) {
    std::vector<int> slice(p.begin() + k, p.begin() + k + w);
    emit_cuccaro_adder(c, a, slice, carry_anc, p[k + w], x[k], borrow);
  }
}

// Multi-controlled X through a V-chain of Toffolis; s controls need
// max(0, s - 2) clean work qubits, all restored.
inline void emit_mcx(Circuit& c, const std::vector<int>& controls, int target,
                     const std::vector<int>& work) {
  const int s = static_cast<int>(controls.size());
  if (s == 0) {
    c.append(GateOp::x(target));
    return;
  }
  if (s == 1) {
    c.append(GateOp::cx(controls[0], target));
    return;
  }
  if (s == 2) {
    c.append(GateOp::ccx(controls[0], controls[1], target));
    return;
  }
  if (static_cast<int>(work.size()) < s - 2)
    throw ConfigError("mcx with " + std::to_string(s) + " controls needs " +
                      std::to_string(s - 2) + " clean work qubits");
  Circuit chain;
  chain.append(GateOp::ccx(controls[0], controls[1], work[0]));
  for (int i = 2; i < s - 1; ++i)
    chain.append(GateOp::ccx(controls[i], work[i - 2], work[i - 1]));
  c.append(chain);
  c.append(GateOp::ccx(controls[s - 1], work[s - 3], target));
  c.append(chain.inverted());
}

// flag ^= OR(bits), as X(flag) plus a multi-controlled X on the negated bits.
inline void emit_flag_or(Circuit& c, const std::vector<int>& bits, int flag,
                         const std::vector<int>& work) {
  const int s = static_cast<int>(bits.size());
  if (s == 0) return;
  if (s == 1) {
    c.append(GateOp::cx(bits[0], flag));
    return;
  }
  for (int b : bits) c.append(GateOp::x(b));
  c.append(GateOp::x(flag));
  emit_mcx(c, bits, flag, work);
  for (int b : bits) c.append(GateOp::x(b));
}

}  // namespace detail

/// |a>|b> -> |a>|(a+b) mod 2^w>, Cuccaro ripple-carry; one ancilla, restored to
/// |0>. With `with_carry` an extra qubit receives the carry-out.
inline ArithmeticCircuit build_adder(int w, bool with_carry = false) {
  if (w < 1) throw ConfigError("adder width must be >= 1");
  ArithmeticCircuit ac;
  const int a_lo = ac.layout.add("a", w);
  const int b_lo = ac.layout.add("b", w);
  const int anc = ac.layout.add("anc", 1);
  int cout = -1;
  if (with_carry) cout = ac.layout.add("carry", 1);
  ac.ancilla_registers = {"anc"};
  std::vector<int> a(w), b(w);
  for (int i = 0; i < w; ++i) { a[i] = a_lo + i; b[i] = b_lo + i; }
  detail::emit_cuccaro_adder(ac.circuit, a, b, anc, cout);
  return ac;
}

/// |x>|a>|0>_{2w} -> |x>|a>|a*x>, by controlled additions of shifted copies of
/// `a` (one adder carry ancilla plus one borrow qubit for the controlled
/// Toffolis, both restored).
inline ArithmeticCircuit build_multiplier(int w) {
  if (w < 1) throw ConfigError("multiplier width must be >= 1");
  ArithmeticCircuit ac;
  const int x_lo = ac.layout.add("x", w);
  const int a_lo = ac.layout.add("a", w);
  const int p_lo = ac.layout.add("p", 2 * w);
  const int anc = ac.layout.add("anc", 1);
  const int borrow = ac.layout.add("borrow", 1);
  ac.ancilla_registers = {"anc", "borrow"};
  std::vector<int> x(w), a(w), p(2 * w);
  for (int i = 0; i < w; ++i) { x[i] = x_lo + i; a[i] = a_lo + i; }
  for (int i = 0; i < 2 * w; ++i) p[i] = p_lo + i;
  detail::emit_multiplier(ac.circuit, x, a, p, anc, borrow);
  return ac;
}

/// The multiplier's contract requires the out-of-place product register to
/// start at |0>; checked on basis inputs in simulation.
inline void validate_multiplier_input(const ArithmeticCircuit& mult, std::uint64_t basis_state) {
  if (mult.unpack(basis_state, "p") != 0)
    throw ProductRegisterNotZeroError("product register must start at zero");
}

/// Flips `flag` iff the product register's value >= 2^threshold_exponent. A
/// power-of-two threshold reduces the comparison to an OR over the bits at and
/// above the threshold position.
inline ArithmeticCircuit build_comparator_pow2(int product_width, int threshold_exponent) {
  if (threshold_exponent <= 0 || threshold_exponent > product_width)
    throw ConfigError("threshold exponent must lie in (0, product_width]");
  ArithmeticCircuit ac;
  const int p_lo = ac.layout.add("p", product_width);
  const int flag = ac.layout.add("flag", 1);
  const int s = product_width - threshold_exponent;
  std::vector<int> work;
  if (s > 2) {
    const int w_lo = ac.layout.add("work", s - 2);
    for (int i = 0; i < s - 2; ++i) work.push_back(w_lo + i);
    ac.ancilla_registers = {"work"};
  }
  std::vector<int> hi;
  for (int i = threshold_exponent; i < product_width; ++i) hi.push_back(p_lo + i);
  detail::emit_flag_or(ac.circuit, hi, flag, work);
  return ac;
}

}  // namespace qnewton

#endif
