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

#ifndef QNEWTON_STATEVECTOR_HPP
#define QNEWTON_STATEVECTOR_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qnewton/complex_matrix.hpp"
#include "qnewton/common.hpp"

namespace qnewton {

/// Named contiguous qubit ranges. Qubit 0 is the least significant bit of the
/// basis-state index, and bit 0 of every register is its least significant bit
/// (little-endian throughout; bitstrings are only rendered big-endian for
/// display).
class RegisterLayout {
 public:
  struct Range {
    std::string name;
    int lo = 0;
    int size = 0;
  };

  /// Appends a register directly above the ones already present, so ranges are
  /// pairwise disjoint and jointly cover [0, total_qubits) by construction.
  int add(const std::string& name, int size) {
    if (size <= 0) throw ConfigError("register size must be positive: " + name);
    for (const Range& r : ranges_)
      if (r.name == name) throw DuplicateIndexError("register name reused: " + name);
    Range r{name, total_, size};
    ranges_.push_back(r);
    total_ += size;
    return r.lo;
  }

  const Range& find(const std::string& name) const {
    for (const Range& r : ranges_)
      if (r.name == name) return r;
    throw IndexOutOfRangeError("no register named " + name);
  }

  bool has(const std::string& name) const {
    for (const Range& r : ranges_)
      if (r.name == name) return true;
    return false;
  }

  int total_qubits() const { return total_; }
  const std::vector<Range>& ranges() const { return ranges_; }

  std::uint64_t extract(std::uint64_t basis_index, const std::string& name) const {
    const Range& r = find(name);
    return (basis_index >> r.lo) & ((std::uint64_t{1} << r.size) - 1);
  }

  std::uint64_t mask(const std::string& name) const {
    const Range& r = find(name);
    return ((std::uint64_t{1} << r.size) - 1) << r.lo;
  }

 private:
  std::vector<Range> ranges_;
  int total_ = 0;
};

/// Dense 2^q statevector with the small gate set the circuits here need.
/// Operations mutate in place; copy the object for value semantics.
class StateVector {
 public:
  static constexpr int kMaxQubits = 26;  // 2^26 amplitudes = 1 GiB; memory cap

  explicit StateVector(int num_qubits) : q_(num_qubits) {
    if (num_qubits < 1) throw ConfigError("need at least one qubit");
    if (num_qubits > kMaxQubits)
      throw WidthExceededError("requested " + std::to_string(num_qubits) + " qubits, cap is " +
                               std::to_string(kMaxQubits));
    amp_.assign(std::uint64_t{1} << num_qubits, cdouble(0, 0));
    amp_[0] = 1.0;
  }

  static StateVector basis(int num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    s.amp_[0] = 0.0;
    s.amp_.at(index) = 1.0;
    return s;
  }

  int num_qubits() const { return q_; }
  std::uint64_t dim() const { return amp_.size(); }
  const CVector& amplitudes() const { return amp_; }
  CVector& amplitudes() { return amp_; }

  double norm_squared() const {
    double s = 0;
    for (const cdouble& z : amp_) s += std::norm(z);
    return s;
  }

  void apply_h(int q) {
    check_targets({q});
    const std::uint64_t b = std::uint64_t{1} << q;
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    for (std::uint64_t i = 0; i < amp_.size(); ++i) {
      if (i & b) continue;
      const cdouble a0 = amp_[i], a1 = amp_[i | b];
      amp_[i] = (a0 + a1) * inv_sqrt2;
      amp_[i | b] = (a0 - a1) * inv_sqrt2;
    }
  }

  void apply_x(int q) {
    check_targets({q});
    const std::uint64_t b = std::uint64_t{1} << q;
    for (std::uint64_t i = 0; i < amp_.size(); ++i)
      if (!(i & b)) std::swap(amp_[i], amp_[i | b]);
  }

  void apply_cx(int c, int t) {
    check_targets({c, t});
    const std::uint64_t cb = std::uint64_t{1} << c, tb = std::uint64_t{1} << t;
    for (std::uint64_t i = 0; i < amp_.size(); ++i)
      if ((i & cb) && !(i & tb)) std::swap(amp_[i], amp_[i | tb]);
  }

  void apply_ccx(int c1, int c2, int t) {
    check_targets({c1, c2, t});
    const std::uint64_t cb = (std::uint64_t{1} << c1) | (std::uint64_t{1} << c2);
    const std::uint64_t tb = std::uint64_t{1} << t;
    for (std::uint64_t i = 0; i < amp_.size(); ++i)
      if (((i & cb) == cb) && !(i & tb)) std::swap(amp_[i], amp_[i | tb]);
  }

  void apply_phase(int q, double theta) {
    check_targets({q});
    const std::uint64_t b = std::uint64_t{1} << q;
    const cdouble f = std::exp(cdouble(0, theta));
    for (std::uint64_t i = 0; i < amp_.size(); ++i)
      if (i & b) amp_[i] *= f;
  }

  void apply_cphase(int c, int t, double theta) {
    check_targets({c, t});
    const std::uint64_t m = (std::uint64_t{1} << c) | (std::uint64_t{1} << t);
    const cdouble f = std::exp(cdouble(0, theta));
    for (std::uint64_t i = 0; i < amp_.size(); ++i)
      if ((i & m) == m) amp_[i] *= f;
  }

  /// Applies a dense unitary to the contiguous qubits [lo, lo + width), on the
  /// subspace where `control` is |1> (control = -1 for unconditional).
  void apply_matrix(const ComplexMatrix& u, int lo, int width, int control = -1,
                    bool check_unitary = true) {
    if (width < 1 || lo < 0 || lo + width > q_)
      throw IndexOutOfRangeError("matrix target range out of bounds");
    if (control >= 0) {
      if (control >= q_) throw IndexOutOfRangeError("control qubit out of range");
      if (control >= lo && control < lo + width)
        throw DuplicateIndexError("control qubit inside target range");
    }
    const std::uint64_t sub = std::uint64_t{1} << width;
    if (u.rows() != sub || u.cols() != sub)
      throw DimensionMismatchError("unitary dimension does not match target register");
    if (check_unitary) {
      const ComplexMatrix gram = u.adjoint() * u;
      for (std::size_t i = 0; i < gram.rows(); ++i)
        for (std::size_t j = 0; j < gram.cols(); ++j) {
          const cdouble want = (i == j) ? cdouble(1, 0) : cdouble(0, 0);
          if (std::abs(gram(i, j) - want) > 1e-10)
            throw NonUnitaryError("matrix is not unitary within 1e-10");
        }
    }
    const std::uint64_t stride = std::uint64_t{1} << lo;
    const std::uint64_t low_count = stride;
    const std::uint64_t high_count = amp_.size() >> (lo + width);
    CVector x(sub), y(sub);
    for (std::uint64_t hi = 0; hi < high_count; ++hi) {
      const std::uint64_t base_hi = hi << (lo + width);
      for (std::uint64_t loq = 0; loq < low_count; ++loq) {
        const std::uint64_t base = base_hi | loq;
        if (control >= 0 && !((base >> control) & 1ULL)) continue;
        for (std::uint64_t t = 0; t < sub; ++t) x[t] = amp_[base + t * stride];
        for (std::uint64_t r = 0; r < sub; ++r) {
          cdouble s(0, 0);
          for (std::uint64_t t = 0; t < sub; ++t) s += u(r, t) * x[t];
          y[r] = s;
        }
        for (std::uint64_t t = 0; t < sub; ++t) amp_[base + t * stride] = y[t];
      }
    }
  }

 private:
  void check_targets(std::initializer_list<int> qs) const {
    int seen_count = 0;
    for (int a : qs) {
      if (a < 0 || a >= q_) throw IndexOutOfRangeError("qubit index out of range");
      ++seen_count;
    }
    int i = 0;
    for (int a : qs) {
      int j = 0;
      for (int b : qs) {
        if (i < j && a == b) throw DuplicateIndexError("duplicate qubit index");
        ++j;
      }
      ++i;
    }
    (void)seen_count;
  }

  int q_;
  CVector amp_;
};

enum class GateKind { H, X, CX, CCX, Phase, CPhase, Matrix };

struct GateOp {
  GateKind kind = GateKind::X;
  int q0 = -1, q1 = -1, q2 = -1;  // targets/controls for the elementary gates
  double theta = 0;
  std::shared_ptr<const ComplexMatrix> matrix;  // GateKind::Matrix
  int target_lo = 0, target_width = 0, control = -1;

  static GateOp h(int q) { return {GateKind::H, q}; }
  static GateOp x(int q) { return {GateKind::X, q}; }
  static GateOp cx(int c, int t) { return {GateKind::CX, c, t}; }
  static GateOp ccx(int c1, int c2, int t) { return {GateKind::CCX, c1, c2, t}; }
  static GateOp phase(int q, double th) {
    GateOp g{GateKind::Phase, q};
    g.theta = th;
    return g;
  }
  static GateOp cphase(int c, int t, double th) {
    GateOp g{GateKind::CPhase, c, t};
    g.theta = th;
    return g;
  }
  static GateOp matrix_gate(std::shared_ptr<const ComplexMatrix> u, int lo, int width,
                            int control = -1) {
    GateOp g;
    g.kind = GateKind::Matrix;
    g.matrix = std::move(u);
    g.target_lo = lo;
    g.target_width = width;
    g.control = control;
    return g;
  }

  GateOp inverse() const {
    GateOp g = *this;
    switch (kind) {
      case GateKind::H:
      case GateKind::X:
      case GateKind::CX:
      case GateKind::CCX:
        break;  // self-inverse
      case GateKind::Phase:
      case GateKind::CPhase:
        g.theta = -theta;
        break;
      case GateKind::Matrix:
        g.matrix = std::make_shared<const ComplexMatrix>(matrix->adjoint());
        break;
    }
    return g;
  }

  void apply_to(StateVector& s) const {
    switch (kind) {
      case GateKind::H: s.apply_h(q0); break;
      case GateKind::X: s.apply_x(q0); break;
      case GateKind::CX: s.apply_cx(q0, q1); break;
      case GateKind::CCX: s.apply_ccx(q0, q1, q2); break;
      case GateKind::Phase: s.apply_phase(q0, theta); break;
      case GateKind::CPhase: s.apply_cphase(q0, q1, theta); break;
      case GateKind::Matrix:
        // Builders validate unitarity once at circuit-construction time.
        s.apply_matrix(*matrix, target_lo, target_width, control, false);
        break;
    }
  }
};

/// A plain gate list. Fragments compose by concatenation and invert gate by
/// gate in reverse order.
struct Circuit {
  std::vector<GateOp> ops;

  void append(GateOp g) { ops.push_back(std::move(g)); }
  void append(const Circuit& c) { ops.insert(ops.end(), c.ops.begin(), c.ops.end()); }

  Circuit inverted() const {
    Circuit inv;
    inv.ops.reserve(ops.size());
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) inv.ops.push_back(it->inverse());
    return inv;
  }

  void apply_to(StateVector& s) const {
    for (const GateOp& g : ops) g.apply_to(s);
  }

  std::size_t size() const { return ops.size(); }
};

/// Result of projecting a state onto register constraints.
struct MeasurementOutcome {
  std::map<std::string, std::string> bitstrings;  // register -> big-endian value
  double probability = 0;
  StateVector post_state{1};
};

/// Initializes register `reg` (default "B") with b / ||b||, zero-padded; every
/// other register is |0>.
inline StateVector prepare_amplitude_state(const CVector& b, const RegisterLayout& layout,
                                           const std::string& reg = "B") {
  const RegisterLayout::Range& r = layout.find(reg);
  if (b.empty() || b.size() > (std::uint64_t{1} << r.size))
    throw DimensionMismatchError("vector does not fit the target register");
  const double n = norm2(b);
  if (n < 1e-300) throw ZeroVectorError("cannot amplitude-encode the zero vector");
  StateVector s(layout.total_qubits());
  s.amplitudes()[0] = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    s.amplitudes()[static_cast<std::uint64_t>(i) << r.lo] = b[i] / n;
  return s;
}

inline StateVector prepare_amplitude_state(const RVector& b, const RegisterLayout& layout,
                                           const std::string& reg = "B") {
  return prepare_amplitude_state(CVector(b.begin(), b.end()), layout, reg);
}

/// Projects onto the subspace where every constrained register holds the given
/// value, renormalizes, and reports the branch probability.
inline MeasurementOutcome post_select(
    const StateVector& state, const RegisterLayout& layout,
    const std::vector<std::pair<std::string, std::uint64_t>>& constraints) {
  std::uint64_t mask = 0, want = 0;
  MeasurementOutcome out;
  for (const auto& [name, value] : constraints) {
    const RegisterLayout::Range& r = layout.find(name);
    if (value >> r.size) throw IndexOutOfRangeError("constraint value too wide for " + name);
    mask |= layout.mask(name);
    want |= value << r.lo;
    out.bitstrings[name] = format_bits(value, r.size);
  }
  double p = 0;
  for (std::uint64_t i = 0; i < state.dim(); ++i)
    if ((i & mask) == want) p += std::norm(state.amplitudes()[i]);
  if (p < 1e-14) throw ZeroProbabilityError("post-selection branch has vanishing probability");
  out.probability = p;
  out.post_state = state;
  const double inv = 1.0 / std::sqrt(p);
  for (std::uint64_t i = 0; i < out.post_state.dim(); ++i) {
    if ((i & mask) == want)
      out.post_state.amplitudes()[i] *= inv;
    else
      out.post_state.amplitudes()[i] = 0.0;
  }
  return out;
}

/// Born-rule sampling of one register. Deterministic for a fixed seed; the
/// histogram keys are big-endian bitstrings.
inline std::map<std::string, std::uint64_t> sample_measurements(const StateVector& state,
                                                                const RegisterLayout& layout,
                                                                const std::string& reg,
                                                                std::uint64_t shots,
                                                                std::uint64_t seed) {
  if (shots < 1) throw ConfigError("need at least one shot");
  const RegisterLayout::Range& r = layout.find(reg);
  const std::uint64_t values = std::uint64_t{1} << r.size;
  std::vector<double> cdf(values, 0.0);
  for (std::uint64_t i = 0; i < state.dim(); ++i)
    cdf[layout.extract(i, reg)] += std::norm(state.amplitudes()[i]);
  for (std::uint64_t v = 1; v < values; ++v) cdf[v] += cdf[v - 1];
  const double total = cdf[values - 1];
  SplitMix64 rng(seed);
  std::map<std::string, std::uint64_t> hist;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    std::uint64_t lo = 0, hi = values - 1;
    while (lo < hi) {
      const std::uint64_t mid = (lo + hi) / 2;
      if (cdf[mid] > u)
        hi = mid;
      else
        lo = mid + 1;
    }
    ++hist[format_bits(lo, r.size)];
  }
  return hist;
}

}  // namespace qnewton

#endif
