// Copyright 2026 The qhegrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "qhe/density.hpp"
#include "qhe/errors.hpp"
#include "qhe/gamma.hpp"
#include "qhe/pauli.hpp"
#include "qhe/plain_state.hpp"
#include "qhe/rng.hpp"

namespace qhe {

// Exact dense oracle over the p x q grid. The appended maximally mixed
// qubits are handled as a mixture of computational-basis branches: either
// every assignment (enumeration, exact) or a seeded uniform sample.
//
// Qubit (x, y) occupies bit position x*q + y of the amplitude index,
// least-significant-bit first.
struct DenseState {
  enum class Mixture : std::uint8_t { Enumerate = 0, Sampled = 1 };

  Gamma gamma;
  Mixture mixture = Mixture::Enumerate;
  std::uint64_t sample_count = 0;  // Sampled only
  std::uint64_t sample_seed = 0;   // Sampled only
  std::vector<double> weights;
  std::vector<std::vector<Cd>> branches;  // each of size 2^(p*q)

  int bit_of(int x, int y) const { return x * gamma.q() + y; }
  std::size_t dim() const { return std::size_t(1) << (gamma.p() * gamma.q()); }
};

// Refuse exhaustive enumeration beyond 2^20 branches.
inline constexpr int kDenseEnumerationBitLimit = 20;

namespace denseops {

// u is row-major 2x2; pairs (i, i|mask) updated in place. Written over raw
// doubles so the pair loop vectorizes.
inline void apply_1q(std::vector<Cd>& amp, int bit, const std::array<Cd, 4>& u) {
  const std::size_t mask = std::size_t(1) << bit;
  const std::size_t step = mask << 1;
  const double u00r = u[0].real(), u00i = u[0].imag(), u01r = u[1].real(), u01i = u[1].imag();
  const double u10r = u[2].real(), u10i = u[2].imag(), u11r = u[3].real(), u11i = u[3].imag();
  double* base = reinterpret_cast<double*>(amp.data());
  for (std::size_t hi = 0; hi < amp.size(); hi += step) {
    double* p0 = base + 2 * hi;
    double* p1 = base + 2 * (hi | mask);
    for (std::size_t k = 0; k < mask; ++k) {
      const double a0r = p0[2 * k], a0i = p0[2 * k + 1];
      const double a1r = p1[2 * k], a1i = p1[2 * k + 1];
      p0[2 * k] = u00r * a0r - u00i * a0i + u01r * a1r - u01i * a1i;
      p0[2 * k + 1] = u00r * a0i + u00i * a0r + u01r * a1i + u01i * a1r;
      p1[2 * k] = u10r * a0r - u10i * a0i + u11r * a1r - u11i * a1i;
      p1[2 * k + 1] = u10r * a0i + u10i * a0r + u11r * a1i + u11i * a1r;
    }
  }
}

inline void apply_cnot(std::vector<Cd>& amp, int control_bit, int target_bit) {
  const std::size_t cmask = std::size_t(1) << control_bit;
  const std::size_t tmask = std::size_t(1) << target_bit;
  const std::size_t lo_mask = std::min(cmask, tmask);
  const std::size_t hi_mask = std::max(cmask, tmask);
  // Enumerate indices with both bits clear, then swap the |c=1,t=0> and
  // |c=1,t=1> amplitudes of each group.
  for (std::size_t a = 0; a < amp.size(); a += hi_mask << 1) {
    for (std::size_t b = a; b < a + hi_mask; b += lo_mask << 1) {
      for (std::size_t i = b; i < b + lo_mask; ++i) std::swap(amp[i | cmask], amp[i | cmask | tmask]);
    }
  }
}

inline std::array<Cd, 4> gate_2x2(GateKind k) {
  Mat m = gate_matrix(k);
  return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

inline std::array<Cd, 4> clifford_2x2(CliffordGate g) {
  switch (g) {
    case CliffordGate::X: return gate_2x2(GateKind::X);
    case CliffordGate::Y: return gate_2x2(GateKind::Y);
    case CliffordGate::Z: return gate_2x2(GateKind::Z);
    case CliffordGate::H: return gate_2x2(GateKind::H);
    default: return gate_2x2(GateKind::S);
  }
}

// Basis-index remap for a column permutation. Bits are row-major, so the
// remap factorizes into one q-bit chunk map applied to every row.
inline std::vector<std::uint32_t> column_chunk_map(int q, const ColumnPermutation& pi) {
  std::vector<std::uint32_t> map(std::size_t(1) << q);
  for (std::uint32_t c = 0; c < map.size(); ++c) {
    std::uint32_t out = 0;
    for (int y = 0; y < q; ++y)
      if ((c >> y) & 1u) out |= std::uint32_t(1) << pi(y);
    map[c] = out;
  }
  return map;
}

inline void permute_columns_branch(std::vector<Cd>& amp, std::vector<Cd>& scratch, int p, int q,
                                   const std::vector<std::uint32_t>& chunk_map) {
  const std::size_t chunk_mask = (std::size_t(1) << q) - 1;
  scratch.assign(amp.size(), Cd(0, 0));
  for (std::size_t i = 0; i < amp.size(); ++i) {
    std::size_t j = 0;
    for (int x = 0; x < p; ++x) j |= std::size_t(chunk_map[(i >> (x * q)) & chunk_mask]) << (x * q);
    scratch[j] = amp[i];
  }
  amp.swap(scratch);
}

// Zero out the amplitudes incompatible with a Z outcome on `bit`
// (outcome_plus keeps bit = 0). Returns the retained squared norm.
inline double project_z(std::vector<Cd>& amp, int bit, bool outcome_plus) {
  const std::size_t mask = std::size_t(1) << bit;
  double kept = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    bool is_one = (i & mask) != 0;
    if (is_one == outcome_plus)
      amp[i] = Cd(0, 0);
    else
      kept += std::norm(amp[i]);
  }
  return kept;
}

inline double squared_norm(const std::vector<Cd>& amp) {
  double s = 0.0;
  for (const Cd& a : amp) s += std::norm(a);
  return s;
}

// Partial trace of a (possibly unnormalized) pure branch onto keep_bits,
// accumulated into rho with the given weight. keep_bits[0] is the output's
// qubit 0.
inline void accumulate_reduced(const std::vector<Cd>& amp, const std::vector<int>& keep_bits, int total_bits,
                               double weight, Mat& rho) {
  std::vector<int> rest;
  {
    std::vector<bool> kept(total_bits, false);
    for (int b : keep_bits) kept[b] = true;
    for (int b = 0; b < total_bits; ++b)
      if (!kept[b]) rest.push_back(b);
  }
  const std::size_t keep_dim = std::size_t(1) << keep_bits.size();
  const std::size_t rest_dim = std::size_t(1) << rest.size();
  std::vector<Cd> bucket(keep_dim);
  for (std::size_t rv = 0; rv < rest_dim; ++rv) {
    std::size_t base = 0;
    for (std::size_t i = 0; i < rest.size(); ++i) base |= ((rv >> i) & 1u) << rest[i];
    for (std::size_t a = 0; a < keep_dim; ++a) {
      std::size_t idx = base;
      for (std::size_t i = 0; i < keep_bits.size(); ++i) idx |= ((a >> i) & 1u) << keep_bits[i];
      bucket[a] = amp[idx];
    }
    for (std::size_t a = 0; a < keep_dim; ++a) {
      if (bucket[a] == Cd(0, 0)) continue;
      for (std::size_t b = 0; b < keep_dim; ++b) rho(a, b) += weight * bucket[a] * std::conj(bucket[b]);
    }
  }
}

}  // namespace denseops

// Build the grid state E(tau): the input block on column 0, every other
// qubit maximally mixed via basis-state branches.
inline DenseState dense_prepare(const InputBlock& block, DenseState::Mixture mixture,
                                std::uint64_t sample_count = 0, std::uint64_t sample_seed = 0) {
  const Gamma& g = block.gamma;
  const int p = g.p();
  const int q = g.q();
  const int mixed_bits = p * (q - 1);
  if (mixture == DenseState::Mixture::Enumerate && mixed_bits > kDenseEnumerationBitLimit)
    throw GuardExceeded("dense enumeration limited to " + std::to_string(kDenseEnumerationBitLimit) +
                        " mixed qubits; use sampling");
  if (mixture == DenseState::Mixture::Sampled && sample_count == 0)
    throw std::invalid_argument("sampled mixture needs a positive sample count");

  // Column-0 payload as weighted pure p-qubit vectors.
  Vec magic = magic_state();
  std::vector<std::pair<double, Vec>> payload;
  for (const auto& [w, psi] : block.input.pure_components()) {
    Vec copy_vec = psi;
    for (int i = 0; i < g.t; ++i) {
      Vec next(copy_vec.size() * 2);
      for (Eigen::Index a = 0; a < 2; ++a)
        for (Eigen::Index z = 0; z < copy_vec.size(); ++z) next(a * copy_vec.size() + z) = magic(a) * copy_vec(z);
      copy_vec = next;
    }
    Vec full = Vec::Ones(1);
    for (int beta = 0; beta < g.b; ++beta) {
      Vec next(full.size() * copy_vec.size());
      for (Eigen::Index hi = 0; hi < copy_vec.size(); ++hi)
        for (Eigen::Index lo = 0; lo < full.size(); ++lo) next(hi * full.size() + lo) = copy_vec(hi) * full(lo);
      full = next;
    }
    payload.emplace_back(w, full);
  }

  // Mixed-qubit bit k lives at grid (x, y) = (k / (q-1), 1 + k % (q-1)).
  auto scatter_assignment = [&](std::uint64_t a) {
    std::size_t bits = 0;
    for (int k = 0; k < mixed_bits; ++k)
      if ((a >> k) & 1u) bits |= std::size_t(1) << ((k / (q - 1)) * q + 1 + k % (q - 1));
    return bits;
  };

  std::vector<std::uint64_t> assignments;
  double assignment_weight;
  if (mixture == DenseState::Mixture::Enumerate) {
    const std::uint64_t count = std::uint64_t(1) << mixed_bits;
    assignments.resize(count);
    for (std::uint64_t a = 0; a < count; ++a) assignments[a] = a;
    assignment_weight = 1.0 / static_cast<double>(count);
  } else {
    Rng rng(sample_seed);
    assignments.resize(sample_count);
    for (auto& a : assignments) a = mixed_bits >= 64 ? rng.next_u64() : rng.next_below(std::uint64_t(1) << mixed_bits);
    assignment_weight = 1.0 / static_cast<double>(sample_count);
  }

  DenseState st;
  st.gamma = g;
  st.mixture = mixture;
  st.sample_count = sample_count;
  st.sample_seed = sample_seed;
  const std::size_t dim = st.dim();
  st.weights.reserve(assignments.size() * payload.size());
  st.branches.reserve(assignments.size() * payload.size());
  for (std::uint64_t a : assignments) {
    const std::size_t mixed = scatter_assignment(a);
    for (const auto& [w, full] : payload) {
      std::vector<Cd> amp(dim, Cd(0, 0));
      for (Eigen::Index z = 0; z < full.size(); ++z) {
        if (full(z) == Cd(0, 0)) continue;
        std::size_t idx = mixed;
        for (int x = 0; x < p; ++x)
          if ((z >> x) & 1) idx |= std::size_t(1) << (x * q);
        amp[idx] = full(z);
      }
      st.weights.push_back(w * assignment_weight);
      st.branches.push_back(std::move(amp));
    }
  }
  return st;
}

// Apply a named gate at one grid site (or a CNOT across two).
inline void apply_gate_dense(DenseState& st, GateKind k, int x, int y) {
  if (x < 0 || x >= st.gamma.p() || y < 0 || y >= st.gamma.q()) throw std::out_of_range("grid index out of range");
  if (k == GateKind::CNOT) throw std::invalid_argument("CNOT needs two sites");
  auto u = denseops::gate_2x2(k);
  for (auto& b : st.branches) denseops::apply_1q(b, st.bit_of(x, y), u);
}

inline void apply_cnot_dense(DenseState& st, int xc, int yc, int xt, int yt) {
  if (xc == xt && yc == yt) throw std::invalid_argument("CNOT sites must differ");
  for (auto& b : st.branches) denseops::apply_cnot(b, st.bit_of(xc, yc), st.bit_of(xt, yt));
}

inline void apply_column_permutation_dense(DenseState& st, const ColumnPermutation& pi) {
  if (pi.size() != st.gamma.q()) throw std::invalid_argument("permutation size mismatch");
  auto chunk_map = denseops::column_chunk_map(st.gamma.q(), pi);
  std::vector<Cd> scratch;
  for (auto& b : st.branches) denseops::permute_columns_branch(b, scratch, st.gamma.p(), st.gamma.q(), chunk_map);
}

// Reduced density matrix over the listed grid sites (<= 12 of them);
// positions[0] becomes the output's qubit 0.
inline Mat reduced_state(const DenseState& st, const std::vector<std::pair<int, int>>& positions) {
  if (positions.size() > 12) throw std::invalid_argument("reduced_state limited to 12 qubits");
  std::vector<int> keep_bits;
  keep_bits.reserve(positions.size());
  for (auto [x, y] : positions) {
    if (x < 0 || x >= st.gamma.p() || y < 0 || y >= st.gamma.q()) throw std::out_of_range("grid index out of range");
    keep_bits.push_back(st.bit_of(x, y));
  }
  const std::size_t keep_dim = std::size_t(1) << keep_bits.size();
  Mat rho = Mat::Zero(keep_dim, keep_dim);
  const int total_bits = st.gamma.p() * st.gamma.q();
  for (std::size_t i = 0; i < st.branches.size(); ++i)
    denseops::accumulate_reduced(st.branches[i], keep_bits, total_bits, st.weights[i], rho);
  return rho;
}

inline double expectation_z_dense(const DenseState& st, int x, int y) {
  const std::size_t mask = std::size_t(1) << st.bit_of(x, y);
  double e = 0.0;
  for (std::size_t i = 0; i < st.branches.size(); ++i) {
    double acc = 0.0;
    for (std::size_t idx = 0; idx < st.branches[i].size(); ++idx) {
      double pr = std::norm(st.branches[i][idx]);
      acc += (idx & mask) ? -pr : pr;
    }
    e += st.weights[i] * acc;
  }
  return e;
}

}  // namespace qhe
