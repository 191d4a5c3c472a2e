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

#include <cstdint>
#include <map>
#include <vector>

#include "qhe/density.hpp"
#include "qhe/gamma.hpp"
#include "qhe/pauli.hpp"
#include "qhe/plain_state.hpp"

namespace qhe {

// Structured engine: the encrypted state is a real combination of Pauli
// terms sigma_A with A carrying one label per row, replicated over the
// (secret) code-column set and identity elsewhere:
//
//   rho = sum_v  c_v / 2^(p q)  *  sigma_{A_v},   c_0 = 1.
//
// Keys pack the p row labels at 2 bits per row (row 0 in bits 0..1).
// Coefficients stay real: every phase this scheme produces is +-1.
struct PauliPropState {
  Gamma gamma;
  std::uint64_t code_mask = 0;              // bit y set: column y holds code
  std::map<std::uint64_t, double> terms;    // packed labels -> c_v

  static Pauli label_at(std::uint64_t key, int row) { return static_cast<Pauli>((key >> (2 * row)) & 3u); }
  static std::uint64_t with_label(std::uint64_t key, int row, Pauli p) {
    return (key & ~(std::uint64_t(3) << (2 * row))) | (std::uint64_t(static_cast<int>(p)) << (2 * row));
  }
  std::vector<int> code_columns() const {
    std::vector<int> cols;
    for (int y = 0; y < gamma.q(); ++y)
      if ((code_mask >> y) & 1u) cols.push_back(y);
    return cols;
  }
};

// Real Pauli coefficients a_u = tr(rho sigma_u) of a k-qubit density matrix,
// indexed by packed labels; a_0 = 1 for unit trace.
inline std::vector<double> pauli_coefficients(const Mat& rho, int k) {
  const std::size_t dim = std::size_t(1) << k;
  if (rho.rows() != static_cast<Eigen::Index>(dim)) throw std::invalid_argument("dimension mismatch");
  const std::size_t num = std::size_t(1) << (2 * k);
  std::vector<double> coeffs(num);
  for (std::size_t key = 0; key < num; ++key) {
    // tr(rho sigma) = sum_i rho(i, j) sigma(j, i) with j = i ^ flip_mask.
    std::size_t flip = 0;
    for (int b = 0; b < k; ++b) {
      Pauli p = static_cast<Pauli>((key >> (2 * b)) & 3u);
      if (p == Pauli::X || p == Pauli::Y) flip |= std::size_t(1) << b;
    }
    Cd acc(0, 0);
    for (std::size_t i = 0; i < dim; ++i) {
      std::size_t j = i ^ flip;
      Cd factor(1, 0);
      for (int b = 0; b < k; ++b) {
        Pauli p = static_cast<Pauli>((key >> (2 * b)) & 3u);
        bool ibit = (i >> b) & 1u;
        switch (p) {
          case Pauli::I: break;
          case Pauli::X: break;
          case Pauli::Y: factor *= ibit ? Cd(0, 1) : Cd(0, -1); break;  // sigma(j,i) entries
          case Pauli::Z: factor *= ibit ? -1.0 : 1.0; break;
        }
      }
      acc += rho(j, i) * factor;
    }
    coeffs[key] = acc.real();
  }
  return coeffs;
}

// Build the encrypted-frame state for an input block under code columns
// kappa([n]). Coefficients are those of the column-0 payload; encoding and
// permutation only shape where the labels sit.
inline PauliPropState pauli_prepare(const InputBlock& block, const ColumnPermutation& kappa) {
  const Gamma& g = block.gamma;
  if (g.p() > 31) throw std::invalid_argument("pauli backend limited to 31 rows");
  if (kappa.size() != g.q()) throw std::invalid_argument("permutation size mismatch");

  // Joint coefficients of one copy: data block (jointly, inputs may be
  // entangled across rows) times per-magic-qubit factors.
  std::vector<double> data_coeffs = pauli_coefficients(block.input.as_density(), g.r);
  Vec magic = magic_state();
  Mat magic_rho = magic * magic.adjoint();
  std::vector<double> magic_coeffs = pauli_coefficients(magic_rho, 1);

  struct CopyTerm {
    std::uint64_t labels;
    double coeff;
  };
  std::vector<CopyTerm> copy_terms;
  for (std::size_t dk = 0; dk < data_coeffs.size(); ++dk) {
    if (std::abs(data_coeffs[dk]) < 1e-15) continue;
    std::vector<CopyTerm> partial{{dk, data_coeffs[dk]}};
    for (int i = 0; i < g.t; ++i) {
      std::vector<CopyTerm> next;
      for (const auto& ct : partial)
        for (int lbl = 0; lbl < 4; ++lbl) {
          double c = ct.coeff * magic_coeffs[lbl];
          if (std::abs(c) < 1e-15) continue;
          next.push_back({ct.labels | (std::uint64_t(lbl) << (2 * (g.r + i))), c});
        }
      partial = std::move(next);
    }
    copy_terms.insert(copy_terms.end(), partial.begin(), partial.end());
  }

  PauliPropState st;
  st.gamma = g;
  for (int y = 0; y < g.n; ++y) st.code_mask |= std::uint64_t(1) << kappa(y);

  std::vector<CopyTerm> full{{0, 1.0}};
  for (int beta = 0; beta < g.b; ++beta) {
    std::vector<CopyTerm> next;
    next.reserve(full.size() * copy_terms.size());
    for (const auto& acc : full)
      for (const auto& ct : copy_terms)
        next.push_back({acc.labels | (ct.labels << (2 * beta * (g.r + g.t))), acc.coeff * ct.coeff});
    full = std::move(next);
  }
  for (const auto& term : full) st.terms[term.labels] = term.coeff;
  return st;
}

// Transversal single-qubit Clifford on one global row: relabel each term at
// that row, scale by the (+-1) row phase. The code-column set is unchanged.
inline void apply_transversal_clifford(PauliPropState& st, CliffordGate g, int global_row) {
  if (global_row < 0 || global_row >= st.gamma.p()) throw std::out_of_range("row out of range");
  std::map<std::uint64_t, double> next;
  for (const auto& [key, coeff] : st.terms) {
    SingleConj c = conjugate_transversal_row(g, PauliPropState::label_at(key, global_row), st.gamma.n);
    next[PauliPropState::with_label(key, global_row, c.out)] = coeff * c.phase.sign();
  }
  st.terms = std::move(next);
}

// Transversal CNOT between two global rows; the pair relabeling applies once
// at the logical level (phases are +-1, and (+-1)^n = +-1 for odd n).
inline void apply_transversal_cnot(PauliPropState& st, int row_control, int row_target) {
  if (row_control == row_target) throw std::invalid_argument("CNOT rows must differ");
  if (row_control < 0 || row_control >= st.gamma.p() || row_target < 0 || row_target >= st.gamma.p())
    throw std::out_of_range("row out of range");
  std::map<std::uint64_t, double> next;
  for (const auto& [key, coeff] : st.terms) {
    PairConj c = conjugate_cnot(PauliPropState::label_at(key, row_control),
                                PauliPropState::label_at(key, row_target));
    std::uint64_t nk = PauliPropState::with_label(key, row_control, c.out_control);
    nk = PauliPropState::with_label(nk, row_target, c.out_target);
    next[nk] = coeff * c.phase.sign();
  }
  st.terms = std::move(next);
}

// Reduced density matrix over listed grid sites. A term contributes only if
// its support (every code column of every non-identity row) lies inside the
// requested set.
inline Mat reduced_state(const PauliPropState& st, const std::vector<std::pair<int, int>>& positions) {
  if (positions.size() > 12) throw std::invalid_argument("reduced_state limited to 12 qubits");
  const int q = st.gamma.q();
  std::vector<std::uint64_t> row_cover(st.gamma.p(), 0);  // columns of each row inside the request
  for (auto [x, y] : positions) {
    if (x < 0 || x >= st.gamma.p() || y < 0 || y >= q) throw std::out_of_range("grid index out of range");
    row_cover[x] |= std::uint64_t(1) << y;
  }
  const std::size_t dim = std::size_t(1) << positions.size();
  Mat rho = Mat::Zero(dim, dim);
  for (const auto& [key, coeff] : st.terms) {
    bool supported = true;
    for (int x = 0; x < st.gamma.p() && supported; ++x)
      if (PauliPropState::label_at(key, x) != Pauli::I && (row_cover[x] & st.code_mask) != st.code_mask)
        supported = false;
    if (!supported) continue;
    std::vector<Mat> factors;
    factors.reserve(positions.size());
    for (auto [x, y] : positions) {
      bool in_code = (st.code_mask >> y) & 1u;
      factors.push_back(pauli_matrix(in_code ? PauliPropState::label_at(key, x) : Pauli::I));
    }
    rho += (coeff / static_cast<double>(dim)) * kron_qubits(factors);
  }
  return rho;
}

// ---- decoded (logical-frame) representation ----------------------------
//
// Decryption conjugates through P_kappa^dagger and U^dagger. With the
// matching key every term collapses to column 0; with any other key the
// ladder produces general per-column labels, so the decoded form keys terms
// by the full label matrix (p*q bytes, row-major).
struct LogicalPauliMap {
  int p = 0;
  int q = 0;
  std::map<std::vector<std::uint8_t>, double> terms;  // label matrix -> coefficient

  static Pauli label(const std::vector<std::uint8_t>& key, int x, int y, int q) {
    return static_cast<Pauli>(key[static_cast<std::size_t>(x) * q + y]);
  }
};

namespace pauliops {

// Conjugate one row's labels (columns 0..n-1) through the decoder
// U_x^dagger ... U_x: fan-out group first, then the collect group.
inline int decode_row_labels(std::vector<std::uint8_t>& row, int n) {
  int sign = 1;
  auto cnot = [&](int c, int t) {
    PairConj r = conjugate_cnot(static_cast<Pauli>(row[c]), static_cast<Pauli>(row[t]));
    row[c] = static_cast<std::uint8_t>(r.out_control);
    row[t] = static_cast<std::uint8_t>(r.out_target);
    sign *= r.phase.sign();
  };
  for (int y = 1; y < n; ++y) cnot(0, y);  // fan-out CNOT(0 -> y)
  for (int y = 1; y < n; ++y) cnot(y, 0);  // collect CNOT(y -> 0)
  return sign;
}

}  // namespace pauliops

// tau' = U^dagger P_kappa^dagger nu P_kappa U in the coefficient picture.
inline LogicalPauliMap decode(const PauliPropState& st, const ColumnPermutation& kappa) {
  if (kappa.size() != st.gamma.q()) throw std::invalid_argument("permutation size mismatch");
  const int p = st.gamma.p();
  const int q = st.gamma.q();
  const int n = st.gamma.n;
  ColumnPermutation inv = kappa.inverse();
  std::vector<int> code_cols = st.code_columns();

  LogicalPauliMap out;
  out.p = p;
  out.q = q;
  for (const auto& [key, coeff] : st.terms) {
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(p) * q, 0);
    for (int x = 0; x < p; ++x) {
      Pauli v = PauliPropState::label_at(key, x);
      if (v == Pauli::I) continue;
      for (int y : code_cols) labels[static_cast<std::size_t>(x) * q + inv(y)] = static_cast<std::uint8_t>(v);
    }
    int sign = 1;
    for (int x = 0; x < p; ++x) {
      std::vector<std::uint8_t> row(labels.begin() + static_cast<std::size_t>(x) * q,
                                    labels.begin() + static_cast<std::size_t>(x) * q + n);
      sign *= pauliops::decode_row_labels(row, n);
      std::copy(row.begin(), row.end(), labels.begin() + static_cast<std::size_t>(x) * q);
    }
    out.terms[labels] += sign * coeff;
  }
  return out;
}

namespace pauliops {

// Unnormalized Z-basis projection at grid site (row, col): Pi rho Pi.
// X/Y terms at the site vanish; I and Z mix pairwise with weight 1/2.
// The all-identity coefficient of the result is the branch probability.
inline LogicalPauliMap project_z(const LogicalPauliMap& map, int row, int col, bool outcome_plus) {
  const int s = outcome_plus ? +1 : -1;
  LogicalPauliMap out;
  out.p = map.p;
  out.q = map.q;
  for (const auto& [key, coeff] : map.terms) {
    Pauli l = LogicalPauliMap::label(key, row, col, map.q);
    if (l == Pauli::X || l == Pauli::Y) continue;
    std::vector<std::uint8_t> flipped = key;
    flipped[static_cast<std::size_t>(row) * map.q + col] =
        static_cast<std::uint8_t>(l == Pauli::I ? Pauli::Z : Pauli::I);
    out.terms[key] += 0.5 * coeff;
    out.terms[flipped] += 0.5 * s * coeff;
  }
  // Drop numerically dead terms so maps stay small across a cascade.
  for (auto it = out.terms.begin(); it != out.terms.end();)
    it = std::abs(it->second) < 1e-300 ? out.terms.erase(it) : std::next(it);
  return out;
}

inline double trace_coefficient(const LogicalPauliMap& map) {
  auto it = map.terms.find(std::vector<std::uint8_t>(static_cast<std::size_t>(map.p) * map.q, 0));
  return it == map.terms.end() ? 0.0 : it->second;
}

// Reduced density matrix over listed sites, scaled by the map's trace
// coefficient (pass a normalized map for a unit-trace result).
inline Mat reduced_from_map(const LogicalPauliMap& map, const std::vector<std::pair<int, int>>& positions) {
  const std::size_t dim = std::size_t(1) << positions.size();
  std::vector<bool> inside(static_cast<std::size_t>(map.p) * map.q, false);
  for (auto [x, y] : positions) inside[static_cast<std::size_t>(x) * map.q + y] = true;
  Mat rho = Mat::Zero(dim, dim);
  for (const auto& [key, coeff] : map.terms) {
    bool supported = true;
    for (std::size_t i = 0; i < key.size() && supported; ++i)
      if (key[i] != 0 && !inside[i]) supported = false;
    if (!supported) continue;
    std::vector<Mat> factors;
    factors.reserve(positions.size());
    for (auto [x, y] : positions) factors.push_back(pauli_matrix(LogicalPauliMap::label(key, x, y, map.q)));
    rho += (coeff / static_cast<double>(dim)) * kron_qubits(factors);
  }
  return rho;
}

}  // namespace pauliops

struct LogicalMeasureResult {
  double prob_plus = 0.0;
  LogicalPauliMap post_plus;   // renormalized; empty if prob_plus == 0
  LogicalPauliMap post_minus;  // renormalized; empty if prob_plus == 1
};

// Z measurement at (row, column 0) of a decoded map with unit trace
// coefficient. prob_plus = (1 + c_Z(row)) / 2.
inline LogicalMeasureResult measure_z_logical(const LogicalPauliMap& map, int row) {
  if (row < 0 || row >= map.p) throw std::out_of_range("row out of range");
  LogicalMeasureResult res;
  LogicalPauliMap plus = pauliops::project_z(map, row, 0, true);
  LogicalPauliMap minus = pauliops::project_z(map, row, 0, false);
  res.prob_plus = pauliops::trace_coefficient(plus);
  double prob_minus = pauliops::trace_coefficient(minus);
  if (res.prob_plus > 0) {
    for (auto& [k, c] : plus.terms) c /= res.prob_plus;
    res.post_plus = std::move(plus);
  }
  if (prob_minus > 0) {
    for (auto& [k, c] : minus.terms) c /= prob_minus;
    res.post_minus = std::move(minus);
  }
  return res;
}

}  // namespace qhe
