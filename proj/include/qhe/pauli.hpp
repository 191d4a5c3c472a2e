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
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qhe {

// Pauli labels. The numeric values 0..3 are the on-disk encoding as well.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

// The multiplicative group {+1, +i, -1, -i}, stored as the exponent of i
// modulo 4. All phase arithmetic in the scheme is exact; no floating point.
class Phase {
 public:
  constexpr Phase() : k_(0) {}
  constexpr explicit Phase(int i_exponent) : k_(static_cast<std::uint8_t>(((i_exponent % 4) + 4) % 4)) {}

  static constexpr Phase one() { return Phase(0); }
  static constexpr Phase i() { return Phase(1); }
  static constexpr Phase minus_one() { return Phase(2); }
  static constexpr Phase minus_i() { return Phase(3); }

  constexpr int i_exponent() const { return k_; }
  constexpr bool is_real() const { return (k_ & 1) == 0; }

  // +1 or -1; only meaningful for real phases.
  constexpr int sign() const { return k_ == 0 ? +1 : -1; }

  constexpr Phase operator*(Phase o) const { return Phase(k_ + o.k_); }
  Phase& operator*=(Phase o) {
    k_ = static_cast<std::uint8_t>((k_ + o.k_) & 3);
    return *this;
  }
  constexpr Phase pow(int e) const {
    int r = ((k_ * (e % 4)) % 4 + 4) % 4;
    return Phase(r);
  }
  constexpr bool operator==(const Phase& o) const = default;

  std::complex<double> value() const {
    switch (k_) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }

 private:
  std::uint8_t k_;
};

// Single-qubit Clifford conjugators. T is deliberately not a member: it is
// not Clifford and never conjugates Paulis in this scheme (it enters only
// through magic states).
enum class CliffordGate : std::uint8_t { X = 0, Y = 1, Z = 2, H = 3, S = 4 };

inline char clifford_char(CliffordGate g) { return "XYZHS"[static_cast<int>(g)]; }

struct SingleConj {
  Pauli out;
  Phase phase;
};

struct PairConj {
  Pauli out_control;
  Pauli out_target;
  Phase phase;
};

namespace detail {

using Cd = std::complex<double>;
using Mat2 = std::array<Cd, 4>;    // row-major 2x2
using Mat4 = std::array<Cd, 16>;   // row-major 4x4

inline Mat2 pauli_mat2(Pauli p) {
  switch (p) {
    case Pauli::I: return {Cd(1, 0), Cd(0, 0), Cd(0, 0), Cd(1, 0)};
    case Pauli::X: return {Cd(0, 0), Cd(1, 0), Cd(1, 0), Cd(0, 0)};
    case Pauli::Y: return {Cd(0, 0), Cd(0, -1), Cd(0, 1), Cd(0, 0)};
    default:       return {Cd(1, 0), Cd(0, 0), Cd(0, 0), Cd(-1, 0)};
  }
}

inline Mat2 clifford_mat2(CliffordGate g) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (g) {
    case CliffordGate::X: return pauli_mat2(Pauli::X);
    case CliffordGate::Y: return pauli_mat2(Pauli::Y);
    case CliffordGate::Z: return pauli_mat2(Pauli::Z);
    case CliffordGate::H: return {Cd(s, 0), Cd(s, 0), Cd(s, 0), Cd(-s, 0)};
    default:              return {Cd(1, 0), Cd(0, 0), Cd(0, 0), Cd(0, 1)};  // S
  }
}

inline Mat2 mul2(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r[i * 2 + j] += a[i * 2 + k] * b[k * 2 + j];
  return r;
}

inline Mat2 adj2(const Mat2& a) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i * 2 + j] = std::conj(a[j * 2 + i]);
  return r;
}

inline Mat4 kron22(const Mat2& a, const Mat2& b) {
  Mat4 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          r[(i * 2 + k) * 4 + (j * 2 + l)] = a[i * 2 + j] * b[k * 2 + l];
  return r;
}

inline Mat4 mul4(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) r[i * 4 + j] += a[i * 4 + k] * b[k * 4 + j];
  return r;
}

// CNOT with control = first tensor factor, target = second.
inline Mat4 cnot_mat4() {
  Mat4 r{};
  r[0 * 4 + 0] = 1;
  r[1 * 4 + 1] = 1;
  r[2 * 4 + 3] = 1;
  r[3 * 4 + 2] = 1;
  return r;
}

inline bool approx_eq2(const Mat2& a, const Mat2& b) {
  for (int i = 0; i < 4; ++i)
    if (std::abs(a[i] - b[i]) > 1e-9) return false;
  return true;
}

inline SingleConj identify2(const Mat2& m) {
  for (int lbl = 0; lbl < 4; ++lbl) {
    for (int ph = 0; ph < 4; ++ph) {
      Mat2 cand = pauli_mat2(static_cast<Pauli>(lbl));
      Cd f = Phase(ph).value();
      for (auto& c : cand) c *= f;
      if (approx_eq2(cand, m)) return {static_cast<Pauli>(lbl), Phase(ph)};
    }
  }
  throw std::logic_error("matrix is not a phased Pauli");
}

inline PairConj identify4(const Mat4& m) {
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      Mat4 cand = kron22(pauli_mat2(static_cast<Pauli>(a)), pauli_mat2(static_cast<Pauli>(b)));
      for (int ph = 0; ph < 4; ++ph) {
        Cd f = Phase(ph).value();
        bool ok = true;
        for (int i = 0; i < 16 && ok; ++i)
          if (std::abs(cand[i] * f - m[i]) > 1e-9) ok = false;
        if (ok) return {static_cast<Pauli>(a), static_cast<Pauli>(b), Phase(ph)};
      }
    }
  }
  throw std::logic_error("matrix is not a phased two-qubit Pauli");
}

}  // namespace detail

// Conjugation tables are generated once from dense 2x2 / 4x4 arithmetic and
// then frozen; self-verifying tables beat hand-typed ones.
inline const std::array<std::array<SingleConj, 4>, 5>& single_conj_table() {
  static const auto table = [] {
    std::array<std::array<SingleConj, 4>, 5> t{};
    for (int g = 0; g < 5; ++g) {
      detail::Mat2 gm = detail::clifford_mat2(static_cast<CliffordGate>(g));
      for (int p = 0; p < 4; ++p) {
        detail::Mat2 conj =
            detail::mul2(detail::mul2(gm, detail::pauli_mat2(static_cast<Pauli>(p))), detail::adj2(gm));
        t[g][p] = detail::identify2(conj);
      }
    }
    return t;
  }();
  return table;
}

inline const std::array<std::array<PairConj, 4>, 4>& cnot_conj_table() {
  static const auto table = [] {
    std::array<std::array<PairConj, 4>, 4> t{};
    detail::Mat4 cn = detail::cnot_mat4();
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        detail::Mat4 in = detail::kron22(detail::pauli_mat2(static_cast<Pauli>(a)),
                                         detail::pauli_mat2(static_cast<Pauli>(b)));
        detail::Mat4 conj = detail::mul4(detail::mul4(cn, in), cn);  // CNOT is self-adjoint
        t[a][b] = detail::identify4(conj);
      }
    }
    return t;
  }();
  return table;
}

inline const std::array<std::array<std::pair<Pauli, Phase>, 4>, 4>& pauli_mul_table() {
  static const auto table = [] {
    std::array<std::array<std::pair<Pauli, Phase>, 4>, 4> t{};
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        detail::Mat2 prod =
            detail::mul2(detail::pauli_mat2(static_cast<Pauli>(a)), detail::pauli_mat2(static_cast<Pauli>(b)));
        SingleConj id = detail::identify2(prod);
        t[a][b] = {id.out, id.phase};
      }
    }
    return t;
  }();
  return table;
}

// g sigma g^dagger = phase * sigma'. Phases are +1/-1 for these gates.
inline SingleConj conjugate_single(CliffordGate g, Pauli p) {
  return single_conj_table()[static_cast<int>(g)][static_cast<int>(p)];
}

// CNOT (sigma_c ⊗ sigma_t) CNOT = phase * (sigma_c' ⊗ sigma_t').
inline PairConj conjugate_cnot(Pauli control, Pauli target) {
  return cnot_conj_table()[static_cast<int>(control)][static_cast<int>(target)];
}

// sigma_a sigma_b = phase * sigma_c.
inline std::pair<Pauli, Phase> pauli_multiply(Pauli a, Pauli b) {
  return pauli_mul_table()[static_cast<int>(a)][static_cast<int>(b)];
}

// Row-wise transversal conjugation: g^(⊗n) acting on a row whose label is p
// on every code column. The row-level phase is phase^n, which equals the
// single-qubit phase when n ≡ 1 (mod 4).
inline SingleConj conjugate_transversal_row(CliffordGate g, Pauli p, int n) {
  if (n < 1 || n % 4 != 1)
    throw std::invalid_argument("transversal conjugation requires n = 4n'+1, got n=" + std::to_string(n));
  SingleConj c = conjugate_single(g, p);
  return {c.out, c.phase.pow(n)};
}

// 0-based global row of local row x within copy beta, for blocks of r+t rows.
inline int grid_row(int beta, int x, int r, int t) { return beta * (r + t) + x; }

// A permutation of the q grid columns; images[y] is where column y goes.
// Columns are 0-based here and in every serialized format.
struct ColumnPermutation {
  std::vector<int> images;

  static ColumnPermutation identity(int q) {
    ColumnPermutation p;
    p.images.resize(q);
    for (int i = 0; i < q; ++i) p.images[i] = i;
    return p;
  }

  int size() const { return static_cast<int>(images.size()); }
  int operator()(int y) const { return images[y]; }

  bool is_valid() const {
    std::vector<bool> seen(images.size(), false);
    for (int v : images) {
      if (v < 0 || v >= static_cast<int>(images.size()) || seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }

  ColumnPermutation inverse() const {
    ColumnPermutation inv;
    inv.images.resize(images.size());
    for (int y = 0; y < size(); ++y) inv.images[images[y]] = y;
    return inv;
  }

  // (a.then(b))(y) = b(a(y)): apply a first, then b.
  ColumnPermutation then(const ColumnPermutation& b) const {
    ColumnPermutation r;
    r.images.resize(images.size());
    for (int y = 0; y < size(); ++y) r.images[y] = b.images[images[y]];
    return r;
  }

  bool operator==(const ColumnPermutation& o) const = default;
};

// A phased Pauli operator on the full p x q grid.
struct GridPauli {
  int rows = 0;
  int cols = 0;
  std::vector<Pauli> labels;  // row-major
  Phase phase;

  static GridPauli identity(int p, int q) {
    GridPauli g;
    g.rows = p;
    g.cols = q;
    g.labels.assign(static_cast<std::size_t>(p) * q, Pauli::I);
    return g;
  }

  Pauli at(int x, int y) const { return labels[static_cast<std::size_t>(x) * cols + y]; }
  void set(int x, int y, Pauli p) { labels[static_cast<std::size_t>(x) * cols + y] = p; }
};

// Entry at (x, y) moves to (x, pi(y)); the phase is unchanged.
inline GridPauli permute_columns(const GridPauli& a, const ColumnPermutation& pi) {
  if (pi.size() != a.cols) throw std::invalid_argument("permutation size does not match column count");
  GridPauli out = GridPauli::identity(a.rows, a.cols);
  out.phase = a.phase;
  for (int x = 0; x < a.rows; ++x)
    for (int y = 0; y < a.cols; ++y) out.set(x, pi(y), a.at(x, y));
  return out;
}

}  // namespace qhe
