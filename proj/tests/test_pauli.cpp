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

#include <catch2/catch_amalgamated.hpp>

#include "oracle.hpp"
#include "qhe/pauli.hpp"

using qhe::CliffordGate;
using qhe::ColumnPermutation;
using qhe::GridPauli;
using qhe::Pauli;
using qhe::Phase;

namespace {

const std::array<Pauli, 4> kPaulis = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
const std::array<CliffordGate, 5> kGates = {CliffordGate::X, CliffordGate::Y, CliffordGate::Z, CliffordGate::H,
                                            CliffordGate::S};

// Decompose a 2^k x 2^k matrix as phase * (Pauli tensor product), or fail.
bool matches_phased_pauli(const oracle::Mat& m, const std::vector<Pauli>& labels, Phase phase, double tol = 1e-12) {
  oracle::Mat expect = oracle::Mat::Identity(1, 1);
  for (Pauli p : labels) expect = oracle::kron(oracle::pauli(p), expect);
  expect *= phase.value();
  return (m - expect).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

TEST_CASE("phase group is exact and closed", "[pauli]") {
  CHECK(Phase::i() * Phase::i() == Phase::minus_one());
  CHECK(Phase::minus_i() * Phase::i() == Phase::one());
  for (int k = 0; k < 4; ++k) {
    Phase p(k);
    CHECK(p.pow(4) == Phase::one());
    CHECK(std::abs(p.value() - std::polar(1.0, k * std::numbers::pi / 2)) < 1e-15);
  }
  CHECK(Phase::one().sign() == 1);
  CHECK(Phase::minus_one().sign() == -1);
}

TEST_CASE("single-qubit conjugation matches pinned identities", "[pauli]") {
  auto c = qhe::conjugate_single(CliffordGate::H, Pauli::X);
  CHECK(c.out == Pauli::Z);
  CHECK(c.phase == Phase::one());

  c = qhe::conjugate_single(CliffordGate::S, Pauli::Y);
  CHECK(c.out == Pauli::X);
  CHECK(c.phase == Phase::minus_one());

  c = qhe::conjugate_single(CliffordGate::X, Pauli::I);
  CHECK(c.out == Pauli::I);
  CHECK(c.phase == Phase::one());
}

TEST_CASE("single-qubit conjugation matches the dense oracle exhaustively", "[pauli]") {
  for (CliffordGate g : kGates) {
    oracle::Mat gm = oracle::clifford(g);
    for (Pauli p : kPaulis) {
      oracle::Mat conj = gm * oracle::pauli(p) * gm.adjoint();
      auto r = qhe::conjugate_single(g, p);
      INFO("g=" << qhe::clifford_char(g) << " p=" << qhe::pauli_char(p));
      CHECK(matches_phased_pauli(conj, {r.out}, r.phase));
      CHECK(r.phase.is_real());
    }
  }
}

TEST_CASE("self-inverse conjugators square to the identity action", "[pauli]") {
  for (CliffordGate g : {CliffordGate::X, CliffordGate::Y, CliffordGate::Z, CliffordGate::H}) {
    for (Pauli p : kPaulis) {
      auto once = qhe::conjugate_single(g, p);
      auto twice = qhe::conjugate_single(g, once.out);
      CHECK(twice.out == p);
      CHECK(once.phase * twice.phase == Phase::one());
    }
  }
}

TEST_CASE("CNOT conjugation matches pinned identities", "[pauli]") {
  auto r = qhe::conjugate_cnot(Pauli::X, Pauli::I);
  CHECK(r.out_control == Pauli::X);
  CHECK(r.out_target == Pauli::X);
  CHECK(r.phase == Phase::one());

  r = qhe::conjugate_cnot(Pauli::I, Pauli::Z);
  CHECK(r.out_control == Pauli::Z);
  CHECK(r.out_target == Pauli::Z);
  CHECK(r.phase == Phase::one());

  r = qhe::conjugate_cnot(Pauli::I, Pauli::I);
  CHECK(r.out_control == Pauli::I);
  CHECK(r.out_target == Pauli::I);
  CHECK(r.phase == Phase::one());
}

TEST_CASE("CNOT conjugation matches the 4x4 oracle over all 16 pairs", "[pauli]") {
  oracle::Mat cn = oracle::embed_cnot(0, 1, 2);
  for (Pauli a : kPaulis) {
    for (Pauli b : kPaulis) {
      // qubit 0 = control = LSB, so the control factor is the right one.
      oracle::Mat in = oracle::kron(oracle::pauli(b), oracle::pauli(a));
      oracle::Mat conj = cn * in * cn.adjoint();
      auto r = qhe::conjugate_cnot(a, b);
      INFO("control=" << qhe::pauli_char(a) << " target=" << qhe::pauli_char(b));
      CHECK(matches_phased_pauli(conj, {r.out_control, r.out_target}, r.phase));
      CHECK(r.phase.is_real());
    }
  }
}

TEST_CASE("CNOT conjugation preserves commutation relations", "[pauli]") {
  auto commutes = [](Pauli a1, Pauli a2, Pauli b1, Pauli b2) {
    // Two Pauli products commute iff an even number of tensor slots
    // anticommute, i.e. both labels non-identity and distinct.
    int anti = 0;
    if (a1 != Pauli::I && b1 != Pauli::I && a1 != b1) ++anti;
    if (a2 != Pauli::I && b2 != Pauli::I && a2 != b2) ++anti;
    return anti % 2 == 0;
  };
  for (Pauli a1 : kPaulis)
    for (Pauli a2 : kPaulis)
      for (Pauli b1 : kPaulis)
        for (Pauli b2 : kPaulis) {
          auto ra = qhe::conjugate_cnot(a1, a2);
          auto rb = qhe::conjugate_cnot(b1, b2);
          CHECK(commutes(a1, a2, b1, b2) == commutes(ra.out_control, ra.out_target, rb.out_control, rb.out_target));
        }
}

TEST_CASE("transversal row conjugation matches pinned identities", "[pauli]") {
  auto r = qhe::conjugate_transversal_row(CliffordGate::H, Pauli::Y, 5);
  CHECK(r.out == Pauli::Y);
  CHECK(r.phase == Phase::minus_one());

  r = qhe::conjugate_transversal_row(CliffordGate::S, Pauli::X, 5);
  CHECK(r.out == Pauli::Y);
  CHECK(r.phase == Phase::one());

  r = qhe::conjugate_transversal_row(CliffordGate::H, Pauli::I, 9);
  CHECK(r.out == Pauli::I);
  CHECK(r.phase == Phase::one());

  CHECK_THROWS_AS(qhe::conjugate_transversal_row(CliffordGate::H, Pauli::X, 4), std::invalid_argument);
  CHECK_THROWS_AS(qhe::conjugate_transversal_row(CliffordGate::H, Pauli::X, 7), std::invalid_argument);
}

TEST_CASE("transversal row conjugation matches 5-fold Kronecker conjugation", "[pauli]") {
  const int n = 5;
  for (CliffordGate g : kGates) {
    oracle::Mat gn = oracle::Mat::Identity(1, 1);
    for (int k = 0; k < n; ++k) gn = oracle::kron(oracle::clifford(g), gn);
    for (Pauli p : kPaulis) {
      oracle::Mat pn = oracle::Mat::Identity(1, 1);
      for (int k = 0; k < n; ++k) pn = oracle::kron(oracle::pauli(p), pn);
      oracle::Mat conj = gn * pn * gn.adjoint();
      auto r = qhe::conjugate_transversal_row(g, p, n);
      std::vector<Pauli> labels(n, r.out);
      INFO("g=" << qhe::clifford_char(g) << " p=" << qhe::pauli_char(p));
      CHECK(matches_phased_pauli(conj, labels, r.phase));
    }
  }
}

TEST_CASE("pauli multiplication matches the matrix oracle", "[pauli]") {
  auto r = qhe::pauli_multiply(Pauli::X, Pauli::Z);
  CHECK(r.first == Pauli::Y);
  CHECK(r.second == Phase::minus_i());

  r = qhe::pauli_multiply(Pauli::X, Pauli::X);
  CHECK(r.first == Pauli::I);
  CHECK(r.second == Phase::one());

  r = qhe::pauli_multiply(Pauli::I, Pauli::Z);
  CHECK(r.first == Pauli::Z);
  CHECK(r.second == Phase::one());

  for (Pauli a : kPaulis)
    for (Pauli b : kPaulis) {
      oracle::Mat prod = oracle::pauli(a) * oracle::pauli(b);
      auto pr = qhe::pauli_multiply(a, b);
      CHECK(matches_phased_pauli(prod, {pr.first}, pr.second));
      if (a != b && a != Pauli::I && b != Pauli::I) {
        auto rev = qhe::pauli_multiply(b, a);
        CHECK(pr.second * rev.second.pow(-1) == Phase::minus_one());
      }
    }
}

TEST_CASE("grid row addressing", "[pauli]") {
  // row(beta, x) = beta(r+t) + x, 0-based; bijective over the grid.
  const int b = 3, r = 2, t = 1;
  std::vector<bool> seen(b * (r + t), false);
  for (int beta = 0; beta < b; ++beta)
    for (int x = 0; x < r + t; ++x) {
      int row = qhe::grid_row(beta, x, r, t);
      REQUIRE(row >= 0);
      REQUIRE(row < b * (r + t));
      CHECK(!seen[row]);
      seen[row] = true;
    }
  CHECK(qhe::grid_row(1, 2, 2, 1) == 5);
}

TEST_CASE("column permutation acts on grids and composes", "[pauli]") {
  GridPauli a = GridPauli::identity(1, 2);
  a.set(0, 0, Pauli::X);

  SECTION("identity acts trivially") {
    auto out = qhe::permute_columns(a, ColumnPermutation::identity(2));
    CHECK(out.labels == a.labels);
    CHECK(out.phase == a.phase);
  }

  SECTION("swap moves the label") {
    ColumnPermutation swap{{1, 0}};
    auto out = qhe::permute_columns(a, swap);
    CHECK(out.at(0, 0) == Pauli::I);
    CHECK(out.at(0, 1) == Pauli::X);
  }

  SECTION("dimension mismatch is rejected") {
    CHECK_THROWS_AS(qhe::permute_columns(a, ColumnPermutation::identity(3)), std::invalid_argument);
  }

  SECTION("composition law holds exhaustively for q = 4") {
    const int q = 4;
    std::vector<int> base{0, 1, 2, 3};
    std::vector<ColumnPermutation> all;
    std::vector<int> perm = base;
    do {
      all.push_back(ColumnPermutation{perm});
    } while (std::next_permutation(perm.begin(), perm.end()));
    REQUIRE(all.size() == 24);

    GridPauli grid = GridPauli::identity(2, q);
    grid.set(0, 0, Pauli::X);
    grid.set(0, 2, Pauli::Y);
    grid.set(1, 1, Pauli::Z);
    for (const auto& pi : all) {
      REQUIRE(pi.is_valid());
      CHECK(pi.then(pi.inverse()) == ColumnPermutation::identity(q));
      for (const auto& rho : all) {
        auto two_steps = qhe::permute_columns(qhe::permute_columns(grid, pi), rho);
        auto composed = qhe::permute_columns(grid, pi.then(rho));
        CHECK(two_steps.labels == composed.labels);
      }
    }
  }
}
