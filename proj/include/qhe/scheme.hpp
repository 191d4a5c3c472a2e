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

#include <functional>
#include <optional>
#include <variant>

#include "qhe/circuit.hpp"
#include "qhe/dense_backend.hpp"
#include "qhe/pauli_backend.hpp"
#include "qhe/plain_state.hpp"

namespace qhe {

enum class Backend : std::uint8_t { DenseOracle = 0, PauliProp = 1 };

inline const char* backend_name(Backend b) { return b == Backend::DenseOracle ? "oracle" : "pauli"; }

// The symmetric key: a uniformly random permutation of the q columns.
struct SecretKey {
  ColumnPermutation kappa;
  std::optional<std::uint64_t> seed;  // recorded for reproducibility
};

inline SecretKey keygen(const Gamma& gamma, Rng& rng) {
  gamma.validate();
  return SecretKey{ColumnPermutation{rng.random_permutation(gamma.q())}, std::nullopt};
}

inline SecretKey keygen(const Gamma& gamma, std::uint64_t seed) {
  Rng rng(seed);
  SecretKey key = keygen(gamma, rng);
  key.seed = seed;
  return key;
}

using CipherState = std::variant<DenseState, PauliPropState>;

inline Backend backend_of(const CipherState& ct) {
  return std::holds_alternative<DenseState>(ct) ? Backend::DenseOracle : Backend::PauliProp;
}

inline const Gamma& gamma_of(const CipherState& ct) {
  return std::visit([](const auto& st) -> const Gamma& { return st.gamma; }, ct);
}

struct DenseOptions {
  DenseState::Mixture mixture = DenseState::Mixture::Enumerate;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

namespace schemeops {

// Encoder ladder on one row of a dense branch: collect CNOTs (y -> 0), then
// fan-out CNOTs (0 -> y). Both groups commute internally, so the printed
// orderings coincide; ascending order is fixed here for reproducibility.
inline void apply_ux(std::vector<Cd>& amp, int row, int n, int q) {
  for (int y = 1; y < n; ++y) denseops::apply_cnot(amp, row * q + y, row * q + 0);
  for (int y = 1; y < n; ++y) denseops::apply_cnot(amp, row * q + 0, row * q + y);
}

// U_x^dagger: the same two self-inverse groups in the opposite order.
inline void apply_ux_dagger(std::vector<Cd>& amp, int row, int n, int q) {
  for (int y = 1; y < n; ++y) denseops::apply_cnot(amp, row * q + 0, row * q + y);
  for (int y = 1; y < n; ++y) denseops::apply_cnot(amp, row * q + y, row * q + 0);
}

// A circuit expanded to grid-level primitive operations (row-major bits).
struct GridOp {
  bool is_cnot = false;
  int bit_a = 0;  // 1q: target bit; cnot: control bit
  int bit_b = 0;
  std::array<Cd, 4> u{};
};

inline std::vector<GridOp> expand_circuit(const Circuit& c, const Gamma& g) {
  std::vector<GridOp> ops;
  const int q = g.q();
  auto one_qubit = [&](GateKind k, int z) {
    auto u = denseops::gate_2x2(k);
    for (int beta = 0; beta < g.b; ++beta)
      for (int y = 0; y < q; ++y) ops.push_back({false, grid_row(beta, z, g.r, g.t) * q + y, 0, u});
  };
  auto transversal_cnot = [&](int zc, int zt) {
    for (int beta = 0; beta < g.b; ++beta)
      for (int y = 0; y < q; ++y)
        ops.push_back({true, grid_row(beta, zc, g.r, g.t) * q + y, grid_row(beta, zt, g.r, g.t) * q + y, {}});
  };
  int alpha = 0;
  for (const auto& gate : c.gates) {
    switch (gate.kind) {
      case GateKind::CNOT:
        transversal_cnot(gate.qubit, gate.target);
        break;
      case GateKind::T:
        transversal_cnot(gate.qubit, g.r + alpha);
        transversal_cnot(g.r + alpha, gate.qubit);
        ++alpha;
        break;
      default:
        one_qubit(gate.kind, gate.qubit);
        break;
    }
  }
  return ops;
}

inline CliffordGate clifford_of(GateKind k) {
  switch (k) {
    case GateKind::X: return CliffordGate::X;
    case GateKind::Y: return CliffordGate::Y;
    case GateKind::Z: return CliffordGate::Z;
    case GateKind::H: return CliffordGate::H;
    case GateKind::S: return CliffordGate::S;
    default: throw std::invalid_argument("not a single-qubit Clifford gate");
  }
}

}  // namespace schemeops

// Enc: extend with maximally mixed columns, encode each row with U_x over
// the first n columns, then permute columns by the key.
inline CipherState encrypt(const SecretKey& key, const InputBlock& block, Backend backend,
                           const DenseOptions& options = {}) {
  const Gamma& g = block.gamma;
  g.validate();
  if (key.kappa.size() != g.q()) throw std::invalid_argument("key length does not match n+m");
  if (!key.kappa.is_valid()) throw std::invalid_argument("key is not a permutation");

  if (backend == Backend::PauliProp) return pauli_prepare(block, key.kappa);

  DenseState st = dense_prepare(block, options.mixture, options.samples, options.seed);
  const int p = g.p();
  const int q = g.q();
  auto chunk_map = denseops::column_chunk_map(q, key.kappa);
  std::vector<Cd> scratch;
  for (auto& branch : st.branches) {
    for (int x = 0; x < p; ++x) schemeops::apply_ux(branch, x, g.n, q);
    denseops::permute_columns_branch(branch, scratch, p, q, chunk_map);
  }
  return st;
}

// Eval: transversal gates over every column and copy; the alpha-th T gate
// becomes CNOT(z -> r+alpha) then CNOT(r+alpha -> z), measurement deferred
// to decryption. Never sees the key.
inline CipherState evaluate(const Circuit& c, CipherState ct) {
  const Gamma g = gamma_of(ct);
  if (auto violations = validate_for_gamma(c, g); !violations.empty())
    throw std::invalid_argument("circuit does not match parameters: " + violations.front());

  if (auto* dense = std::get_if<DenseState>(&ct)) {
    auto ops = schemeops::expand_circuit(c, g);
    for (auto& branch : dense->branches) {
      for (const auto& op : ops) {
        if (op.is_cnot)
          denseops::apply_cnot(branch, op.bit_a, op.bit_b);
        else
          denseops::apply_1q(branch, op.bit_a, op.u);
      }
    }
    return ct;
  }

  auto& pp = std::get<PauliPropState>(ct);
  int alpha = 0;
  for (const auto& gate : c.gates) {
    switch (gate.kind) {
      case GateKind::CNOT:
        for (int beta = 0; beta < g.b; ++beta)
          apply_transversal_cnot(pp, grid_row(beta, gate.qubit, g.r, g.t), grid_row(beta, gate.target, g.r, g.t));
        break;
      case GateKind::T:
        for (int beta = 0; beta < g.b; ++beta)
          apply_transversal_cnot(pp, grid_row(beta, gate.qubit, g.r, g.t), grid_row(beta, g.r + alpha, g.r, g.t));
        for (int beta = 0; beta < g.b; ++beta)
          apply_transversal_cnot(pp, grid_row(beta, g.r + alpha, g.r, g.t), grid_row(beta, gate.qubit, g.r, g.t));
        ++alpha;
        break;
      default:
        for (int beta = 0; beta < g.b; ++beta)
          apply_transversal_clifford(pp, schemeops::clifford_of(gate.kind), grid_row(beta, gate.qubit, g.r, g.t));
        break;
    }
  }
  return ct;
}

// Exact decryption: both outcome branches of every deferred measurement are
// enumerated with exact probabilities.
//   prob_success  — P(f = 1)
//   rho_out       — r-qubit output conditioned on f = 1
//   rho_fail      — copy-0 data rows conditioned on f = 0; no guarantees
//                   attach to it (callers must treat it as garbage)
struct DecryptResult {
  double prob_success = 0.0;
  Mat rho_out;
  Mat rho_fail;
  int f = 0;  // 1 iff success is possible (prob_success > 0)
};

// One sampled shot: concrete outcomes c_beta, heralding flag, selected copy.
struct DecryptOutcome {
  int f = 0;
  std::vector<int> failure_counts;
  int selected_copy = -1;
  Mat rho_out;
};

namespace schemeops {

struct LeafSelection {
  bool success;
  int copy;  // selected alpha if success, else 0 (first copy's rows returned)
};

// outcomes[beta*t + i] records the measurement at magic row i of copy beta;
// true = +1 eigenvalue. c_beta counts the -1 outcomes; the smallest copy
// with c_beta = 0 wins.
inline LeafSelection select_copy(const std::vector<bool>& outcomes, int b, int t) {
  for (int beta = 0; beta < b; ++beta) {
    int failures = 0;
    for (int i = 0; i < t; ++i) failures += outcomes[beta * t + i] ? 0 : 1;
    if (failures == 0) return {true, beta};
  }
  return {false, 0};
}

inline std::vector<int> failure_counts_of(const std::vector<bool>& outcomes, int b, int t) {
  std::vector<int> c(b, 0);
  for (int beta = 0; beta < b; ++beta)
    for (int i = 0; i < t; ++i) c[beta] += outcomes[beta * t + i] ? 0 : 1;
  return c;
}

}  // namespace schemeops

inline DecryptResult decrypt(const SecretKey& key, const CipherState& ct) {
  const Gamma g = gamma_of(ct);
  if (key.kappa.size() != g.q()) throw std::invalid_argument("key length does not match ciphertext parameters");
  const int p = g.p();
  const int q = g.q();
  const Eigen::Index out_dim = Eigen::Index(1) << g.r;

  DecryptResult res;
  res.rho_out = Mat::Zero(out_dim, out_dim);
  res.rho_fail = Mat::Zero(out_dim, out_dim);
  double fail_mass = 0.0;

  auto data_bits_of_copy = [&](int beta) {
    std::vector<int> bits(g.r);
    for (int z = 0; z < g.r; ++z) bits[z] = grid_row(beta, z, g.r, g.t) * q + 0;
    return bits;
  };

  if (const auto* dense = std::get_if<DenseState>(&ct)) {
    auto inv_chunk_map = denseops::column_chunk_map(q, key.kappa.inverse());
    std::vector<int> magic_bits;
    for (int beta = 0; beta < g.b; ++beta)
      for (int i = 0; i < g.t; ++i) magic_bits.push_back(grid_row(beta, g.r + i, g.r, g.t) * q + 0);

    std::vector<Cd> scratch;
    std::vector<bool> outcomes;
    const int total_bits = p * q;

    std::function<void(std::vector<Cd>&, std::size_t, double)> enumerate =
        [&](std::vector<Cd>& vec, std::size_t idx, double weight) {
          if (idx == magic_bits.size()) {
            auto sel = schemeops::select_copy(outcomes, g.b, g.t);
            double mass = weight * denseops::squared_norm(vec);
            if (sel.success) {
              res.prob_success += mass;
              denseops::accumulate_reduced(vec, data_bits_of_copy(sel.copy), total_bits, weight, res.rho_out);
            } else {
              fail_mass += mass;
              denseops::accumulate_reduced(vec, data_bits_of_copy(0), total_bits, weight, res.rho_fail);
            }
            return;
          }
          for (bool plus : {true, false}) {
            std::vector<Cd> child = vec;
            double kept = denseops::project_z(child, magic_bits[idx], plus);
            if (kept <= 1e-30) continue;
            outcomes.push_back(plus);
            enumerate(child, idx + 1, weight);
            outcomes.pop_back();
          }
        };

    for (std::size_t i = 0; i < dense->branches.size(); ++i) {
      std::vector<Cd> vec = dense->branches[i];
      denseops::permute_columns_branch(vec, scratch, p, q, inv_chunk_map);
      for (int x = 0; x < p; ++x) schemeops::apply_ux_dagger(vec, x, g.n, q);
      enumerate(vec, 0, dense->weights[i]);
    }
  } else {
    const auto& pp = std::get<PauliPropState>(ct);
    LogicalPauliMap decoded = decode(pp, key.kappa);
    std::vector<int> magic_rows;
    for (int beta = 0; beta < g.b; ++beta)
      for (int i = 0; i < g.t; ++i) magic_rows.push_back(grid_row(beta, g.r + i, g.r, g.t));

    auto data_positions_of_copy = [&](int beta) {
      std::vector<std::pair<int, int>> pos(g.r);
      for (int z = 0; z < g.r; ++z) pos[z] = {grid_row(beta, z, g.r, g.t), 0};
      return pos;
    };

    std::vector<bool> outcomes;
    std::function<void(const LogicalPauliMap&, std::size_t)> enumerate = [&](const LogicalPauliMap& map,
                                                                             std::size_t idx) {
      if (idx == magic_rows.size()) {
        double mass = pauliops::trace_coefficient(map);
        if (mass <= 1e-18) return;
        auto sel = schemeops::select_copy(outcomes, g.b, g.t);
        if (sel.success) {
          res.prob_success += mass;
          res.rho_out += pauliops::reduced_from_map(map, data_positions_of_copy(sel.copy));
        } else {
          fail_mass += mass;
          res.rho_fail += pauliops::reduced_from_map(map, data_positions_of_copy(0));
        }
        return;
      }
      for (bool plus : {true, false}) {
        LogicalPauliMap child = pauliops::project_z(map, magic_rows[idx], 0, plus);
        if (pauliops::trace_coefficient(child) <= 1e-18) continue;
        outcomes.push_back(plus);
        enumerate(child, idx + 1);
        outcomes.pop_back();
      }
    };
    enumerate(decoded, 0);
  }

  if (res.prob_success > 0) res.rho_out /= res.prob_success;
  if (fail_mass > 0) res.rho_fail /= fail_mass;
  res.f = res.prob_success > 0 ? 1 : 0;
  return res;
}

// Seeded single-shot decryption (Monte Carlo mode).
inline DecryptOutcome decrypt_sampled(const SecretKey& key, const CipherState& ct, Rng& rng) {
  const Gamma g = gamma_of(ct);
  if (key.kappa.size() != g.q()) throw std::invalid_argument("key length does not match ciphertext parameters");
  const int p = g.p();
  const int q = g.q();

  DecryptOutcome out;
  std::vector<bool> outcomes;

  if (const auto* dense = std::get_if<DenseState>(&ct)) {
    double total = 0.0;
    for (double w : dense->weights) total += w;
    double pick = rng.next_double() * total;
    std::size_t chosen = dense->branches.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < dense->branches.size(); ++i) {
      acc += dense->weights[i];
      if (pick < acc) {
        chosen = i;
        break;
      }
    }

    std::vector<Cd> vec = dense->branches[chosen];
    std::vector<Cd> scratch;
    auto inv_chunk_map = denseops::column_chunk_map(q, key.kappa.inverse());
    denseops::permute_columns_branch(vec, scratch, p, q, inv_chunk_map);
    for (int x = 0; x < p; ++x) schemeops::apply_ux_dagger(vec, x, g.n, q);

    double norm = denseops::squared_norm(vec);
    for (int beta = 0; beta < g.b; ++beta)
      for (int i = 0; i < g.t; ++i) {
        int bit = grid_row(beta, g.r + i, g.r, g.t) * q + 0;
        std::vector<Cd> plus = vec;
        double kept = denseops::project_z(plus, bit, true);
        bool is_plus = rng.next_double() * norm < kept;
        if (is_plus) {
          vec = std::move(plus);
          norm = kept;
        } else {
          norm = denseops::project_z(vec, bit, false);
        }
        outcomes.push_back(is_plus);
      }

    auto sel = schemeops::select_copy(outcomes, g.b, g.t);
    out.f = sel.success ? 1 : 0;
    out.failure_counts = schemeops::failure_counts_of(outcomes, g.b, g.t);
    out.selected_copy = sel.success ? sel.copy : -1;
    std::vector<int> keep_bits;
    for (int z = 0; z < g.r; ++z) keep_bits.push_back(grid_row(sel.success ? sel.copy : 0, z, g.r, g.t) * q + 0);
    Mat rho = Mat::Zero(Eigen::Index(1) << g.r, Eigen::Index(1) << g.r);
    denseops::accumulate_reduced(vec, keep_bits, p * q, 1.0 / norm, rho);
    out.rho_out = rho;
    return out;
  }

  const auto& pp = std::get<PauliPropState>(ct);
  LogicalPauliMap map = decode(pp, key.kappa);
  for (int beta = 0; beta < g.b; ++beta)
    for (int i = 0; i < g.t; ++i) {
      int row = grid_row(beta, g.r + i, g.r, g.t);
      LogicalPauliMap plus = pauliops::project_z(map, row, 0, true);
      double total = pauliops::trace_coefficient(map);
      double p_plus = pauliops::trace_coefficient(plus);
      bool is_plus = rng.next_double() * total < p_plus;
      map = is_plus ? std::move(plus) : pauliops::project_z(map, row, 0, false);
      outcomes.push_back(is_plus);
    }
  auto sel = schemeops::select_copy(outcomes, g.b, g.t);
  out.f = sel.success ? 1 : 0;
  out.failure_counts = schemeops::failure_counts_of(outcomes, g.b, g.t);
  out.selected_copy = sel.success ? sel.copy : -1;
  std::vector<std::pair<int, int>> pos;
  for (int z = 0; z < g.r; ++z) pos.push_back({grid_row(sel.success ? sel.copy : 0, z, g.r, g.t), 0});
  double mass = pauliops::trace_coefficient(map);
  out.rho_out = pauliops::reduced_from_map(map, pos) / mass;
  return out;
}

// Decryption circuit sizes from the closed forms; independent of the
// evaluated circuit.
struct GateCounts {
  long long u_dagger_cnots = 0;
  long long permutation_swaps_max = 0;
};

inline GateCounts gate_counts(const Gamma& g) {
  g.validate();
  long long rows = static_cast<long long>(g.b) * (g.r + g.t);
  return {2LL * (g.n - 1) * rows, static_cast<long long>(g.n + g.m - 1) * rows};
}

}  // namespace qhe
