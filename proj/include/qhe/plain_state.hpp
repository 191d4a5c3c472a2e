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

#include <string>
#include <string_view>
#include <vector>

#include "qhe/density.hpp"
#include "qhe/gamma.hpp"
#include "qhe/rng.hpp"

namespace qhe {

// An r-qubit input state: either a pure amplitude vector or a density
// matrix. Qubit z sits at bit z of the basis index (LSB-first).
struct PlainState {
  int num_qubits = 1;
  bool pure = true;
  Vec amplitudes;  // pure only
  Mat density;     // mixed only

  Mat as_density() const {
    if (pure) return amplitudes * amplitudes.adjoint();
    return density;
  }

  // Weighted pure components; the mixture the backends actually evolve.
  // Mixed states decompose into eigenvectors with eigenvalue weights.
  std::vector<std::pair<double, Vec>> pure_components(double weight_cutoff = 1e-14) const {
    if (pure) return {{1.0, amplitudes}};
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (density + density.adjoint()));
    std::vector<std::pair<double, Vec>> out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      double w = es.eigenvalues()(i);
      if (w > weight_cutoff) out.emplace_back(w, es.eigenvectors().col(i));
    }
    return out;
  }

  void validate(double tol = 1e-12) const {
    if (pure) {
      if (amplitudes.size() != Eigen::Index(1) << num_qubits)
        throw std::invalid_argument("state vector dimension mismatch");
      if (std::abs(amplitudes.squaredNorm() - 1.0) > tol) throw std::invalid_argument("state vector is not normalized");
    } else {
      if (density.rows() != Eigen::Index(1) << num_qubits || density.rows() != density.cols())
        throw std::invalid_argument("density matrix dimension mismatch");
      if (!is_density_matrix(density, tol, 1e-9)) throw std::invalid_argument("not a density matrix");
    }
  }
};

inline PlainState make_basis_state(int r, std::uint64_t bits) {
  PlainState s;
  s.num_qubits = r;
  s.amplitudes = Vec::Zero(Eigen::Index(1) << r);
  s.amplitudes(static_cast<Eigen::Index>(bits)) = 1.0;
  return s;
}

inline PlainState make_zero(int r) { return make_basis_state(r, 0); }

inline PlainState make_one(int r) { return make_basis_state(r, (std::uint64_t(1) << r) - 1); }

inline PlainState make_plus(int r) {
  PlainState s;
  s.num_qubits = r;
  const Eigen::Index dim = Eigen::Index(1) << r;
  s.amplitudes = Vec::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  return s;
}

inline PlainState make_ghz(int r) {
  PlainState s;
  s.num_qubits = r;
  const Eigen::Index dim = Eigen::Index(1) << r;
  s.amplitudes = Vec::Zero(dim);
  s.amplitudes(0) = 1.0 / std::sqrt(2.0);
  s.amplitudes(dim - 1) = 1.0 / std::sqrt(2.0);
  return s;
}

inline PlainState make_random_pure(int r, std::uint64_t seed) {
  Rng rng(seed);
  PlainState s;
  s.num_qubits = r;
  const Eigen::Index dim = Eigen::Index(1) << r;
  s.amplitudes = Vec(dim);
  for (Eigen::Index i = 0; i < dim; ++i) s.amplitudes(i) = Cd(rng.next_gaussian(), rng.next_gaussian());
  s.amplitudes.normalize();
  return s;
}

// Named presets for the CLI: zero | one | plus | ghz | random:<seed>.
inline PlainState make_preset_state(std::string_view spec, int r) {
  if (spec == "zero") return make_zero(r);
  if (spec == "one") return make_one(r);
  if (spec == "plus") return make_plus(r);
  if (spec == "ghz") return make_ghz(r);
  if (spec.rfind("random:", 0) == 0) {
    std::uint64_t seed = std::stoull(std::string(spec.substr(7)));
    return make_random_pure(r, seed);
  }
  throw std::invalid_argument("unknown state preset '" + std::string(spec) +
                              "' (expected zero|one|plus|ghz|random:<seed>)");
}

// |T> = T H |0>, computed from the gate matrices rather than typed in.
inline Vec magic_state() {
  Vec zero(2);
  zero << 1.0, 0.0;
  return gate_matrix(GateKind::T) * (gate_matrix(GateKind::H) * zero);
}

// The column-1 payload: b copies of rho_input, each followed by t magic
// states. Stored symbolically; backends materialize it as needed.
struct InputBlock {
  Gamma gamma;
  PlainState input;
};

inline InputBlock assemble_input(const PlainState& rho, const Gamma& gamma) {
  gamma.validate();
  rho.validate();
  if (rho.num_qubits != gamma.r)
    throw std::invalid_argument("input state has " + std::to_string(rho.num_qubits) + " qubits, expected r = " +
                                std::to_string(gamma.r));
  return InputBlock{gamma, rho};
}

// Dense p-qubit density of the block; local row x of copy beta is qubit
// grid_row(beta, x, r, t). Guarded to 12 qubits.
inline Mat input_block_density(const InputBlock& block) {
  const Gamma& g = block.gamma;
  if (g.p() > 12) throw std::invalid_argument("input block too large for dense materialization");
  Vec magic = magic_state();
  Mat magic_rho = magic * magic.adjoint();
  Mat per_copy = block.input.as_density();
  for (int i = 0; i < g.t; ++i) per_copy = kron(magic_rho, per_copy);
  Mat full = Mat::Identity(1, 1);
  for (int beta = 0; beta < g.b; ++beta) full = kron(per_copy, full);
  return full;
}

}  // namespace qhe
