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

#include "qhe/circuit.hpp"
#include "qhe/density.hpp"
#include "qhe/plain_state.hpp"

namespace qhe {

// Plain r-qubit evaluation, V = V_d ... V_1 built from gate matrices.
// The comparison target for every homomorphic round trip.
inline Mat circuit_unitary(const Circuit& c) {
  const int r = c.num_qubits;
  const Eigen::Index dim = Eigen::Index(1) << r;
  Mat u = Mat::Identity(dim, dim);
  for (const auto& g : c.gates) {
    Mat step;
    if (g.kind == GateKind::CNOT) {
      step = Mat::Zero(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        Eigen::Index j = ((i >> g.qubit) & 1) ? i ^ (Eigen::Index(1) << g.target) : i;
        step(j, i) = 1.0;
      }
    } else {
      std::vector<Mat> factors(r, Mat::Identity(2, 2));
      factors[g.qubit] = gate_matrix(g.kind);
      step = kron_qubits(factors);
    }
    u = step * u;
  }
  return u;
}

inline Mat direct_output(const Circuit& c, const PlainState& input) {
  Mat v = circuit_unitary(c);
  return v * input.as_density() * v.adjoint();
}

}  // namespace qhe
