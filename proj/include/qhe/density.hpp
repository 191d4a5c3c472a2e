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

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qhe/circuit.hpp"
#include "qhe/pauli.hpp"

namespace qhe {

using Cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli_matrix(Pauli p) {
  Mat m(2, 2);
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, Cd(0, -1), Cd(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Single-qubit gate matrices, T included (used by the plain-circuit
// reference evaluator, never by Pauli conjugation).
inline Mat gate_matrix(GateKind k) {
  Mat m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  switch (k) {
    case GateKind::X: return pauli_matrix(Pauli::X);
    case GateKind::Y: return pauli_matrix(Pauli::Y);
    case GateKind::Z: return pauli_matrix(Pauli::Z);
    case GateKind::H: m << s, s, s, -s; return m;
    case GateKind::S: m << 1, 0, 0, Cd(0, 1); return m;
    case GateKind::T: m << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4); return m;
    default: throw std::invalid_argument("CNOT is not a single-qubit gate");
  }
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

// Tensor product with qubit 0 as the least-significant bit of the basis
// index: factors[0] is the rightmost Kronecker factor.
inline Mat kron_qubits(const std::vector<Mat>& factors) {
  Mat r = Mat::Identity(1, 1);
  for (const Mat& f : factors) r = kron(f, r);
  return r;
}

inline bool is_hermitian(const Mat& a, double tol = 1e-12) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Positive semidefinite up to a small negative eigenvalue tolerance, trace
// one. The workhorse validity check for decoded states.
inline bool is_density_matrix(const Mat& a, double herm_tol = 1e-9, double eig_tol = 1e-9) {
  if (a.rows() != a.cols()) return false;
  if (!is_hermitian(a, herm_tol)) return false;
  if (std::abs(a.trace().real() - 1.0) > herm_tol || std::abs(a.trace().imag()) > herm_tol) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -eig_tol;
}

// Schatten-1 norm of rho - rho'. No 1/2 factor: orthogonal pure states are
// at distance 2, which is the convention the closed-form bounds use.
inline double trace_norm_distance(const Mat& rho, const Mat& rho_prime) {
  if (rho.rows() != rho_prime.rows() || rho.cols() != rho_prime.cols())
    throw std::invalid_argument("trace_norm_distance: dimension mismatch");
  Mat diff = rho - rho_prime;
  if (!is_hermitian(diff, 1e-9)) throw std::invalid_argument("trace_norm_distance: difference is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

// Partial trace of a multi-qubit density matrix. keep lists the (0-based,
// LSB-first) qubit positions to retain, in the order they should appear in
// the output (keep[0] becomes the output's qubit 0).
inline Mat partial_trace(const Mat& rho, const std::vector<int>& keep, int num_qubits) {
  const std::size_t dim = std::size_t(1) << num_qubits;
  if (rho.rows() != static_cast<Eigen::Index>(dim)) throw std::invalid_argument("partial_trace: dimension mismatch");
  std::vector<int> traced;
  std::vector<bool> kept(num_qubits, false);
  for (int k : keep) {
    if (k < 0 || k >= num_qubits) throw std::out_of_range("partial_trace: qubit out of range");
    kept[k] = true;
  }
  for (int i = 0; i < num_qubits; ++i)
    if (!kept[i]) traced.push_back(i);

  const std::size_t keep_dim = std::size_t(1) << keep.size();
  const std::size_t rest_dim = std::size_t(1) << traced.size();
  auto full_index = [&](std::size_t kv, std::size_t rv) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < keep.size(); ++i) idx |= ((kv >> i) & 1u) << keep[i];
    for (std::size_t i = 0; i < traced.size(); ++i) idx |= ((rv >> i) & 1u) << traced[i];
    return idx;
  };

  Mat out = Mat::Zero(keep_dim, keep_dim);
  for (std::size_t a = 0; a < keep_dim; ++a)
    for (std::size_t b = 0; b < keep_dim; ++b)
      for (std::size_t rv = 0; rv < rest_dim; ++rv) out(a, b) += rho(full_index(a, rv), full_index(b, rv));
  return out;
}

}  // namespace qhe
