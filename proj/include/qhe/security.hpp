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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qhe/density.hpp"
#include "qhe/errors.hpp"
#include "qhe/gamma.hpp"
#include "qhe/pauli.hpp"
#include "qhe/pauli_backend.hpp"

namespace qhe {

// Audit-scale parameters. The trace-distance bound holds for any positive
// (p, n, m) — unlike the scheme itself, which constrains n — so audits
// take this relaxed tuple. p plays the role of b(r+t).
struct AuditParams {
  int p = 1;
  int n = 2;
  int m = 2;

  int q() const { return n + m; }

  void validate() const {
    if (p < 1 || n < 1 || m < 1) throw std::invalid_argument("audit parameters must be positive");
  }
};

inline double binomial(int a, int b) {
  if (b < 0 || b > a) return 0.0;
  b = std::min(b, a - b);
  double c = 1.0;
  for (int k = 1; k <= b; ++k) c = c * (a - b + k) / k;
  return c;
}

// 2 (4^p - 1) C(n+m, n)^(-1/2).
inline double averaged_distance_bound(int p, int n, int m) {
  if (p < 1 || n < 1 || m < 1) throw std::invalid_argument("arguments must be positive");
  return 2.0 * (std::pow(4.0, p) - 1.0) / std::sqrt(binomial(n + m, n));
}

// e (8n / (pi (1 + 1/alpha)))^(1/4) 4^p exp(-m/2 ln(1 + 1/alpha) - n/2 ln(1 + alpha)),
// alpha = m/n.
inline double security_eps_bound(int p, int n, int m) {
  if (p < 1 || n < 1 || m < 1) throw std::invalid_argument("arguments must be positive");
  const double alpha = static_cast<double>(m) / n;
  double prefactor = std::numbers::e * std::pow(8.0 * n / (std::numbers::pi * (1.0 + 1.0 / alpha)), 0.25);
  double expo = -0.5 * m * std::log1p(1.0 / alpha) - 0.5 * n * std::log1p(alpha);
  return prefactor * std::pow(4.0, p) * std::exp(expo);
}

inline double security_eps_bound(const Gamma& g) {
  g.validate();
  return security_eps_bound(g.p(), g.n, g.m);
}

// (1/e^2) sqrt(2 pi (1/alpha + 1) / n) (1+alpha)^n (1/alpha + 1)^(alpha n);
// a lower bound on C(n+m, m) via Stirling.
inline double stirling_binomial_lower_bound(int n, int m) {
  if (n < 1 || m < 1) throw std::invalid_argument("arguments must be positive");
  const double alpha = static_cast<double>(m) / n;
  double root = std::sqrt(2.0 * std::numbers::pi * (1.0 / alpha + 1.0) / n);
  double logpow = n * std::log1p(alpha) + alpha * n * std::log1p(1.0 / alpha);
  return std::exp(-2.0) * root * std::exp(logpow);
}

namespace securityops {

// Accumulate coeff * sigma_A into a dense 2^(pq) matrix; labels is the
// row-major p x q label matrix. sigma_A is a signed permutation matrix, so
// this is one pass over the basis.
inline void accumulate_pauli_term(Mat& acc, const std::vector<std::uint8_t>& labels, int num_qubits, double coeff) {
  const std::size_t dim = std::size_t(1) << num_qubits;
  std::size_t flip = 0;
  for (int b = 0; b < num_qubits; ++b) {
    Pauli p = static_cast<Pauli>(labels[b]);
    if (p == Pauli::X || p == Pauli::Y) flip |= std::size_t(1) << b;
  }
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t row = col ^ flip;
    Cd value(coeff, 0);
    for (int b = 0; b < num_qubits; ++b) {
      Pauli p = static_cast<Pauli>(labels[b]);
      bool cbit = (col >> b) & 1u;
      if (p == Pauli::Y)
        value *= cbit ? Cd(0, -1) : Cd(0, 1);
      else if (p == Pauli::Z && cbit)
        value = -value;
    }
    acc(row, col) += value;
  }
}

// Conjugate a row's labels (columns 0..n-1) through the encoder U_x:
// collect group first, then fan-out.
inline int encode_row_labels(std::vector<std::uint8_t>& row, int n) {
  int sign = 1;
  auto cnot = [&](int c, int t) {
    PairConj r = conjugate_cnot(static_cast<Pauli>(row[c]), static_cast<Pauli>(row[t]));
    row[c] = static_cast<std::uint8_t>(r.out_control);
    row[t] = static_cast<std::uint8_t>(r.out_target);
    sign *= r.phase.sign();
  };
  for (int y = 1; y < n; ++y) cnot(y, 0);
  for (int y = 1; y < n; ++y) cnot(0, y);
  return sign;
}

}  // namespace securityops

// Exact permutation-averaged encryption of a p-qubit state psi:
//   (1/q!) sum_pi P_pi U E(psi) U^dagger P_pi^dagger.
// Every encoded Pauli term is averaged over the distinct arrangements of
// its column patterns (a multiset orbit). When the encoded pattern is the
// same label on all n code columns this is the C(q, n) subset average; the
// orbit form stays exact for every n. Never sampled.
inline Mat averaged_ciphertext(const Mat& psi, const AuditParams& params) {
  params.validate();
  const int p = params.p;
  const int q = params.q();
  if (p * q > 12) throw GuardExceeded("averaged ciphertext limited to 12 grid qubits");
  if (psi.rows() != Eigen::Index(1) << p) throw std::invalid_argument("state dimension does not match p");

  std::vector<double> coeffs = pauli_coefficients(psi, p);
  const std::size_t dim = std::size_t(1) << (p * q);
  Mat avg = Mat::Zero(dim, dim);
  const double norm = std::pow(2.0, -p * q);

  // Identity term: invariant under encoding and averaging.
  std::vector<std::uint8_t> identity_labels(static_cast<std::size_t>(p) * q, 0);
  securityops::accumulate_pauli_term(avg, identity_labels, p * q, norm * coeffs[0]);

  for (std::size_t v = 1; v < coeffs.size(); ++v) {
    if (std::abs(coeffs[v]) < 1e-15) continue;
    // Encode: label v_x on column 0 of row x, pushed through U_x.
    int sign = 1;
    std::vector<std::vector<std::uint8_t>> columns(q, std::vector<std::uint8_t>(p, 0));
    for (int x = 0; x < p; ++x) {
      std::vector<std::uint8_t> row(q, 0);
      row[0] = static_cast<std::uint8_t>((v >> (2 * x)) & 3u);
      sign *= securityops::encode_row_labels(row, params.n);
      for (int y = 0; y < q; ++y) columns[y][x] = row[y];
    }

    // Average over the distinct arrangements of the column multiset.
    // next_permutation cycles back to sorted order, so two passes work:
    // one to count the orbit, one to accumulate.
    std::sort(columns.begin(), columns.end());
    std::size_t count = 0;
    do {
      ++count;
    } while (std::next_permutation(columns.begin(), columns.end()));

    const double weight = norm * coeffs[v] * sign / static_cast<double>(count);
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(p) * q);
    do {
      for (int x = 0; x < p; ++x)
        for (int y = 0; y < q; ++y) labels[static_cast<std::size_t>(x) * q + y] = columns[y][x];
      securityops::accumulate_pauli_term(avg, labels, p * q, weight);
    } while (std::next_permutation(columns.begin(), columns.end()));
  }
  return avg;
}

// Brute-force cross-check: materialize U E(psi) U^dagger and average over
// all q! column permutations applied to the dense matrix.
inline Mat averaged_ciphertext_direct(const Mat& psi, const AuditParams& params) {
  params.validate();
  const int p = params.p;
  const int q = params.q();
  if (q > 6 || p * q > 12) throw GuardExceeded("direct permutation average limited to q <= 6, pq <= 12");
  if (psi.rows() != Eigen::Index(1) << p) throw std::invalid_argument("state dimension does not match p");

  std::vector<double> coeffs = pauli_coefficients(psi, p);
  const std::size_t dim = std::size_t(1) << (p * q);
  Mat rho = Mat::Zero(dim, dim);
  const double norm = std::pow(2.0, -p * q);
  for (std::size_t v = 0; v < coeffs.size(); ++v) {
    if (std::abs(coeffs[v]) < 1e-15) continue;
    int sign = 1;
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(p) * q, 0);
    for (int x = 0; x < p; ++x) {
      std::vector<std::uint8_t> row(q, 0);
      row[0] = static_cast<std::uint8_t>((v >> (2 * x)) & 3u);
      sign *= securityops::encode_row_labels(row, params.n);
      std::copy(row.begin(), row.end(), labels.begin() + static_cast<std::size_t>(x) * q);
    }
    securityops::accumulate_pauli_term(rho, labels, p * q, norm * coeffs[v] * sign);
  }

  // Basis remap for a column permutation, factored through q-bit row chunks.
  auto permuted = [&](const Mat& in, const ColumnPermutation& pi) {
    std::vector<std::uint32_t> chunk(std::size_t(1) << q, 0);
    for (std::uint32_t c = 0; c < chunk.size(); ++c) {
      std::uint32_t out = 0;
      for (int y = 0; y < q; ++y)
        if ((c >> y) & 1u) out |= std::uint32_t(1) << pi(y);
      chunk[c] = out;
    }
    auto remap = [&](std::size_t i) {
      std::size_t j = 0;
      const std::size_t mask = (std::size_t(1) << q) - 1;
      for (int x = 0; x < p; ++x) j |= std::size_t(chunk[(i >> (x * q)) & mask]) << (x * q);
      return j;
    };
    Mat out(in.rows(), in.cols());
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b) out(remap(a), remap(b)) = in(a, b);
    return out;
  };

  std::vector<int> perm(q);
  for (int i = 0; i < q; ++i) perm[i] = i;
  Mat avg = Mat::Zero(dim, dim);
  std::size_t count = 0;
  do {
    avg += permuted(rho, ColumnPermutation{perm});
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return avg / static_cast<double>(count);
}

inline double exact_security_distance(const Mat& psi, const Mat& psi_prime, const AuditParams& params) {
  return trace_norm_distance(averaged_ciphertext(psi, params), averaged_ciphertext(psi_prime, params));
}

struct AuditReport {
  AuditParams params;
  std::string inputs;
  double exact_distance = 0.0;
  double distance_bound = 0.0;  // closed form for the averaged trace distance
  double eps_bound = 0.0;       // looser exponential form
  bool pass = false;            // exact <= distance_bound
};

inline AuditReport make_audit_report(const Mat& psi, const Mat& psi_prime, const AuditParams& params,
                                     const std::string& inputs_description) {
  AuditReport rep;
  rep.params = params;
  rep.inputs = inputs_description;
  rep.exact_distance = exact_security_distance(psi, psi_prime, params);
  rep.distance_bound = averaged_distance_bound(params.p, params.n, params.m);
  rep.eps_bound = security_eps_bound(params.p, params.n, params.m);
  rep.pass = rep.exact_distance <= rep.distance_bound + 1e-12;
  return rep;
}

}  // namespace qhe
