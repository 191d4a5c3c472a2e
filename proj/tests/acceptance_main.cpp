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

// Acceptance suite: one pass/fail line per criterion, every tolerance
// pinned in code. Run all criteria or a single one by number.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "qhe/bounds.hpp"
#include "qhe/net.hpp"
#include "qhe/reference.hpp"
#include "qhe/scheme.hpp"
#include "qhe/security.hpp"
#include "qhe/serialize.hpp"

namespace {

using qhe::Backend;
using qhe::Circuit;
using qhe::Gamma;
using qhe::Mat;
using qhe::Pauli;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << (detail.tellp() > 0 ? "; " : "") << what;
    }
  }
  void note(const std::string& what) { detail << (detail.tellp() > 0 ? "; " : "") << what; }
};

Circuit clifford_circuit_for_seed(int r, std::uint64_t seed) {
  int depth = 1 + static_cast<int>(seed % 20);  // depths 1..20
  return qhe::random_clifford_circuit(r, depth, seed * 1315423911ULL + 17);
}

qhe::CipherState run_pipeline(const qhe::SecretKey& key, const qhe::PlainState& in, const Circuit& c,
                              const Gamma& g, Backend backend) {
  return qhe::evaluate(c, qhe::encrypt(key, qhe::assemble_input(in, g), backend));
}

// --- criterion 1: Clifford completeness -----------------------------------
Check criterion1() {
  Check c;
  const Gamma g{1, 2, 0, 5, 1};
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Circuit circ = clifford_circuit_for_seed(2, seed);
    qhe::PlainState in = qhe::make_random_pure(2, seed + 1000);
    Mat expect = qhe::direct_output(circ, in);
    auto key = qhe::keygen(g, seed + 7);
    for (Backend backend : {Backend::DenseOracle, Backend::PauliProp}) {
      auto res = qhe::decrypt(key, run_pipeline(key, in, circ, g, backend));
      double dist = qhe::trace_norm_distance(res.rho_out, expect);
      worst = std::max(worst, dist);
      c.require(res.f == 1, "f != 1 at seed " + std::to_string(seed));
      c.require(dist <= 1e-9, std::string(qhe::backend_name(backend)) + " distance " + std::to_string(dist) +
                                  " at seed " + std::to_string(seed));
    }
  }
  c.note("50 circuits x 2 backends, worst distance " + sci(worst));
  return c;
}

// --- criterion 2: T-gate teleportation -------------------------------------
Check criterion2() {
  Check c;
  const Gamma g{1, 1, 1, 5, 1};
  Circuit circ = qhe::parse_circuit("T 0", 1);
  auto key = qhe::keygen(g, 2024);
  qhe::Vec t = qhe::magic_state();
  Mat t_density = t * t.adjoint();

  auto res = qhe::decrypt(key, run_pipeline(key, qhe::make_plus(1), circ, g, Backend::DenseOracle));
  c.require(std::abs(res.prob_success - 0.5) <= 1e-12,
            "P(f=1) = " + std::to_string(res.prob_success) + " not 0.5 within 1e-12");
  double dist = qhe::trace_norm_distance(res.rho_out, t_density);
  c.require(dist <= 1e-9, "conditional output distance " + std::to_string(dist));

  auto res_p = qhe::decrypt(key, run_pipeline(key, qhe::make_plus(1), circ, g, Backend::PauliProp));
  c.require(std::abs(res_p.prob_success - 0.5) <= 1e-12, "pauli backend P(f=1) off");
  c.note("P(f=1) = " + std::to_string(res.prob_success) + ", |T> distance " + sci(dist));
  return c;
}

// --- criterion 3: copy amplification ---------------------------------------
Check criterion3() {
  Check c;
  int b = qhe::min_copies(1, 0.01);
  c.require(b == 26, "min_copies(1, 0.01) = " + std::to_string(b) + ", expected 26");
  double exact = qhe::exact_failure_prob(26, 1);
  c.require(std::abs(exact - std::exp2(-26)) < 1e-20, "exact failure is not 2^-26");
  c.require(exact <= 0.01, "exact failure above the target");

  const std::uint64_t trials = 1000000;
  double est = qhe::monte_carlo_failure(26, 1, trials, 31337);
  double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(trials));
  c.require(std::abs(est - exact) <= 3.0 * sigma, "Monte Carlo estimate outside 3 sigma");
  std::ostringstream s;
  s.precision(3);
  s << "b = " << b << ", exact " << exact << ", MC " << est << " over 1e6 trials";
  c.note(s.str());
  return c;
}

// --- criterion 4: security exactness ---------------------------------------
Check criterion4() {
  Check c;
  Mat zero = qhe::make_zero(1).as_density();
  Mat one = qhe::make_one(1).as_density();
  std::ostringstream s;
  s.precision(6);
  for (qhe::AuditParams params : {qhe::AuditParams{1, 2, 2}, qhe::AuditParams{1, 2, 3}, qhe::AuditParams{1, 1, 4}}) {
    double d = qhe::exact_security_distance(zero, one, params);
    double bound = qhe::averaged_distance_bound(params.p, params.n, params.m);
    c.require(d <= bound + 1e-12, "distance " + std::to_string(d) + " exceeds bound at n=" +
                                      std::to_string(params.n) + ", m=" + std::to_string(params.m));
    if (params.n == 2 && params.m == 3)
      c.require(std::abs(bound - 6.0 / std::sqrt(10.0)) < 1e-12, "bound at (2,3) is not 6/sqrt(10)");
    s << "(" << params.n << "," << params.m << "): " << d << " <= " << bound << "  ";
  }

  // Orbit averaging equals the direct q!-term average at q <= 5.
  for (qhe::AuditParams params : {qhe::AuditParams{1, 2, 2}, qhe::AuditParams{1, 2, 3}, qhe::AuditParams{1, 1, 4},
                                  qhe::AuditParams{2, 2, 2}}) {
    for (const Mat& psi : {qhe::make_zero(params.p).as_density(), qhe::make_random_pure(params.p, 5).as_density()}) {
      double gap =
          (qhe::averaged_ciphertext(psi, params) - qhe::averaged_ciphertext_direct(psi, params)).cwiseAbs().maxCoeff();
      c.require(gap <= 1e-12, "orbit vs direct average gap " + std::to_string(gap));
    }
  }
  c.note(s.str());
  return c;
}

// --- criterion 5: bound chain ----------------------------------------------
Check criterion5() {
  Check c;
  for (int n : {5, 9, 13})
    for (int m = 1; m <= 13; ++m) {
      c.require(qhe::stirling_binomial_lower_bound(n, m) <= qhe::binomial(n + m, m) * (1 + 1e-12),
                "Stirling bound above the binomial at n=" + std::to_string(n) + ", m=" + std::to_string(m));
      for (int p = 1; p <= 4; ++p)
        c.require(qhe::averaged_distance_bound(p, n, m) <= qhe::security_eps_bound(p, n, m) * (1 + 1e-12),
                  "chain broken at n=" + std::to_string(n) + ", m=" + std::to_string(m) + ", p=" + std::to_string(p));
    }

  // Spot value against an independent recomputation of the same closed form.
  double eps = qhe::security_eps_bound(Gamma{1, 1, 0, 5, 5});
  double alpha = 1.0;
  double alt = 2.0 * std::numbers::e * std::pow(5.0 / (2.0 * std::numbers::pi * (1.0 + 1.0 / alpha)), 0.25) * 4.0 *
               std::pow(2.0, -2.5) * std::pow(2.0, -2.5);
  c.require(std::abs(eps - alt) <= 1e-3, "eps spot value off: " + std::to_string(eps) + " vs " + std::to_string(alt));
  c.require(std::abs(eps - 0.5398) <= 1e-3, "eps not ~0.5398");
  std::ostringstream s;
  s.precision(6);
  s << "grid n in {5,9,13} x m in [1..13] x p in [1..4]; eps(1,1,0,5,5) = " << eps;
  c.note(s.str());
  return c;
}

// --- criterion 6: compactness ----------------------------------------------
Check criterion6() {
  Check c;
  const Gamma g{1, 2, 1, 5, 2};
  auto counts = qhe::gate_counts(g);
  c.require(counts.u_dagger_cnots == 24, "u_dagger_cnots = " + std::to_string(counts.u_dagger_cnots));
  c.require(counts.permutation_swaps_max == 18, "swaps = " + std::to_string(counts.permutation_swaps_max));

  // The counts depend only on gamma: identical for depth-1 and depth-50
  // circuits, both of which must decrypt fine.
  Circuit short_circuit = qhe::parse_circuit("T 0", 2);
  std::string long_text = "T 1\n";
  for (int i = 0; i < 49; ++i) long_text += (i % 2 == 0) ? "H 0\n" : "CNOT 0 1\n";
  Circuit long_circuit = qhe::parse_circuit(long_text, 2);
  auto key = qhe::keygen(g, 606);
  for (const Circuit& circ : {short_circuit, long_circuit}) {
    auto res = qhe::decrypt(key, run_pipeline(key, qhe::make_zero(2), circ, g, Backend::PauliProp));
    c.require(res.prob_success > 0.49, "pipeline failed at depth " + std::to_string(circ.depth()));
    auto again = qhe::gate_counts(g);
    c.require(again.u_dagger_cnots == counts.u_dagger_cnots && again.permutation_swaps_max == counts.permutation_swaps_max,
              "counts changed with circuit depth");
  }
  c.note("u_dagger_cnots = 24, permutation_swaps_max = 18, constant over depths 1 and 50");
  return c;
}

// --- criterion 7: backend equivalence --------------------------------------
Check criterion7() {
  Check c;
  struct Case {
    Gamma g;
    int runs;
  };
  std::vector<Case> cases;
  int total_runs = 0;
  for (int b = 1; b <= 2; ++b)
    for (int r = 1; r <= 2; ++r)
      for (int t = 0; t <= 1; ++t)
        for (int n : {5, 9, 13})
          for (int m = 1; m <= 13; ++m) {
            Gamma g{b, r, t, n, m};
            if (!g.is_valid()) continue;
            int p = g.p(), q = g.q();
            if (p * q > 14 || p * (q - 1) > 12) continue;
            int mixed = p * (q - 1);
            int runs = mixed <= 6 ? 10 : mixed <= 10 ? 7 : mixed <= 11 ? 4 : 2;
            cases.push_back({g, runs});
            total_runs += runs;
          }
  c.require(total_runs >= 100, "corpus has only " + std::to_string(total_runs) + " runs");

  double worst = 0.0;
  std::uint64_t seed = 0;
  for (const auto& [g, runs] : cases) {
    for (int run = 0; run < runs; ++run, ++seed) {
      // Clifford prefix plus the required T gates at the end.
      Circuit circ = qhe::random_clifford_circuit(g.r, 1 + static_cast<int>(seed % 6), seed);
      for (int i = 0; i < g.t; ++i)
        circ.gates.push_back({qhe::GateKind::T, static_cast<int>(seed % g.r), 0});
      qhe::PlainState in = qhe::make_random_pure(g.r, seed + 999);
      auto key = qhe::keygen(g, seed + 13);

      auto ct_d = qhe::encrypt(key, qhe::assemble_input(in, g), Backend::DenseOracle);
      auto ct_p = qhe::encrypt(key, qhe::assemble_input(in, g), Backend::PauliProp);

      // Reduced single-qubit states agree after encryption.
      for (int y : {0, g.q() - 1}) {
        Mat rd = qhe::reduced_state(std::get<qhe::DenseState>(ct_d), {{0, y}});
        Mat rp = qhe::reduced_state(std::get<qhe::PauliPropState>(ct_p), {{0, y}});
        double gap = (rd - rp).cwiseAbs().maxCoeff();
        worst = std::max(worst, gap);
        c.require(gap <= 1e-9, "encrypt reduced-state gap " + std::to_string(gap));
      }

      ct_d = qhe::evaluate(circ, std::move(ct_d));
      ct_p = qhe::evaluate(circ, std::move(ct_p));
      {
        Mat rd = qhe::reduced_state(std::get<qhe::DenseState>(ct_d), {{g.p() - 1, 0}});
        Mat rp = qhe::reduced_state(std::get<qhe::PauliPropState>(ct_p), {{g.p() - 1, 0}});
        double gap = (rd - rp).cwiseAbs().maxCoeff();
        worst = std::max(worst, gap);
        c.require(gap <= 1e-9, "evaluate reduced-state gap " + std::to_string(gap));
      }

      auto res_d = qhe::decrypt(key, ct_d);
      auto res_p = qhe::decrypt(key, ct_p);
      double prob_gap = std::abs(res_d.prob_success - res_p.prob_success);
      c.require(prob_gap <= 1e-9, "prob gap " + std::to_string(prob_gap));
      double out_gap = qhe::trace_norm_distance(res_d.rho_out, res_p.rho_out);
      worst = std::max(worst, out_gap);
      c.require(out_gap <= 1e-9, "decrypt output gap " + std::to_string(out_gap) + " at seed " +
                                     std::to_string(seed));
    }
  }
  c.note(std::to_string(total_runs) + " runs over " + std::to_string(cases.size()) +
         " parameter tuples, worst gap " + sci(worst));
  return c;
}

// --- criterion 8: logical-operator identities ------------------------------
Check criterion8() {
  Check c;
  const int n = 5;
  const Eigen::Index dim = Eigen::Index(1) << n;

  auto embed1 = [&](const Mat& op, int at, int nq) {
    std::vector<Mat> factors(nq, Mat::Identity(2, 2));
    factors[at] = op;
    return qhe::kron_qubits(factors);
  };
  auto embed_cnot = [&](int control, int target, int nq) {
    const Eigen::Index d = Eigen::Index(1) << nq;
    Mat m = Mat::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      Eigen::Index j = ((i >> control) & 1) ? i ^ (Eigen::Index(1) << target) : i;
      m(j, i) = 1.0;
    }
    return m;
  };

  Mat u = Mat::Identity(dim, dim);
  for (int y = 1; y < n; ++y) u = embed_cnot(y, 0, n) * u;  // collect
  for (int y = 1; y < n; ++y) u = embed_cnot(0, y, n) * u;  // fan-out

  auto tensor_power = [&](Pauli p) {
    std::vector<Mat> factors(n, qhe::pauli_matrix(p));
    return qhe::kron_qubits(factors);
  };

  for (Pauli p : {Pauli::X, Pauli::Z}) {
    Mat e = embed1(qhe::pauli_matrix(p), 0, n);
    double g1 = (u.adjoint() * e * u - tensor_power(p)).cwiseAbs().maxCoeff();
    double g2 = (u * e * u.adjoint() - tensor_power(p)).cwiseAbs().maxCoeff();
    c.require(g1 <= 1e-12 && g2 <= 1e-12, std::string("logical ") + qhe::pauli_char(p) + " gap");
  }
  {
    Mat e = embed1(qhe::pauli_matrix(Pauli::Y), 0, n);
    Mat expect = std::pow(std::complex<double>(0, 1), 1 - n) * tensor_power(Pauli::Y);
    double gap = (u.adjoint() * e * u - expect).cwiseAbs().maxCoeff();
    double gap_plain = (u.adjoint() * e * u - tensor_power(Pauli::Y)).cwiseAbs().maxCoeff();
    c.require(gap <= 1e-12 && gap_plain <= 1e-12, "logical Y phase is not i^(1-n) = +1");
  }
  {
    std::vector<Mat> hf(n, qhe::gate_matrix(qhe::GateKind::H));
    std::vector<Mat> sf(n, qhe::gate_matrix(qhe::GateKind::S));
    Mat hbar = qhe::kron_qubits(hf), sbar = qhe::kron_qubits(sf);
    Mat xbar = tensor_power(Pauli::X), ybar = tensor_power(Pauli::Y), zbar = tensor_power(Pauli::Z);
    c.require((hbar * xbar * hbar.adjoint() - zbar).cwiseAbs().maxCoeff() <= 1e-12, "HXH != Z");
    c.require((hbar * zbar * hbar.adjoint() - xbar).cwiseAbs().maxCoeff() <= 1e-12, "HZH != X");
    c.require((hbar * ybar * hbar.adjoint() + ybar).cwiseAbs().maxCoeff() <= 1e-12, "HYH != -Y");
    c.require((sbar * xbar * sbar.adjoint() - ybar).cwiseAbs().maxCoeff() <= 1e-12, "SXS != Y");
    c.require((sbar * ybar * sbar.adjoint() + xbar).cwiseAbs().maxCoeff() <= 1e-12, "SYS != -X");
    c.require((sbar * zbar * sbar.adjoint() - zbar).cwiseAbs().maxCoeff() <= 1e-12, "SZS != Z");
  }
  {
    // Transversal CNOT: commutes with the two-row encoder and conjugates
    // the logical algebra exactly as a CNOT.
    const int total = 2 * n;
    const std::size_t vdim = std::size_t(1) << total;
    auto cnot_vec = [&](std::vector<qhe::Cd>& v, int cbit, int tbit) {
      for (std::size_t i = 0; i < v.size(); ++i)
        if (((i >> cbit) & 1u) && !((i >> tbit) & 1u)) std::swap(v[i], v[i | (std::size_t(1) << tbit)]);
    };
    auto ladder = [&](std::vector<qhe::Cd>& v, int base, bool dagger) {
      if (!dagger) {
        for (int y = 1; y < n; ++y) cnot_vec(v, base + y, base);
        for (int y = 1; y < n; ++y) cnot_vec(v, base, base + y);
      } else {
        for (int y = 1; y < n; ++y) cnot_vec(v, base, base + y);
        for (int y = 1; y < n; ++y) cnot_vec(v, base + y, base);
      }
    };
    qhe::Rng rng(808);
    double worst = 0.0;
    for (int probe = 0; probe < 8; ++probe) {
      std::vector<qhe::Cd> lhs(vdim);
      double norm = 0.0;
      for (auto& a : lhs) {
        a = qhe::Cd(rng.next_gaussian(), rng.next_gaussian());
        norm += std::norm(a);
      }
      for (auto& a : lhs) a /= std::sqrt(norm);
      std::vector<qhe::Cd> rhs = lhs;
      ladder(lhs, 0, false);
      ladder(lhs, n, false);
      for (int y = 0; y < n; ++y) cnot_vec(lhs, y, n + y);
      ladder(lhs, 0, true);
      ladder(lhs, n, true);
      for (int y = 0; y < n; ++y) cnot_vec(rhs, y, n + y);
      for (std::size_t i = 0; i < vdim; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    }
    c.require(worst <= 1e-12, "transversal CNOT does not commute with the encoder, gap " + std::to_string(worst));

    Mat cbar = Mat::Identity(Eigen::Index(vdim), Eigen::Index(vdim));
    for (int y = 0; y < n; ++y) cbar = embed_cnot(y, n + y, total) * cbar;
    auto row_power = [&](Pauli p, int base) {
      std::vector<Mat> factors(total, Mat::Identity(2, 2));
      for (int k = base; k < base + n; ++k) factors[k] = qhe::pauli_matrix(p);
      return qhe::kron_qubits(factors);
    };
    Mat xc = row_power(Pauli::X, 0), xt = row_power(Pauli::X, n);
    Mat zc = row_power(Pauli::Z, 0), zt = row_power(Pauli::Z, n);
    c.require((cbar * xc * cbar.adjoint() - xc * xt).cwiseAbs().maxCoeff() <= 1e-12, "CNOT X_c algebra");
    c.require((cbar * xt * cbar.adjoint() - xt).cwiseAbs().maxCoeff() <= 1e-12, "CNOT X_t algebra");
    c.require((cbar * zc * cbar.adjoint() - zc).cwiseAbs().maxCoeff() <= 1e-12, "CNOT Z_c algebra");
    c.require((cbar * zt * cbar.adjoint() - zc * zt).cwiseAbs().maxCoeff() <= 1e-12, "CNOT Z_t algebra");
  }
  c.note("encoder identities at n = 5, all to 1e-12");
  return c;
}

// --- criterion 9: delegation demo ------------------------------------------
Check criterion9() {
  Check c;
  const Gamma g{1, 2, 0, 5, 1};
  qhe::net::Server server(std::uint64_t(128) << 20);  // dense ciphertexts here exceed the 64 MiB default
  std::uint16_t port = server.start("127.0.0.1", 0);

  std::vector<std::string> frames;
  auto tap = [&](std::string_view sent, std::string_view received) {
    frames.emplace_back(sent);
    frames.emplace_back(received);
  };

  double worst = 0.0;
  std::vector<std::string> key_blobs;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    Circuit circ = clifford_circuit_for_seed(2, seed);
    qhe::PlainState in = qhe::make_random_pure(2, seed + 1000);
    auto key = qhe::keygen(g, seed + 7);
    key_blobs.push_back(qhe::key_to_json(key).dump());
    std::string raw;
    for (int v : key.kappa.images) raw.push_back(static_cast<char>(v));
    key_blobs.push_back(raw);

    Backend backend = seed < 10 ? Backend::PauliProp : Backend::DenseOracle;
    auto remote = qhe::net::client_delegate("127.0.0.1", port, key, in, circ, g, backend, {},
                                            std::uint64_t(128) << 20, tap);
    auto local = qhe::decrypt(key, run_pipeline(key, in, circ, g, backend));
    double gap = qhe::trace_norm_distance(remote.rho_out, local.rho_out);
    worst = std::max(worst, gap);
    c.require(gap <= 1e-9, "delegated vs local gap " + std::to_string(gap) + " at seed " + std::to_string(seed));
    c.require(remote.f == local.f, "flag mismatch");
  }
  server.stop();

  c.require(!frames.empty(), "no frames captured");
  for (const auto& frame : frames)
    for (const auto& blob : key_blobs)
      c.require(frame.find(blob) == std::string::npos, "a frame contains key bytes");
  c.note("12 delegated circuits (10 pauli + 2 dense), worst gap " + sci(worst) + ", " +
         std::to_string(frames.size()) + " frames scanned for key bytes");
  return c;
}

struct Criterion {
  int id;
  const char* label;
  std::function<Check()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> criteria = {
      {1, "clifford-completeness", criterion1},
      {2, "t-gate-teleportation", criterion2},
      {3, "copy-amplification", criterion3},
      {4, "security-exactness", criterion4},
      {5, "bound-chain", criterion5},
      {6, "compactness", criterion6},
      {7, "backend-equivalence", criterion7},
      {8, "logical-operator-identities", criterion8},
      {9, "delegation-demo", criterion9},
  };

  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::cerr << "usage: " << argv[0] << " [criterion 1.." << criteria.size() << "]\n";
      return 2;
    }
  }

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (only && criterion.id != only) continue;
    auto start = std::chrono::steady_clock::now();
    Check result = criterion.run();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  criterion-%d  %-28s  [%6.2fs]  %s\n", result.ok ? "PASS" : "FAIL", criterion.id,
                criterion.label, secs, result.detail.str().c_str());
    std::fflush(stdout);
    failures += result.ok ? 0 : 1;
  }
  return failures;
}
