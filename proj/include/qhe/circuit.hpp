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

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qhe/gamma.hpp"
#include "qhe/rng.hpp"

namespace qhe {

enum class GateKind : std::uint8_t { X, Y, Z, H, S, CNOT, T };

inline const char* gate_mnemonic(GateKind k) {
  switch (k) {
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::CNOT: return "CNOT";
    default: return "T";
  }
}

struct Gate {
  GateKind kind;
  int qubit = 0;   // CNOT: control
  int target = 0;  // CNOT only
  bool operator==(const Gate&) const = default;
};

// The gate sequence (V_1, ..., V_d); gates[0] acts first on the state.
struct Circuit {
  int num_qubits = 1;
  std::vector<Gate> gates;

  int depth() const { return static_cast<int>(gates.size()); }

  int t_count() const {
    int c = 0;
    for (const auto& g : gates) c += (g.kind == GateKind::T) ? 1 : 0;
    return c;
  }

  bool operator==(const Circuit&) const = default;
};

// Number of T gates among the first i gates, 1 <= i <= depth.
inline int t_prefix_count(const Circuit& c, int i) {
  if (i < 1 || i > c.depth()) throw std::out_of_range("gate index out of range");
  int count = 0;
  for (int j = 0; j < i; ++j) count += (c.gates[j].kind == GateKind::T) ? 1 : 0;
  return count;
}

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_number, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + what), line(line_number) {}
};

// Line format: `X|Y|Z|H|S <q>`, `CNOT <c> <t>`, `T <q>`; `#` starts a
// comment; qubit indices are 0-based decimals.
inline Circuit parse_circuit(std::string_view text, int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("circuit needs at least one qubit");
  Circuit c;
  c.num_qubits = num_qubits;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string mnemonic;
    if (!(ls >> mnemonic)) continue;

    auto read_index = [&](const char* what) {
      long long v;
      if (!(ls >> v)) throw ParseError(lineno, std::string("missing or malformed ") + what);
      if (v < 0 || v >= num_qubits)
        throw ParseError(lineno, std::string(what) + " index " + std::to_string(v) + " out of range [0, " +
                                     std::to_string(num_qubits) + ")");
      return static_cast<int>(v);
    };
    auto expect_end = [&] {
      std::string extra;
      if (ls >> extra) throw ParseError(lineno, "unexpected trailing token '" + extra + "'");
    };

    Gate g{};
    if (mnemonic == "X" || mnemonic == "Y" || mnemonic == "Z" || mnemonic == "H" || mnemonic == "S") {
      g.kind = mnemonic == "X"   ? GateKind::X
               : mnemonic == "Y" ? GateKind::Y
               : mnemonic == "Z" ? GateKind::Z
               : mnemonic == "H" ? GateKind::H
                                 : GateKind::S;
      g.qubit = read_index("qubit");
    } else if (mnemonic == "CNOT") {
      g.kind = GateKind::CNOT;
      g.qubit = read_index("control");
      g.target = read_index("target");
      if (g.qubit == g.target) throw ParseError(lineno, "CNOT control and target must differ");
    } else if (mnemonic == "T") {
      g.kind = GateKind::T;
      g.qubit = read_index("qubit");
    } else {
      throw ParseError(lineno, "unknown mnemonic '" + mnemonic + "'");
    }
    expect_end();
    c.gates.push_back(g);
  }
  return c;
}

inline std::string serialize_circuit(const Circuit& c) {
  std::ostringstream out;
  for (const auto& g : c.gates) {
    out << gate_mnemonic(g.kind) << ' ' << g.qubit;
    if (g.kind == GateKind::CNOT) out << ' ' << g.target;
    out << '\n';
  }
  return out.str();
}

// Empty result means the circuit is evaluable under gamma.
inline std::vector<std::string> validate_for_gamma(const Circuit& c, const Gamma& gamma) {
  std::vector<std::string> violations;
  if (c.num_qubits != gamma.r)
    violations.push_back("circuit acts on " + std::to_string(c.num_qubits) + " qubits but r = " +
                         std::to_string(gamma.r));
  if (c.t_count() != gamma.t)
    violations.push_back("circuit has " + std::to_string(c.t_count()) + " T gates but t = " +
                         std::to_string(gamma.t));
  return violations;
}

// Deterministic per seed; never emits T gates. CNOTs appear only when the
// register has at least two qubits.
inline Circuit random_clifford_circuit(int r, int d, std::uint64_t seed) {
  if (r < 1) throw std::invalid_argument("r must be >= 1");
  if (d < 0) throw std::invalid_argument("d must be >= 0");
  Rng rng(seed);
  Circuit c;
  c.num_qubits = r;
  const int kinds = r >= 2 ? 6 : 5;
  for (int i = 0; i < d; ++i) {
    Gate g{};
    int k = static_cast<int>(rng.next_below(kinds));
    if (k < 5) {
      g.kind = static_cast<GateKind>(k);
      g.qubit = static_cast<int>(rng.next_below(r));
    } else {
      g.kind = GateKind::CNOT;
      g.qubit = static_cast<int>(rng.next_below(r));
      g.target = static_cast<int>(rng.next_below(r - 1));
      if (g.target >= g.qubit) ++g.target;
    }
    c.gates.push_back(g);
  }
  return c;
}

}  // namespace qhe
