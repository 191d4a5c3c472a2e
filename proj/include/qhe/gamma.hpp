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

#include <stdexcept>
#include <string>

namespace qhe {

// Scheme parameter tuple (b, r, t, n, m).
//   b: encoded copies, r: data qubits, t: T-gate budget,
//   n: code length (must be 4n'+1), m: hiding columns.
// Grid shape: p = b(r+t) rows by q = n+m columns.
struct Gamma {
  int b = 1;
  int r = 1;
  int t = 0;
  int n = 5;
  int m = 1;

  int p() const { return b * (r + t); }
  int q() const { return n + m; }

  std::string check() const {
    if (b < 1) return "b must be >= 1";
    if (r < 1) return "r must be >= 1";
    if (t < 0) return "t must be >= 0";
    if (m < 1) return "m must be >= 1";
    if (n < 5 || n % 4 != 1) return "n must be 4n'+1 for a positive integer n'";
    return {};
  }

  bool is_valid() const { return check().empty(); }

  void validate() const {
    std::string err = check();
    if (!err.empty()) throw std::invalid_argument("invalid parameters: " + err);
  }

  bool operator==(const Gamma&) const = default;
};

}  // namespace qhe
