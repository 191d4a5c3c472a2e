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

#include <cstring>
#include <fstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qhe/scheme.hpp"

namespace qhe {

using Json = nlohmann::json;

// ---- JSON text formats --------------------------------------------------

inline Json gamma_to_json(const Gamma& g) {
  return Json{{"b", g.b}, {"r", g.r}, {"t", g.t}, {"n", g.n}, {"m", g.m}};
}

inline Gamma gamma_from_json(const Json& j) {
  Gamma g;
  g.b = j.at("b").get<int>();
  g.r = j.at("r").get<int>();
  g.t = j.at("t").get<int>();
  g.n = j.at("n").get<int>();
  g.m = j.at("m").get<int>();
  g.validate();
  return g;
}

// Key file: {"q": ..., "perm": [0-based images], "seed": optional}.
inline Json key_to_json(const SecretKey& key) {
  Json j{{"q", key.kappa.size()}, {"perm", key.kappa.images}};
  if (key.seed) j["seed"] = *key.seed;
  return j;
}

inline SecretKey key_from_json(const Json& j) {
  SecretKey key;
  key.kappa.images = j.at("perm").get<std::vector<int>>();
  if (j.at("q").get<int>() != key.kappa.size()) throw std::invalid_argument("key file: q does not match perm length");
  if (!key.kappa.is_valid()) throw std::invalid_argument("key file: perm is not a permutation");
  if (j.contains("seed")) key.seed = j.at("seed").get<std::uint64_t>();
  return key;
}

// ---- binary ciphertext format ------------------------------------------
//
//   "QHE1" | backend u8 | format-version u8 | reserved u16 |
//   b r t n m (u32 LE each) | backend payload
//
// dense payload:  mixture u8, sample_count u64, sample_seed u64,
//                 branch_count u64, amps_per_branch u64, then per branch a
//                 weight f64 and amps (re, im) f64 pairs. All little-endian.
// pauli payload:  code-column bitmask u64, term_count u64, then per term a
//                 packed label u64 and coefficient f64, ascending by label.

namespace wire {

inline void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

inline void put_u16(std::string& out, std::uint16_t v) {
  for (int i = 0; i < 2; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

struct Reader {
  std::string_view data;
  std::size_t pos = 0;

  void need(std::size_t k) const {
    if (pos + k > data.size()) throw std::invalid_argument("ciphertext truncated");
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data[pos++]);
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= std::uint16_t(static_cast<std::uint8_t>(data[pos++])) << (8 * i);
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<std::uint8_t>(data[pos++])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<std::uint8_t>(data[pos++])) << (8 * i);
    return v;
  }
  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
};

}  // namespace wire

inline constexpr char kCipherMagic[4] = {'Q', 'H', 'E', '1'};
inline constexpr std::uint8_t kCipherFormatVersion = 1;

inline std::string serialize_cipher(const CipherState& ct) {
  std::string out;
  out.append(kCipherMagic, 4);
  const Gamma& g = gamma_of(ct);
  wire::put_u8(out, static_cast<std::uint8_t>(backend_of(ct)));
  wire::put_u8(out, kCipherFormatVersion);
  wire::put_u16(out, 0);
  for (int v : {g.b, g.r, g.t, g.n, g.m}) wire::put_u32(out, static_cast<std::uint32_t>(v));

  if (const auto* dense = std::get_if<DenseState>(&ct)) {
    wire::put_u8(out, static_cast<std::uint8_t>(dense->mixture));
    wire::put_u64(out, dense->sample_count);
    wire::put_u64(out, dense->sample_seed);
    wire::put_u64(out, dense->branches.size());
    wire::put_u64(out, dense->dim());
    out.reserve(out.size() + dense->branches.size() * (8 + dense->dim() * 16));
    for (std::size_t i = 0; i < dense->branches.size(); ++i) {
      wire::put_f64(out, dense->weights[i]);
      for (const Cd& a : dense->branches[i]) {
        wire::put_f64(out, a.real());
        wire::put_f64(out, a.imag());
      }
    }
  } else {
    const auto& pp = std::get<PauliPropState>(ct);
    wire::put_u64(out, pp.code_mask);
    wire::put_u64(out, pp.terms.size());
    for (const auto& [key, coeff] : pp.terms) {  // std::map: ascending keys
      wire::put_u64(out, key);
      wire::put_f64(out, coeff);
    }
  }
  return out;
}

inline CipherState deserialize_cipher(std::string_view bytes) {
  wire::Reader r{bytes};
  r.need(4);
  if (std::memcmp(bytes.data(), kCipherMagic, 4) != 0) throw std::invalid_argument("not a ciphertext file");
  r.pos = 4;
  auto backend = static_cast<Backend>(r.u8());
  if (r.u8() != kCipherFormatVersion) throw std::invalid_argument("unsupported ciphertext format version");
  r.u16();  // reserved
  Gamma g;
  g.b = static_cast<int>(r.u32());
  g.r = static_cast<int>(r.u32());
  g.t = static_cast<int>(r.u32());
  g.n = static_cast<int>(r.u32());
  g.m = static_cast<int>(r.u32());
  g.validate();

  if (backend == Backend::DenseOracle) {
    DenseState st;
    st.gamma = g;
    st.mixture = static_cast<DenseState::Mixture>(r.u8());
    st.sample_count = r.u64();
    st.sample_seed = r.u64();
    std::uint64_t branch_count = r.u64();
    std::uint64_t dim = r.u64();
    if (dim != st.dim()) throw std::invalid_argument("ciphertext dimension mismatch");
    r.need(branch_count * (8 + dim * 16));
    st.weights.reserve(branch_count);
    st.branches.reserve(branch_count);
    for (std::uint64_t i = 0; i < branch_count; ++i) {
      st.weights.push_back(r.f64());
      std::vector<Cd> amp(dim);
      for (std::uint64_t k = 0; k < dim; ++k) {
        double re = r.f64();
        double im = r.f64();
        amp[k] = Cd(re, im);
      }
      st.branches.push_back(std::move(amp));
    }
    return st;
  }
  if (backend == Backend::PauliProp) {
    PauliPropState st;
    st.gamma = g;
    st.code_mask = r.u64();
    std::uint64_t count = r.u64();
    for (std::uint64_t i = 0; i < count; ++i) {
      std::uint64_t key = r.u64();
      st.terms[key] = r.f64();
    }
    return st;
  }
  throw std::invalid_argument("unknown backend tag");
}

// ---- small file helpers --------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

}  // namespace qhe
