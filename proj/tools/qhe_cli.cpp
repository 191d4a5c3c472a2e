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

// Batch CLI for the grid-code homomorphic encryption toolkit.
//
// Exit codes: 0 success, 2 validation/transport error, 3 feasibility guard
// exceeded, 4 bound or assertion violation (build-breaking evidence).

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qhe/bounds.hpp"
#include "qhe/net.hpp"
#include "qhe/reference.hpp"
#include "qhe/scheme.hpp"
#include "qhe/security.hpp"
#include "qhe/serialize.hpp"
#include "qhe/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitGuard = 3;
constexpr int kExitBoundViolation = 4;

using qhe::Json;

struct BoundViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

qhe::Gamma parse_params(const std::string& spec) {
  // Inline "b,r,t,n,m" or a JSON file {"b":..,"r":..,"t":..,"n":..,"m":..}.
  if (spec.find(',') != std::string::npos) {
    std::istringstream in(spec);
    std::string tok;
    std::vector<int> vals;
    while (std::getline(in, tok, ',')) vals.push_back(std::stoi(tok));
    if (vals.size() != 5) throw std::invalid_argument("inline params need exactly b,r,t,n,m");
    qhe::Gamma g{vals[0], vals[1], vals[2], vals[3], vals[4]};
    g.validate();
    return g;
  }
  return qhe::gamma_from_json(Json::parse(qhe::read_file(spec)));
}

qhe::Backend parse_backend(const std::string& name) {
  if (name == "oracle") return qhe::Backend::DenseOracle;
  if (name == "pauli") return qhe::Backend::PauliProp;
  throw std::invalid_argument("backend must be 'oracle' or 'pauli'");
}

std::pair<std::string, std::uint16_t> parse_host_port(const std::string& spec) {
  auto colon = spec.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("expected host:port");
  int port = std::stoi(spec.substr(colon + 1));
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range");
  return {spec.substr(0, colon), static_cast<std::uint16_t>(port)};
}

std::uint64_t seed_or_random(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (std::uint64_t(rd()) << 32) ^ rd();
}

Json density_to_json(const qhe::Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Json base_report(const qhe::Gamma& g, std::uint64_t seed, const std::string& backend) {
  return Json{{"gamma", qhe::gamma_to_json(g)}, {"seed", seed}, {"backend", backend}, {"version", qhe::kVersion}};
}

void emit(const Json& report, const std::string& format, const std::string& out_path) {
  std::string text;
  if (format == "json") {
    text = report.dump(2) + "\n";
  } else {
    std::ostringstream table;
    std::function<void(const Json&, const std::string&)> flatten = [&](const Json& j, const std::string& prefix) {
      for (auto it = j.begin(); it != j.end(); ++it) {
        std::string name = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object())
          flatten(*it, name);
        else
          table << "  " << name << " = " << it->dump() << "\n";
      }
    };
    flatten(report, "");
    text = table.str();
  }
  if (out_path.empty())
    std::cout << text;
  else
    qhe::write_file(out_path, text);
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
};

qhe::DenseOptions make_dense_options(const std::string& mixture, std::uint64_t samples, std::uint64_t seed) {
  qhe::DenseOptions opts;
  if (mixture == "enumerate") {
    opts.mixture = qhe::DenseState::Mixture::Enumerate;
  } else if (mixture == "sample") {
    opts.mixture = qhe::DenseState::Mixture::Sampled;
    opts.samples = samples;
    opts.seed = seed;
  } else {
    throw std::invalid_argument("mixture must be 'enumerate' or 'sample'");
  }
  return opts;
}

int run(int argc, char** argv) {
  CLI::App app{"symmetric-key quantum homomorphic encryption on permuted grid codes"};
  app.set_version_flag("--version", qhe::kVersion);
  app.require_subcommand(1);

  // Shared option storage; each subcommand wires the subset it needs.
  std::string params_spec, key_path, circuit_path, state_spec = "zero", backend_name = "pauli";
  std::string in_path, out_path, format = "json", mixture = "enumerate";
  std::optional<std::uint64_t> seed_opt;
  std::uint64_t samples = 1024, trials = 0;
  std::uint64_t max_payload = qhe::net::kDefaultPayloadCap;

  auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--params", params_spec, "parameter file or inline b,r,t,n,m")->required();
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format: json|table")
        ->check(CLI::IsMember({"json", "table"}));
    cmd->add_option("--out", out_path, "write the report/artifact here instead of stdout");
  };

  // ---- keygen ----
  auto* keygen_cmd = app.add_subcommand("keygen", "generate a secret column permutation");
  add_params(keygen_cmd);
  keygen_cmd->add_option("--seed", seed_opt, "RNG seed (recorded in the key file)");
  keygen_cmd->add_option("--out", out_path, "key file path")->required();
  keygen_cmd->callback([&] {
    qhe::Gamma g = parse_params(params_spec);
    std::uint64_t seed = seed_or_random(seed_opt);
    auto key = qhe::keygen(g, seed);
    qhe::write_file(out_path, qhe::key_to_json(key).dump(2) + "\n");
    std::cout << "wrote key for q = " << g.q() << " (seed " << seed << ") to " << out_path << "\n";
  });

  // ---- encrypt ----
  auto* encrypt_cmd = app.add_subcommand("encrypt", "encrypt an input state preset");
  add_params(encrypt_cmd);
  encrypt_cmd->add_option("--key", key_path, "key file")->required();
  encrypt_cmd->add_option("--state", state_spec, "zero|one|plus|ghz|random:<seed>");
  encrypt_cmd->add_option("--backend", backend_name, "oracle|pauli");
  encrypt_cmd->add_option("--mixture", mixture, "oracle mixture: enumerate|sample");
  encrypt_cmd->add_option("--samples", samples, "sample count for --mixture sample");
  encrypt_cmd->add_option("--seed", seed_opt, "mixture sampling seed");
  encrypt_cmd->add_option("--out", out_path, "ciphertext file")->required();
  encrypt_cmd->callback([&] {
    qhe::Gamma g = parse_params(params_spec);
    auto key = qhe::key_from_json(Json::parse(qhe::read_file(key_path)));
    auto block = qhe::assemble_input(qhe::make_preset_state(state_spec, g.r), g);
    auto opts = make_dense_options(mixture, samples, seed_or_random(seed_opt));
    auto ct = qhe::encrypt(key, block, parse_backend(backend_name), opts);
    qhe::write_file(out_path, qhe::serialize_cipher(ct));
    std::cout << "wrote " << backend_name << " ciphertext (" << qhe::serialize_cipher(ct).size() << " bytes) to "
              << out_path << "\n";
  });

  // ---- evaluate ----
  auto* evaluate_cmd = app.add_subcommand("evaluate", "apply a circuit to a ciphertext (no key needed)");
  evaluate_cmd->add_option("--in", in_path, "input ciphertext")->required();
  evaluate_cmd->add_option("--circuit", circuit_path, "circuit file")->required();
  evaluate_cmd->add_option("--out", out_path, "output ciphertext")->required();
  evaluate_cmd->callback([&] {
    auto ct = qhe::deserialize_cipher(qhe::read_file(in_path));
    qhe::Circuit c = qhe::parse_circuit(qhe::read_file(circuit_path), qhe::gamma_of(ct).r);
    auto out = qhe::evaluate(c, std::move(ct));
    qhe::write_file(out_path, qhe::serialize_cipher(out));
    std::cout << "evaluated " << c.depth() << " gates; wrote " << out_path << "\n";
  });

  // ---- decrypt ----
  auto* decrypt_cmd = app.add_subcommand("decrypt", "decrypt a ciphertext");
  decrypt_cmd->add_option("--key", key_path, "key file")->required();
  decrypt_cmd->add_option("--in", in_path, "ciphertext file")->required();
  bool sample_mode = false;
  decrypt_cmd->add_flag("--sample", sample_mode, "sample one shot instead of exact branch enumeration");
  decrypt_cmd->add_option("--seed", seed_opt, "sampling seed");
  add_format(decrypt_cmd);
  decrypt_cmd->callback([&] {
    auto key = qhe::key_from_json(Json::parse(qhe::read_file(key_path)));
    auto ct = qhe::deserialize_cipher(qhe::read_file(in_path));
    std::uint64_t seed = seed_or_random(seed_opt);
    Json report = base_report(qhe::gamma_of(ct), seed, qhe::backend_name(qhe::backend_of(ct)));
    if (sample_mode) {
      qhe::Rng rng(seed);
      auto shot = qhe::decrypt_sampled(key, ct, rng);
      report["mode"] = "sampled";
      report["f"] = shot.f;
      report["failure_counts"] = shot.failure_counts;
      report["selected_copy"] = shot.selected_copy;
      report["rho_out"] = density_to_json(shot.rho_out);
    } else {
      auto res = qhe::decrypt(key, ct);
      report["mode"] = "exact";
      report["f"] = res.f;
      report["prob_success"] = res.prob_success;
      report["rho_out"] = density_to_json(res.rho_out);
      if (res.prob_success < 1.0) report["rho_fail"] = density_to_json(res.rho_fail);
    }
    emit(report, format, out_path);
  });

  // ---- roundtrip ----
  auto* roundtrip_cmd = app.add_subcommand("roundtrip", "assemble-encrypt-evaluate-decrypt and compare");
  add_params(roundtrip_cmd);
  roundtrip_cmd->add_option("--circuit", circuit_path, "circuit file")->required();
  roundtrip_cmd->add_option("--state", state_spec, "zero|one|plus|ghz|random:<seed>");
  roundtrip_cmd->add_option("--backend", backend_name, "oracle|pauli");
  roundtrip_cmd->add_option("--seed", seed_opt, "key seed");
  roundtrip_cmd->add_option("--mixture", mixture, "oracle mixture: enumerate|sample");
  roundtrip_cmd->add_option("--samples", samples, "sample count for --mixture sample");
  add_format(roundtrip_cmd);
  roundtrip_cmd->callback([&] {
    qhe::Gamma g = parse_params(params_spec);
    qhe::Circuit c = qhe::parse_circuit(qhe::read_file(circuit_path), g.r);
    if (auto v = qhe::validate_for_gamma(c, g); !v.empty()) throw std::invalid_argument(v.front());
    std::uint64_t seed = seed_or_random(seed_opt);
    auto key = qhe::keygen(g, seed);
    qhe::PlainState input = qhe::make_preset_state(state_spec, g.r);
    auto opts = make_dense_options(mixture, samples, seed + 1);

    Timer t_enc;
    auto ct = qhe::encrypt(key, qhe::assemble_input(input, g), parse_backend(backend_name), opts);
    double enc_ms = t_enc.ms();
    Timer t_eval;
    ct = qhe::evaluate(c, std::move(ct));
    double eval_ms = t_eval.ms();
    Timer t_dec;
    auto res = qhe::decrypt(key, ct);
    double dec_ms = t_dec.ms();

    double dist = res.prob_success > 0 ? qhe::trace_norm_distance(res.rho_out, qhe::direct_output(c, input)) : -1.0;
    Json report = base_report(g, seed, backend_name);
    report["state"] = state_spec;
    report["depth"] = c.depth();
    report["f"] = res.f;
    report["prob_success"] = res.prob_success;
    report["trace_distance_to_direct"] = dist;
    report["timings_ms"] = Json{{"encrypt", enc_ms}, {"evaluate", eval_ms}, {"decrypt", dec_ms}};
    emit(report, format, out_path);
  });

  // ---- audit-security ----
  auto* audit_sec_cmd = app.add_subcommand("audit-security", "exact permutation-averaged trace distance vs bounds");
  int audit_p = 1, audit_n = 2, audit_m = 3;
  std::string inputs_spec = "zero-vs-one";
  audit_sec_cmd->add_option("--p", audit_p, "rows (plays b(r+t))")->required();
  audit_sec_cmd->add_option("--n", audit_n, "code length")->required();
  audit_sec_cmd->add_option("--m", audit_m, "hiding columns")->required();
  audit_sec_cmd->add_option("--inputs", inputs_spec, "zero-vs-one | ghz-vs-zero | random:<s1>:<s2>");
  add_format(audit_sec_cmd);
  audit_sec_cmd->callback([&] {
    qhe::AuditParams params{audit_p, audit_n, audit_m};
    params.validate();
    qhe::Mat a, b;
    if (inputs_spec == "zero-vs-one") {
      a = qhe::make_zero(audit_p).as_density();
      b = qhe::make_one(audit_p).as_density();
    } else if (inputs_spec == "ghz-vs-zero") {
      a = qhe::make_ghz(audit_p).as_density();
      b = qhe::make_zero(audit_p).as_density();
    } else if (inputs_spec.rfind("random:", 0) == 0) {
      auto rest = inputs_spec.substr(7);
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("random inputs need two seeds: random:<s1>:<s2>");
      a = qhe::make_random_pure(audit_p, std::stoull(rest.substr(0, colon))).as_density();
      b = qhe::make_random_pure(audit_p, std::stoull(rest.substr(colon + 1))).as_density();
    } else {
      throw std::invalid_argument("unknown input pair '" + inputs_spec + "'");
    }
    auto rep = qhe::make_audit_report(a, b, params, inputs_spec);
    Json report{{"params", Json{{"p", params.p}, {"n", params.n}, {"m", params.m}}},
                {"inputs", rep.inputs},
                {"exact", rep.exact_distance},
                {"lemma4", rep.distance_bound},
                {"theorem_eps", rep.eps_bound},
                {"pass", rep.pass},
                {"version", qhe::kVersion}};
    emit(report, format, out_path);
    if (!rep.pass) throw BoundViolation("exact distance exceeds the closed-form bound");
  });

  // ---- audit-reliability ----
  auto* audit_rel_cmd = app.add_subcommand("audit-reliability", "failure probabilities vs closed-form tails");
  int rel_t = 1, rel_b = 1;
  std::optional<double> rel_target;
  audit_rel_cmd->add_option("--t", rel_t, "T gates")->required();
  audit_rel_cmd->add_option("--b", rel_b, "copies")->required();
  audit_rel_cmd->add_option("--target", rel_target, "failure target for the copy-count formula");
  audit_rel_cmd->add_option("--trials", trials, "Monte Carlo trials (0 = skip)");
  audit_rel_cmd->add_option("--seed", seed_opt, "Monte Carlo seed");
  add_format(audit_rel_cmd);
  audit_rel_cmd->callback([&] {
    std::uint64_t seed = seed_or_random(seed_opt);
    auto rep = qhe::make_reliability_report(rel_b, rel_t, rel_target, trials, seed);
    Json report{{"t", rep.t},
                {"b", rep.b},
                {"exact_failure", rep.exact_failure},
                {"theorem_delta", rep.delta_bound_value},
                {"delta_bound_vacuous", rep.delta_bound_vacuous},
                {"delta_region_min_b", rep.delta_region_min_b},
                {"delta_bound_applies", rep.delta_bound_applies},
                {"delta_bound_holds", rep.delta_bound_holds},
                {"seed", rep.seed},
                {"version", qhe::kVersion}};
    if (rel_t >= 1) {
      report["hoeffding_bound"] = rep.hoeffding_bound;
      report["hoeffding_vacuous"] = rep.hoeffding_vacuous;
    }
    if (rep.min_copies_for_target) {
      report["delta_target"] = rep.delta_target;
      report["min_copies_for_target"] = *rep.min_copies_for_target;
    }
    if (rep.empirical_failure) {
      report["trials"] = rep.trials;
      report["empirical_failure"] = *rep.empirical_failure;
    }
    emit(report, format, out_path);
    if (rep.delta_bound_applies && !rep.delta_bound_holds)
      throw BoundViolation("exact failure exceeds the closed-form bound inside the validated region");
  });

  // ---- bounds ----
  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form calculator sweeps (CSV)");
  std::string grid = "reliability";
  int b_max = 64;
  bounds_cmd->add_option("--grid", grid, "reliability|security")->check(CLI::IsMember({"reliability", "security"}));
  bounds_cmd->add_option("--b-max", b_max, "largest copy count for the reliability grid");
  bounds_cmd->add_option("--out", out_path, "CSV path (stdout if omitted)");
  bounds_cmd->callback([&] {
    std::ostringstream csv;
    if (grid == "reliability") {
      csv << "t,b,exact,hoeffding,theorem_delta\n";
      for (int t = 1; t <= 4; ++t)
        for (int b = 1; b <= b_max; ++b)
          csv << t << ',' << b << ',' << qhe::exact_failure_prob(b, t) << ','
              << qhe::hoeffding_failure_bound(b, t) << ',' << qhe::failure_delta_bound(b, t) << '\n';
    } else {
      csv << "n,m,p,lemma4,theorem_eps,stirling_lb,binomial\n";
      for (int n : {5, 9, 13})
        for (int m = 1; m <= 13; ++m)
          for (int p = 1; p <= 4; ++p)
            csv << n << ',' << m << ',' << p << ',' << qhe::averaged_distance_bound(p, n, m) << ','
                << qhe::security_eps_bound(p, n, m) << ',' << qhe::stirling_binomial_lower_bound(n, m) << ','
                << qhe::binomial(n + m, m) << '\n';
    }
    if (out_path.empty())
      std::cout << csv.str();
    else
      qhe::write_file(out_path, csv.str());
  });

  // ---- serve ----
  auto* serve_cmd = app.add_subcommand("serve", "run the evaluation server");
  std::string listen_spec = "127.0.0.1:7700";
  serve_cmd->add_option("--listen", listen_spec, "bind address host:port");
  serve_cmd->add_option("--max-payload", max_payload, "frame payload cap in bytes");
  serve_cmd->callback([&] {
    auto [host, port] = parse_host_port(listen_spec);
    qhe::net::Server server(max_payload);
    std::uint16_t bound = server.start(host, port);
    std::cout << "evaluation server listening on " << host << ":" << bound << "\n";
    for (;;) std::this_thread::sleep_for(std::chrono::seconds(3600));
  });

  // ---- delegate ----
  auto* delegate_cmd = app.add_subcommand("delegate", "delegate one evaluation to a server");
  std::string server_spec = "127.0.0.1:7700";
  delegate_cmd->add_option("--server", server_spec, "server address host:port")->required();
  add_params(delegate_cmd);
  delegate_cmd->add_option("--key", key_path, "key file")->required();
  delegate_cmd->add_option("--circuit", circuit_path, "circuit file")->required();
  delegate_cmd->add_option("--state", state_spec, "zero|one|plus|ghz|random:<seed>");
  delegate_cmd->add_option("--backend", backend_name, "oracle|pauli");
  delegate_cmd->add_option("--mixture", mixture, "oracle mixture: enumerate|sample");
  delegate_cmd->add_option("--samples", samples, "sample count for --mixture sample");
  delegate_cmd->add_option("--seed", seed_opt, "mixture sampling seed");
  delegate_cmd->add_option("--max-payload", max_payload, "frame payload cap in bytes");
  add_format(delegate_cmd);
  delegate_cmd->callback([&] {
    auto [host, port] = parse_host_port(server_spec);
    qhe::Gamma g = parse_params(params_spec);
    auto key = qhe::key_from_json(Json::parse(qhe::read_file(key_path)));
    qhe::Circuit c = qhe::parse_circuit(qhe::read_file(circuit_path), g.r);
    qhe::PlainState input = qhe::make_preset_state(state_spec, g.r);
    std::uint64_t seed = seed_or_random(seed_opt);
    auto opts = make_dense_options(mixture, samples, seed);
    auto res = qhe::net::client_delegate(host, port, key, input, c, g, parse_backend(backend_name), opts, max_payload);
    Json report = base_report(g, seed, backend_name);
    report["server"] = server_spec;
    report["f"] = res.f;
    report["prob_success"] = res.prob_success;
    report["rho_out"] = density_to_json(res.rho_out);
    emit(report, format, out_path);
  });

  // ---- demo ----
  auto* demo_cmd = app.add_subcommand("demo", "end-to-end walkthrough at desk scale");
  demo_cmd->add_option("--seed", seed_opt, "base seed");
  demo_cmd->callback([&] {
    std::uint64_t seed = seed_opt.value_or(1);
    qhe::Gamma g{1, 1, 1, 5, 1};
    std::cout << "parameters: b=" << g.b << " r=" << g.r << " t=" << g.t << " n=" << g.n << " m=" << g.m
              << "  (grid " << g.p() << " x " << g.q() << ")\n";
    auto key = qhe::keygen(g, seed);
    std::cout << "key: secret permutation of " << g.q() << " columns (seed " << seed << ")\n";

    qhe::Circuit c = qhe::parse_circuit("H 0\nT 0", 1);
    auto input = qhe::make_zero(1);
    auto ct = qhe::encrypt(key, qhe::assemble_input(input, g), qhe::Backend::PauliProp);
    ct = qhe::evaluate(c, std::move(ct));
    auto res = qhe::decrypt(key, ct);
    double dist = qhe::trace_norm_distance(res.rho_out, qhe::direct_output(c, input));
    std::cout << "evaluated H then T on |0>: P(f=1) = " << res.prob_success
              << ", heralded output distance to direct evaluation = " << dist << "\n";

    auto audit = qhe::make_audit_report(qhe::make_zero(1).as_density(), qhe::make_one(1).as_density(),
                                        qhe::AuditParams{1, 2, 3}, "zero-vs-one");
    std::cout << "security audit (p=1, n=2, m=3): exact " << audit.exact_distance << " <= bound " << audit.distance_bound
              << (audit.pass ? "  [ok]" : "  [VIOLATION]") << "\n";

    std::cout << "copies for 1% failure at t=1: " << qhe::min_copies(1, 0.01)
              << " (exact failure " << qhe::exact_failure_prob(qhe::min_copies(1, 0.01), 1) << ")\n";
    auto counts = qhe::gate_counts(g);
    std::cout << "decryption cost: " << counts.u_dagger_cnots << " CNOTs + at most " << counts.permutation_swaps_max
              << " swaps, independent of the circuit\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  } catch (const BoundViolation& e) {
    std::cerr << "bound violation: " << e.what() << "\n";
    return kExitBoundViolation;
  } catch (const qhe::GuardExceeded& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
