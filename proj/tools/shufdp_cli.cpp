// Copyright 2026 The shufdp Authors
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
//
// Command-line front end.  Every subcommand echoes its inputs into the
// emitted JSON so a result file is self-describing, and all randomness
// flows from --seed: a rerun with the same flags is byte-identical.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "shufdp/amplification.hpp"
#include "shufdp/crypto.hpp"
#include "shufdp/data.hpp"
#include "shufdp/experiment.hpp"
#include "shufdp/mechanisms.hpp"
#include "shufdp/onion.hpp"
#include "shufdp/protocol.hpp"
#include "shufdp/shuffle.hpp"
#include "shufdp/treehist.hpp"

namespace {

using nlohmann::json;

void emit(const json& j, const std::string& output) {
  std::string text = j.dump() + "\n";
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw shufdp::ResourceError("cannot open output file: " + output);
  out << text;
}

// Dataset for one-shot runs: a CSV when given, synthetic Zipf otherwise.
std::vector<uint64_t> load_values(const std::string& input, uint64_t n,
                                  uint64_t d, uint64_t seed, uint64_t* d_out) {
  if (!input.empty()) {
    shufdp::Dataset ds = shufdp::ingest_csv(input);
    *d_out = ds.domain.size;
    return ds.values;
  }
  *d_out = d;
  return shufdp::gen_zipf(n, d, 1.1, seed);
}

// One raw integer per line, decimal or 0x-hex; used where values are L-bit
// strings rather than categorical labels.
std::vector<uint64_t> load_integers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw shufdp::InputError("cannot open input file: " + path);
  std::vector<uint64_t> out;
  std::string line;
  uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      out.push_back(std::stoull(line, nullptr, 0));
    } catch (const std::exception&) {
      throw shufdp::InputError("line " + std::to_string(lineno) +
                               ": not an integer: " + line);
    }
  }
  if (out.empty()) throw shufdp::InputError("empty input file: " + path);
  return out;
}

// Spec files are flat key = value lines; '#' starts a comment, lists are
// comma separated, strings may be double-quoted.
shufdp::ExperimentSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw shufdp::InputError("cannot open spec file: " + path);
  shufdp::ExperimentSpec spec;
  std::string line;
  uint64_t lineno = 0;
  auto strip = [](std::string s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return std::string();
    size_t b = s.find_last_not_of(" \t");
    s = s.substr(a, b - a + 1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
      s = s.substr(1, s.size() - 2);
    return s;
  };
  auto split_list = [&](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = strip(item);
      if (!item.empty()) parts.push_back(item);
    }
    return parts;
  };
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (strip(line).empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw shufdp::InputError("spec line " + std::to_string(lineno) +
                               ": expected key = value");
    std::string key = strip(line.substr(0, eq));
    std::string val = strip(line.substr(eq + 1));
    try {
      if (key == "n") spec.n = std::stoull(val);
      else if (key == "d") spec.d = std::stoull(val);
      else if (key == "zipf_exponent") spec.zipf_exponent = std::stod(val);
      else if (key == "csv") spec.csv_path = val;
      else if (key == "methods") spec.methods = split_list(val);
      else if (key == "eps_c_grid") {
        spec.eps_c_grid.clear();
        for (const std::string& s : split_list(val))
          spec.eps_c_grid.push_back(std::stod(s));
      } else if (key == "delta") spec.delta = std::stod(val);
      else if (key == "reps" || key == "repetitions")
        spec.repetitions = uint32_t(std::stoul(val));
      else if (key == "seed") spec.seed = std::stoull(val);
      else if (key == "output_prefix") spec.output_prefix = val;
      else
        throw shufdp::InputError("unknown key: " + key);
    } catch (const shufdp::InputError&) {
      throw;
    } catch (const std::exception&) {
      throw shufdp::InputError("spec line " + std::to_string(lineno) +
                               ": bad value for " + key);
    }
  }
  return spec;
}

shufdp::AmplifyMethod parse_method(const std::string& name) {
  if (name == "grr") return shufdp::AmplifyMethod::kGrr;
  if (name == "solh") return shufdp::AmplifyMethod::kSolh;
  if (name == "ue") return shufdp::AmplifyMethod::kUe;
  throw shufdp::InputError("unknown mechanism: " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shufdp: shuffler-model differential privacy toolkit"};
  app.require_subcommand(1);

  // Shared option storage; each subcommand registers the flags it uses.
  std::string mechanism = "grr", input, output, protocol = "peos",
              mode = "shuffler";
  double eps_c = 0, eps_l = 0, eps_s = 0, delta = 1e-9, zipf = 1.1;
  uint64_t n = 10000, d = 100, n_r = 0, seed = 1;
  uint32_t r = 3, d_prime = 0, reps = 10, L = 16, g = 8, k = 32,
           paillier_bits = 0;
  bool clip = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "master rng seed");
    sub->add_option("--output", output, "output file (default: stdout)");
  };

  // mechanism: one-shot perturb + aggregate over a dataset.
  CLI::App* cmd_mech =
      app.add_subcommand("mechanism", "perturb a dataset and aggregate");
  cmd_mech->add_option("--mechanism", mechanism, "grr|solh|ue|aue");
  cmd_mech->add_option("--eps-l", eps_l, "local budget (grr/solh/ue)");
  cmd_mech->add_option("--eps-c", eps_c, "central budget (aue)");
  cmd_mech->add_option("--delta", delta, "delta (aue)");
  cmd_mech->add_option("--n", n, "synthetic dataset size");
  cmd_mech->add_option("--d", d, "domain size");
  cmd_mech->add_option("--d-prime", d_prime, "hash range (solh)");
  cmd_mech->add_option("--zipf", zipf, "synthetic Zipf exponent");
  cmd_mech->add_option("--input", input, "CSV dataset (one value per line)");
  cmd_mech->add_flag("--clip", clip, "clip estimate to [0,1] and renormalize");
  add_common(cmd_mech);

  // amplify: closed-form bounds, forward or inverted.
  CLI::App* cmd_amp =
      app.add_subcommand("amplify", "shuffle amplification bounds");
  cmd_amp->add_option("--mechanism", mechanism, "grr|solh|ue");
  cmd_amp->add_option("--eps-l", eps_l, "local budget (forward direction)");
  cmd_amp->add_option("--eps-c", eps_c, "central target (inverts to eps_l)");
  cmd_amp->add_option("--delta", delta, "delta");
  cmd_amp->add_option("--n", n, "number of users");
  cmd_amp->add_option("--d", d, "domain size (grr)");
  cmd_amp->add_option("--d-prime", d_prime, "hash range (solh)");
  cmd_amp->add_option("--output", output, "output file (default: stdout)");

  // plan: full parameter planner against the three adversary targets.
  CLI::App* cmd_plan =
      app.add_subcommand("plan", "choose mechanism, eps_l, n_r, d'");
  cmd_plan->add_option("--eps-c", eps_c, "target against the server")
      ->required();
  cmd_plan->add_option("--eps-s", eps_s,
                       "target against server + users (0: unconstrained)");
  cmd_plan->add_option("--eps-l", eps_l,
                       "cap on the local budget (0: unconstrained)");
  cmd_plan->add_option("--delta", delta, "delta");
  cmd_plan->add_option("--n", n, "number of users");
  cmd_plan->add_option("--d", d, "domain size");
  cmd_plan->add_option("--output", output, "output file (default: stdout)");

  // simulate: end-to-end multi-party runs.
  CLI::App* cmd_sim =
      app.add_subcommand("simulate", "run peos, ss, or oblivious shuffle");
  cmd_sim->add_option("--protocol", protocol, "peos|ss|os");
  cmd_sim->add_option("--mechanism", mechanism, "grr|solh (peos)");
  cmd_sim->add_option("--eps-l", eps_l, "local budget (peos)");
  cmd_sim->add_option("--n", n, "number of users");
  cmd_sim->add_option("--d", d, "domain size");
  cmd_sim->add_option("--d-prime", d_prime, "hash range (solh)");
  cmd_sim->add_option("--r", r, "number of shufflers / relays");
  cmd_sim->add_option("--n-r", n_r, "fake reports");
  cmd_sim->add_option("--zipf", zipf, "synthetic Zipf exponent");
  cmd_sim->add_option("--input", input, "CSV dataset");
  cmd_sim->add_option("--paillier-bits", paillier_bits,
                      "use real AHE with this modulus size (0: test double)");
  add_common(cmd_sim);

  // treehist: heavy-hitter search over an L-bit domain.
  CLI::App* cmd_th =
      app.add_subcommand("treehist", "prefix-tree heavy hitter search");
  cmd_th->add_option("--eps-c", eps_c, "total privacy budget")->required();
  cmd_th->add_option("--delta", delta, "delta (shuffler mode)");
  cmd_th->add_option("--bits", L, "value length L in bits");
  cmd_th->add_option("--group-bits", g, "bits revealed per round");
  cmd_th->add_option("--top-k", k, "candidates kept per round");
  cmd_th->add_option("--mode", mode, "shuffler|ldp");
  cmd_th->add_option("--mechanism", mechanism, "grr|solh estimator");
  cmd_th->add_option("--n", n, "synthetic dataset size");
  cmd_th->add_option("--input", input, "integer dataset, one value per line");
  add_common(cmd_th);

  // experiment: grid runner from a spec file.
  CLI::App* cmd_exp = app.add_subcommand("experiment", "run a grid spec file");
  cmd_exp->add_option("--input", input, "key = value spec file")->required();
  cmd_exp->add_option("--reps", reps, "override repetitions");
  cmd_exp->add_option("--seed", seed, "override seed");
  cmd_exp->add_option("--output", output, "override output prefix");

  // overhead: structural communication accounting of a peos transcript.
  CLI::App* cmd_ovh =
      app.add_subcommand("overhead", "per-party byte accounting of peos");
  cmd_ovh->add_option("--eps-l", eps_l, "local budget");
  cmd_ovh->add_option("--n", n, "number of users");
  cmd_ovh->add_option("--d", d, "domain size");
  cmd_ovh->add_option("--r", r, "number of shufflers");
  cmd_ovh->add_option("--n-r", n_r, "fake reports");
  add_common(cmd_ovh);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_mech) {
      uint64_t dd = d;
      auto values = load_values(input, n, d, seed, &dd);
      shufdp::FrequencyVector truth =
          shufdp::empirical_frequencies(values, dd);
      shufdp::Rng rng(seed);
      shufdp::FrequencyVector est;
      if (mechanism == "grr") {
        shufdp::GrrConfig cfg(eps_l, dd);
        std::vector<shufdp::Report> reports;
        for (uint64_t v : values)
          reports.push_back(shufdp::grr_perturb(v, cfg, rng));
        est = shufdp::grr_aggregate(reports, cfg);
      } else if (mechanism == "solh") {
        uint32_t dp = d_prime ? d_prime : 16;
        shufdp::SolhConfig cfg(eps_l, dd, dp);
        std::vector<shufdp::Report> reports;
        for (uint64_t v : values)
          reports.push_back(shufdp::solh_perturb(v, cfg, rng));
        est = shufdp::solh_aggregate(reports, cfg);
      } else if (mechanism == "ue") {
        shufdp::UeConfig cfg(eps_l, dd);
        std::vector<shufdp::Report> reports;
        for (uint64_t v : values)
          reports.push_back(shufdp::ue_perturb(v, cfg, rng));
        est = shufdp::ue_aggregate(reports, cfg);
      } else if (mechanism == "aue") {
        shufdp::AueConfig cfg(eps_c, values.size(), delta, dd);
        std::vector<shufdp::Report> reports;
        for (uint64_t v : values)
          reports.push_back(shufdp::aue_encode(v, cfg, rng));
        est = shufdp::aue_aggregate(reports, cfg);
      } else {
        throw shufdp::InputError("unknown mechanism: " + mechanism);
      }
      if (clip) est = shufdp::clip_and_renormalize(est);
      emit(json{{"command", "mechanism"},
                {"mechanism", mechanism},
                {"eps_l", eps_l},
                {"eps_c", eps_c},
                {"delta", delta},
                {"n", values.size()},
                {"d", dd},
                {"d_prime", d_prime},
                {"seed", seed},
                {"input", input},
                {"clip", clip},
                {"mse", shufdp::mse(truth, est)},
                {"estimate_digest", shufdp::detail::freq_digest(est)}},
           output);
    } else if (*cmd_amp) {
      shufdp::AmplifyMethod m = parse_method(mechanism);
      uint64_t D = mechanism == "solh" ? (d_prime ? d_prime : 16) : d;
      json j{{"command", "amplify"}, {"mechanism", mechanism},
             {"delta", delta},      {"n", n},
             {"d", d},              {"d_prime", d_prime}};
      if (eps_l > 0) {
        shufdp::AmplifyResult res = shufdp::amplify(m, eps_l, n, D, delta);
        j["eps_l"] = eps_l;
        j["eps_c"] = res.eps_c;
        j["eps_c_raw"] = res.raw;
        j["amplified"] = res.amplified;
      } else if (eps_c > 0) {
        j["eps_c"] = eps_c;
        j["eps_l"] = shufdp::invert_amplification(m, eps_c, n, D, delta);
      } else {
        throw shufdp::InputError("amplify: give --eps-l or --eps-c");
      }
      emit(j, output);
    } else if (*cmd_plan) {
      double eps2 = eps_s > 0 ? eps_s : shufdp::kInf;
      double eps3 = eps_l > 0 ? eps_l : shufdp::kInf;
      shufdp::PlanResult plan =
          shufdp::plan_parameters(eps_c, eps2, eps3, n, d, delta);
      emit(json{{"command", "plan"},
                {"eps_c_target", eps_c},
                {"eps_s_target", eps_s},
                {"eps_l_cap", eps_l},
                {"delta", delta},
                {"n", n},
                {"d", d},
                {"mechanism",
                 plan.mechanism == shufdp::Mechanism::kGrr ? "grr" : "solh"},
                {"eps_l", plan.eps_l},
                {"n_r", plan.n_r},
                {"d_prime", plan.d_prime},
                {"variance", plan.variance},
                {"achieved_eps_c", plan.achieved_eps_c},
                {"achieved_eps_s", plan.achieved_eps_s},
                {"achieved_eps_l", plan.achieved_eps_l}},
           output);
    } else if (*cmd_sim) {
      if (protocol == "peos") {
        uint64_t dd = d;
        auto values = load_values(input, n, d, seed, &dd);
        shufdp::FrequencyVector truth =
            shufdp::empirical_frequencies(values, dd);
        shufdp::MechanismConfig mech =
            mechanism == "grr"
                ? shufdp::MechanismConfig(shufdp::GrrConfig(eps_l, dd))
                : shufdp::MechanismConfig(shufdp::SolhConfig(
                      eps_l, dd, d_prime ? d_prime : 16));
        shufdp::PeosConfig cfg{mech, r, n_r, 64, seed};
        shufdp::PeosResult res;
        if (paillier_bits > 0) {
          shufdp::Rng key_rng(seed ^ 0x9E3779B97F4A7C15ULL);
          shufdp::PaillierAhe ahe(paillier_bits, 64, key_rng);
          res = shufdp::peos_run(values, cfg, ahe, true);
        } else {
          shufdp::IdentityAhe ahe(64);
          res = shufdp::peos_run(values, cfg, ahe, true);
        }
        shufdp::OverheadReport rep = shufdp::overhead_report(res.transcript);
        uint64_t total_bytes = 0;
        for (const auto& [party, bytes] : rep.bytes_sent) total_bytes += bytes;
        emit(json{{"command", "simulate"},
                  {"protocol", protocol},
                  {"mechanism", mechanism},
                  {"eps_l", eps_l},
                  {"n", values.size()},
                  {"d", dd},
                  {"d_prime", d_prime},
                  {"r", r},
                  {"n_r", n_r},
                  {"seed", seed},
                  {"paillier_bits", paillier_bits},
                  {"mse", shufdp::mse(truth, res.estimate)},
                  {"estimate_digest",
                   shufdp::detail::freq_digest(res.estimate)},
                  {"shuffle_rounds", rep.shuffle_rounds},
                  {"total_bytes", total_bytes}},
             output);
      } else if (protocol == "ss") {
        shufdp::Rng rng(seed);
        std::vector<shufdp::BoxKeyPair> keys;
        std::vector<std::array<uint8_t, crypto_box_PUBLICKEYBYTES>> pks;
        for (uint32_t j = 0; j < r; ++j) {
          keys.push_back(shufdp::box_keypair(rng));
          pks.push_back(keys.back().pk);
        }
        std::vector<std::vector<uint8_t>> envelopes;
        for (uint64_t i = 0; i < n; ++i) {
          std::vector<uint8_t> payload(8);
          for (int b = 0; b < 8; ++b) payload[b] = uint8_t(i >> (8 * b));
          envelopes.push_back(shufdp::onion_encrypt(payload, pks));
        }
        shufdp::Transcript tr;
        auto out = shufdp::sequential_shuffle(envelopes, keys, n_r, rng,
                                              shufdp::default_fake_payload,
                                              &tr);
        std::vector<uint8_t> flat;
        for (const auto& p : out) flat.insert(flat.end(), p.begin(), p.end());
        emit(json{{"command", "simulate"},
                  {"protocol", protocol},
                  {"n", n},
                  {"r", r},
                  {"n_r", n_r},
                  {"seed", seed},
                  {"outputs", out.size()},
                  {"output_digest", shufdp::digest_hex(flat)}},
             output);
      } else if (protocol == "os") {
        shufdp::Rng rng(seed);
        std::vector<uint64_t> secrets(n);
        for (auto& v : secrets) v = rng.next_u64();
        shufdp::ShuffleState st;
        st.columns.assign(r, std::vector<uint64_t>(n));
        for (uint64_t i = 0; i < n; ++i) {
          auto s = shufdp::share(secrets[i], r, 64, rng);
          for (uint32_t j = 0; j < r; ++j) st.columns[j][i] = s[j];
        }
        shufdp::ShuffleConfig cfg{r, 64};
        std::vector<shufdp::Rng> rngs;
        shufdp::Rng master(seed ^ 1);
        for (uint32_t j = 0; j < r; ++j) rngs.push_back(master.derive(j));
        shufdp::oblivious_shuffle(st, cfg, rngs);
        auto out = shufdp::reconstruct_state(st, 64, nullptr);
        std::vector<uint8_t> flat;
        for (uint64_t v : out)
          for (int b = 0; b < 8; ++b) flat.push_back(uint8_t(v >> (8 * b)));
        emit(json{{"command", "simulate"},
                  {"protocol", protocol},
                  {"n", n},
                  {"r", r},
                  {"seed", seed},
                  {"output_digest", shufdp::digest_hex(flat)}},
             output);
      } else {
        throw shufdp::InputError("unknown protocol: " + protocol);
      }
    } else if (*cmd_th) {
      std::vector<uint64_t> values;
      if (!input.empty()) {
        values = load_integers(input);
      } else {
        values = shufdp::gen_zipf(n, uint64_t{1} << L, zipf, seed);
      }
      shufdp::TreeHistConfig cfg;
      cfg.L = L;
      cfg.g = g;
      cfg.k = k;
      cfg.eps = eps_c;
      cfg.delta = delta;
      cfg.seed = seed;
      cfg.mode = mode == "ldp" ? shufdp::TreeHistMode::kLdpGroups
                               : shufdp::TreeHistMode::kShufflerSplit;
      // GRR cannot span the per-round candidate domains at realistic budgets,
      // so the estimator defaults to SOLH unless explicitly overridden.
      cfg.estimator = cmd_th->count("--mechanism") && mechanism == "grr"
                          ? shufdp::Mechanism::kGrr
                          : shufdp::Mechanism::kSolh;
      shufdp::TreeHistResult res = shufdp::treehist_run(values, cfg);
      json top = json::array();
      for (const auto& c : res.top) {
        char hex[32];
        snprintf(hex, sizeof(hex), "0x%llx", (unsigned long long)c.prefix);
        top.push_back(json::array({std::string(hex), c.estimate}));
      }
      emit(json{{"command", "treehist"},
                {"eps_c", eps_c},
                {"delta", delta},
                {"bits", L},
                {"group_bits", g},
                {"top_k", k},
                {"mode", mode},
                {"mechanism",
                 cfg.estimator == shufdp::Mechanism::kGrr ? "grr" : "solh"},
                {"n", values.size()},
                {"seed", seed},
                {"truncated", res.truncated},
                {"top", top}},
           output);
    } else if (*cmd_exp) {
      shufdp::ExperimentSpec spec = parse_spec_file(input);
      if (cmd_exp->count("--reps")) spec.repetitions = reps;
      if (cmd_exp->count("--seed")) spec.seed = seed;
      if (cmd_exp->count("--output")) spec.output_prefix = output;
      auto records = shufdp::run_experiment(spec);
      uint64_t skipped = 0;
      for (const auto& rec : records) skipped += rec.skipped;
      json j{{"command", "experiment"},
             {"spec", input},
             {"records", records.size()},
             {"skipped_cells", skipped}};
      if (!spec.output_prefix.empty()) {
        j["jsonl"] = spec.output_prefix + ".jsonl";
        j["csv"] = spec.output_prefix + ".csv";
      }
      std::cout << j.dump() << "\n";
    } else if (*cmd_ovh) {
      uint64_t dd = d;
      auto values = load_values("", n, d, seed, &dd);
      shufdp::PeosConfig cfg{
          shufdp::GrrConfig(eps_l > 0 ? eps_l : 1.0, dd), r, n_r, 64, seed};
      shufdp::IdentityAhe ahe(64);
      shufdp::PeosResult res = shufdp::peos_run(values, cfg, ahe, true);
      shufdp::OverheadReport rep = shufdp::overhead_report(res.transcript);
      json bytes;
      uint64_t total = 0, user_total = 0;
      for (const auto& [party, b] : rep.bytes_sent) {
        total += b;
        if (party.rfind("user:", 0) == 0)
          user_total += b;
        else
          bytes[party] = b;
      }
      bytes["users_total"] = user_total;
      emit(json{{"command", "overhead"},
                {"n", n},
                {"d", dd},
                {"r", r},
                {"n_r", n_r},
                {"seed", seed},
                {"shuffle_rounds", rep.shuffle_rounds},
                {"user_plain_upload_bytes", rep.user_plain_upload_bytes},
                {"user_cipher_upload_bytes", rep.user_cipher_upload_bytes},
                {"user_plain_share_messages", rep.user_plain_share_messages},
                {"total_bytes", total},
                {"bytes_sent", bytes}},
           output);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
