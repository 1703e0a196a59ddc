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
// End-to-end orchestration: users secret-share LDP reports (one share
// encrypted), shufflers inject uniform fake reports and run the encrypted
// oblivious shuffle, the server reconstructs, aggregates, and debiases.
// Also houses adversary-view extraction and two empirical checkers: fake-
// share poisoning resistance and an exhaustive small-instance privacy-loss
// oracle.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "shufdp/amplification.hpp"
#include "shufdp/crypto.hpp"
#include "shufdp/mechanisms.hpp"
#include "shufdp/shuffle.hpp"
#include "shufdp/transcript.hpp"

namespace shufdp {

// ---------------------------------------------------------------------------
// Report <-> residue mapping

// GRR reports ride as the bare value index; SOLH reports pack
// (seed | y << 32) into one 64-bit residue.  Decoding reduces mod the
// output-space size, so a uniform residue decodes to a (near-)uniform
// report: exactly what fake reports must look like.
inline uint64_t report_to_residue(const Report& rep) {
  if (const auto* g = std::get_if<GrrReport>(&rep)) return g->value;
  if (const auto* s = std::get_if<SolhReport>(&rep))
    return s->seed | (uint64_t(s->hashed) << 32);
  throw InputError("residue: bit-vector reports do not ride share columns");
}

inline Report residue_to_grr(uint64_t residue, uint64_t d) {
  return GrrReport{residue % d};
}

inline Report residue_to_solh(uint64_t residue, uint32_t d_prime) {
  return SolhReport{residue & 0xFFFFFFFFULL,
                    uint32_t((residue >> 32) % d_prime)};
}

// ---------------------------------------------------------------------------
// Debiasing

// Removes the expected mass of n_r uniform fake reports and rescales the
// estimate from n + n_r reports back to the n real users.  fake_mass is
// the expected calibrated estimate a single uniform fake contributes to
// one value: 1/d for GRR (a uniform fake looks like a uniform input), 0
// for SOLH (a uniform (seed, y) pair matches any value's hash with
// probability exactly 1/d', which the estimator maps to zero).
inline FrequencyVector debias_with_mass(const FrequencyVector& est, uint64_t n,
                                        uint64_t n_r, double fake_mass) {
  if (n < 1) throw InputError("debias: n must be >= 1");
  double scale = static_cast<double>(n + n_r) / static_cast<double>(n);
  double shift = static_cast<double>(n_r) / static_cast<double>(n) * fake_mass;
  FrequencyVector out(est.size());
  for (size_t v = 0; v < est.size(); ++v) out[v] = scale * est[v] - shift;
  return out;
}

inline FrequencyVector debias(const FrequencyVector& est, uint64_t n,
                              uint64_t n_r, uint64_t d) {
  return debias_with_mass(est, n, n_r, 1.0 / static_cast<double>(d));
}

// ---------------------------------------------------------------------------
// PEOS

using MechanismConfig = std::variant<GrrConfig, SolhConfig>;

struct PeosConfig {
  MechanismConfig mechanism;
  uint32_t r = 3;
  uint64_t n_r = 0;
  uint32_t ell = 64;
  uint64_t seed = 1;
};

struct PeosResult {
  FrequencyVector estimate;
  Transcript transcript;
};

namespace detail {

inline uint64_t mech_domain(const MechanismConfig& m) {
  if (const auto* g = std::get_if<GrrConfig>(&m)) return g->d;
  return std::get<SolhConfig>(m).d;
}

}  // namespace detail

// One full protocol run.  Party randomness derives from cfg.seed: users at
// child streams 1000000+i, shufflers at 1+k, the server at 0.  AHE key
// material is the caller's (the same `ahe` must decrypt server-side).
inline PeosResult peos_run(const std::vector<uint64_t>& values,
                           const PeosConfig& cfg, Ahe& ahe,
                           bool want_transcript = false) {
  if (cfg.r < 2) throw ConfigError("peos: r must be >= 2");
  if (cfg.ell != 64)
    throw ConfigError("peos: report residues require ell = 64");
  uint64_t d = detail::mech_domain(cfg.mechanism);
  for (uint64_t v : values)
    if (v >= d) throw InputError("peos: value out of domain");
  uint64_t n = values.size();
  if (n < 1) throw InputError("peos: need at least one user");

  Rng master(cfg.seed);
  std::vector<Rng> shuffler_rng;
  for (uint32_t k = 0; k < cfg.r; ++k) shuffler_rng.push_back(master.derive(1 + k));

  PeosResult res;
  Transcript* tr = want_transcript ? &res.transcript : nullptr;
  if (tr) {
    tr->party_seeds["server"] = master.derive(0).seed();
    for (uint32_t k = 0; k < cfg.r; ++k)
      tr->party_seeds[detail::party_name(k)] = shuffler_rng[k].seed();
  }

  uint64_t total = n + cfg.n_r;
  ShuffleState st;
  st.columns.assign(cfg.r, {});
  for (auto& c : st.columns) c.reserve(total);
  st.cipher_party = int(cfg.r) - 1;
  st.cipher_column.reserve(total);

  // Users: encode, split, encrypt the last share.
  uint64_t ct_bytes = 0;
  for (uint64_t i = 0; i < n; ++i) {
    Rng urng = master.derive(1000000 + i);
    if (tr) tr->party_seeds["user:" + std::to_string(i)] = urng.seed();
    Report report =
        std::holds_alternative<GrrConfig>(cfg.mechanism)
            ? grr_perturb(values[i], std::get<GrrConfig>(cfg.mechanism), urng)
            : solh_perturb(values[i], std::get<SolhConfig>(cfg.mechanism),
                           urng);
    uint64_t residue = report_to_residue(report);
    std::vector<uint64_t> shares = share(residue, cfg.r, cfg.ell, urng);
    for (uint32_t k = 0; k + 1 < cfg.r; ++k) st.columns[k].push_back(shares[k]);
    Ciphertext ct = ahe.encrypt(shares[cfg.r - 1], urng);
    if (ct_bytes == 0) ct_bytes = ahe.serialize(ct).size();
    st.cipher_column.push_back(std::move(ct));
    if (tr) {
      std::string user = "user:" + std::to_string(i);
      for (uint32_t k = 0; k + 1 < cfg.r; ++k)
        tr->log_sized(0, user, detail::party_name(k), "upload_share", 8,
                      splitmix64(shares[k]));
      tr->log_sized(0, user, detail::party_name(cfg.r - 1), "upload_share_enc",
                    ct_bytes, splitmix64(shares[cfg.r - 1]));
    }
  }

  // Shufflers: one fake-share column each; the last one encrypted.
  for (uint32_t k = 0; k + 1 < cfg.r; ++k) {
    for (uint64_t j = 0; j < cfg.n_r; ++j)
      st.columns[k].push_back(shuffler_rng[k].next_u64());
  }
  {
    Rng& last = shuffler_rng[cfg.r - 1];
    for (uint64_t j = 0; j < cfg.n_r; ++j) {
      uint64_t s = last.next_u64();
      st.cipher_column.push_back(ahe.encrypt(s, last));
    }
  }

  ShuffleConfig scfg{cfg.r, cfg.ell};
  eos(st, scfg, ahe, shuffler_rng, tr);

  // Server: decrypt, reconstruct, decode, aggregate, debias.
  std::vector<uint64_t> residues = reconstruct_state(st, cfg.ell, &ahe);
  if (residues.size() != total)
    throw ProtocolError("server", "report count mismatch");
  std::vector<Report> reports;
  reports.reserve(total);
  FrequencyVector est;
  double fake_mass;
  if (const auto* g = std::get_if<GrrConfig>(&cfg.mechanism)) {
    for (uint64_t x : residues) reports.push_back(residue_to_grr(x, g->d));
    est = grr_aggregate(reports, *g);
    fake_mass = 1.0 / static_cast<double>(g->d);
  } else {
    const auto& s = std::get<SolhConfig>(cfg.mechanism);
    for (uint64_t x : residues) reports.push_back(residue_to_solh(x, s.d_prime));
    est = solh_aggregate(reports, s);
    fake_mass = 0.0;
  }
  res.estimate = debias_with_mass(est, n, cfg.n_r, fake_mass);
  if (tr) res.transcript.output = residues;
  return res;
}

// ---------------------------------------------------------------------------
// Adversary views

struct AdversaryView {
  AdversaryModel model = AdversaryModel::kServer;
  std::vector<Message> messages;
  std::vector<std::string> visible_tapes;
  bool degraded = false;  // majority of shufflers corrupted
};

inline AdversaryView extract_view(const Transcript& t, AdversaryModel model,
                                  const std::set<std::string>& corrupted = {},
                                  const std::string& victim = "") {
  uint32_t shuffler_count = 0;
  for (const auto& [name, seed] : t.party_seeds)
    if (name.rfind("shuffler:", 0) == 0) ++shuffler_count;
  for (const std::string& c : corrupted)
    if (t.party_seeds.find(c) == t.party_seeds.end())
      throw InputError("extract_view: unknown party " + c);

  AdversaryView view;
  view.model = model;
  std::set<std::string> vis;
  vis.insert("server");
  if (model == AdversaryModel::kServerPlusUsers) {
    for (const auto& [name, seed] : t.party_seeds)
      if (name.rfind("user:", 0) == 0 && name != victim) vis.insert(name);
  }
  uint32_t bad_shufflers = 0;
  if (model == AdversaryModel::kServerPlusAux) {
    for (const std::string& c : corrupted) {
      vis.insert(c);
      if (c.rfind("shuffler:", 0) == 0) ++bad_shufflers;
    }
    view.degraded = bad_shufflers > shuffler_count / 2;
  }
  for (const std::string& p : vis)
    if (t.party_seeds.count(p)) view.visible_tapes.push_back(p);
  for (const Message& m : t.messages)
    if (vis.count(m.from) || vis.count(m.to)) view.messages.push_back(m);
  return view;
}

// ---------------------------------------------------------------------------
// Poisoning resistance

struct PoisoningReport {
  double p_value = 0;
  bool uniform = false;
  bool vacuous = false;  // no honest shuffler: nothing to test
  std::vector<uint64_t> bucket_counts;
};

// Each trial reconstructs one fake report from r share contributions;
// adversarial shufflers emit strategy-chosen shares, honest ones uniform.
// With at least one honest contribution the reconstruction must stay
// uniform (chi-square over `buckets` residue classes).
inline PoisoningReport poisoning_resistance_check(
    uint32_t r, const std::set<uint32_t>& adversarial,
    const std::function<uint64_t(uint32_t shuffler, uint64_t trial)>& strategy,
    uint64_t trials, uint64_t seed, uint32_t ell = 64, uint32_t buckets = 16) {
  PoisoningReport rep;
  rep.bucket_counts.assign(buckets, 0);
  bool any_honest = false;
  for (uint32_t k = 0; k < r; ++k)
    if (!adversarial.count(k)) any_honest = true;
  rep.vacuous = !any_honest;
  uint64_t mask = share_mask(ell);
  Rng rng(seed);
  for (uint64_t tr = 0; tr < trials; ++tr) {
    uint64_t sum = 0;
    for (uint32_t k = 0; k < r; ++k) {
      uint64_t s = adversarial.count(k) ? strategy(k, tr) : rng.next_u64();
      sum = (sum + s) & mask;
    }
    rep.bucket_counts[sum % buckets]++;
  }
  double expected = double(trials) / buckets;
  double chi2 = 0;
  for (uint64_t c : rep.bucket_counts) {
    double dmc = double(c) - expected;
    chi2 += dmc * dmc / expected;
  }
  boost::math::chi_squared dist(buckets - 1);
  rep.p_value = boost::math::cdf(boost::math::complement(dist, chi2));
  rep.uniform = rep.p_value > 0.01;
  return rep;
}

// ---------------------------------------------------------------------------
// Small-instance privacy-loss oracle

struct PrivacyLossResult {
  double divergence = 0;
  bool refused = false;
  double space_size = 0;
};

namespace detail {

inline double output_space_size(const MechanismConfig& m) {
  if (const auto* g = std::get_if<GrrConfig>(&m)) return double(g->d);
  const auto& s = std::get<SolhConfig>(m);
  return double(s.family.seed_count) * double(s.d_prime);
}

// Exact single-user output distribution as (output id, probability).
inline std::vector<double> report_distribution(const MechanismConfig& m,
                                               uint64_t v, size_t& out_count) {
  if (const auto* g = std::get_if<GrrConfig>(&m)) {
    out_count = g->d;
    std::vector<double> probs(g->d, g->q());
    probs[v] = g->p();
    return probs;
  }
  const auto& s = std::get<SolhConfig>(m);
  out_count = size_t(s.family.seed_count) * s.d_prime;
  std::vector<double> probs(out_count, 0.0);
  double p = s.p();
  double other = (1.0 - p) / (s.d_prime - 1);
  for (uint64_t seed = 0; seed < s.family.seed_count; ++seed) {
    uint32_t hv = s.family.fn(seed, v, s.d_prime);
    for (uint32_t y = 0; y < s.d_prime; ++y) {
      probs[seed * s.d_prime + y] =
          (y == hv ? p : other) / double(s.family.seed_count);
    }
  }
  return probs;
}

inline void multiset_enumerate(const std::vector<std::vector<double>>& per_user,
                               size_t out_count, size_t user, double prob,
                               std::vector<uint32_t>& counts,
                               std::map<std::vector<uint32_t>, double>& acc) {
  if (prob == 0) return;
  if (user == per_user.size()) {
    acc[counts] += prob;
    return;
  }
  for (size_t o = 0; o < out_count; ++o) {
    double p = per_user[user][o];
    if (p == 0) continue;
    counts[o]++;
    multiset_enumerate(per_user, out_count, user + 1, prob * p, counts, acc);
    counts[o]--;
  }
}

}  // namespace detail

// Hockey-stick divergence at threshold e^eps between the shuffled-output
// (multiset) distributions induced by two neighboring input vectors, by
// exhaustive enumeration.  Refuses when the product space exceeds the cap.
inline PrivacyLossResult privacy_loss_oracle(
    const MechanismConfig& mech, const std::vector<uint64_t>& inputs_a,
    const std::vector<uint64_t>& inputs_b, double eps,
    double space_cap = 1e7) {
  if (inputs_a.size() != inputs_b.size())
    throw InputError("privacy oracle: input vectors must have equal length");
  size_t n = inputs_a.size();
  PrivacyLossResult res;
  res.space_size = std::pow(detail::output_space_size(mech), double(n));
  if (res.space_size > space_cap) {
    res.refused = true;
    return res;
  }
  size_t out_count = 0;
  auto dist_of = [&](const std::vector<uint64_t>& inputs) {
    std::vector<std::vector<double>> per_user;
    for (uint64_t v : inputs) {
      size_t oc = 0;
      per_user.push_back(detail::report_distribution(mech, v, oc));
      out_count = oc;
    }
    std::map<std::vector<uint32_t>, double> acc;
    std::vector<uint32_t> counts(out_count, 0);
    detail::multiset_enumerate(per_user, out_count, 0, 1.0, counts, acc);
    return acc;
  };
  auto pa = dist_of(inputs_a), pb = dist_of(inputs_b);
  double thresh = std::exp(eps);
  double div = 0;
  for (const auto& [key, p] : pa) {
    auto it = pb.find(key);
    double q = it == pb.end() ? 0.0 : it->second;
    div += std::max(0.0, p - thresh * q);
  }
  res.divergence = div;
  return res;
}

}  // namespace shufdp
