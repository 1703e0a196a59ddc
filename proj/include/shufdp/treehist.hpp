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
// Succinct-histogram search: breadth-first traversal of the prefix tree of
// an L-bit domain, estimating frequencies of g-bit prefix extensions per
// level with a frequency oracle and keeping the top candidates.

#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shufdp/amplification.hpp"
#include "shufdp/errors.hpp"
#include "shufdp/mechanisms.hpp"
#include "shufdp/rng.hpp"

namespace shufdp {

enum class TreeHistMode {
  kShufflerSplit,  // all users report each round; budget split per round
  kLdpGroups       // disjoint user groups, full local budget per round
};

struct TreeHistConfig {
  uint32_t L = 48;
  uint32_t g = 8;
  uint32_t k = 32;
  uint32_t intermediate_k = 0;  // 0: use k at intermediate levels too
  // eps is a central budget (with delta) in shuffler mode, a local budget
  // in LDP-groups mode.
  double eps = 1.0;
  double delta = 1e-9;
  Mechanism estimator = Mechanism::kSolh;
  TreeHistMode mode = TreeHistMode::kShufflerSplit;
  // Non-interactive variant: users draw every round's report up front from
  // their own stream instead of waiting for the retained set.  The reports
  // are identical either way (a user's round-j report never depends on the
  // retained set, only its indexing does), so this flag affects scheduling
  // semantics, not estimates.
  bool non_interactive = false;
  uint64_t seed = 1;

  uint32_t rounds() const {
    if (g == 0 || L == 0 || L % g != 0)
      throw ConfigError("treehist: g must divide L");
    return L / g;
  }
};

struct PrefixCandidate {
  uint64_t prefix = 0;  // top (level * g) bits, right-aligned
  uint32_t level = 0;   // 1-based
  double estimate = 0;
};

struct CandidateDomain {
  Domain domain;                 // |retained| * 2^g + 1 (last index: dummy)
  std::vector<uint64_t> index_to_prefix;  // extension prefixes, by index
  std::unordered_map<uint64_t, uint64_t> prefix_to_index;
};

inline CandidateDomain candidate_domain(const std::vector<uint64_t>& retained,
                                        uint32_t g) {
  if (retained.empty()) throw InputError("treehist: empty retained set");
  if (g == 0 || g > 20) throw ConfigError("treehist: g out of range");
  uint64_t ext = uint64_t{1} << g;
  CandidateDomain cd;
  cd.domain.size = retained.size() * ext + 1;
  cd.index_to_prefix.reserve(retained.size() * ext);
  for (size_t i = 0; i < retained.size(); ++i) {
    for (uint64_t e = 0; e < ext; ++e) {
      uint64_t child = (retained[i] << g) | e;
      cd.index_to_prefix.push_back(child);
      cd.prefix_to_index.emplace(child, i * ext + e);
    }
  }
  return cd;
}

struct TreeHistResult {
  std::vector<PrefixCandidate> top;  // final-level strings with estimates
  bool truncated = false;  // k exceeded the candidate count at some level
};

namespace detail {

struct RoundBudget {
  double eps_l = 0;
  uint32_t d_prime = 0;  // 0 for GRR
};

// Local budget for one round's estimator at domain size d.
inline RoundBudget round_budget(const TreeHistConfig& cfg, uint64_t n,
                                uint64_t d, uint32_t rounds) {
  RoundBudget rb;
  if (cfg.mode == TreeHistMode::kLdpGroups) {
    rb.eps_l = cfg.eps;
    if (cfg.estimator == Mechanism::kSolh)
      rb.d_prime = uint32_t(std::min<uint64_t>(
          d, std::max<uint64_t>(2, uint64_t(std::exp(cfg.eps)) + 1)));
    return rb;
  }
  double eps_r = cfg.eps / rounds;
  double delta_r = cfg.delta / rounds;
  if (cfg.estimator == Mechanism::kGrr) {
    rb.eps_l = invert_amplification(AmplifyMethod::kGrr, eps_r, n, d, delta_r);
  } else {
    uint32_t dp = optimal_dprime(eps_r, n, delta_r);
    if (dp > d) dp = uint32_t(d);
    rb.d_prime = dp;
    rb.eps_l = invert_amplification(AmplifyMethod::kSolh, eps_r, n, dp, delta_r);
  }
  return rb;
}

inline std::vector<PrefixCandidate> top_candidates(
    const CandidateDomain& cd, const FrequencyVector& est, uint32_t level,
    uint32_t keep, bool& truncated) {
  size_t real = cd.index_to_prefix.size();
  std::vector<PrefixCandidate> all;
  all.reserve(real);
  for (size_t i = 0; i < real; ++i)
    all.push_back(PrefixCandidate{cd.index_to_prefix[i], level, est[i]});
  if (keep >= all.size()) truncated = truncated || keep > all.size();
  // tie-break: lexicographically smaller prefix wins
  std::sort(all.begin(), all.end(),
            [](const PrefixCandidate& a, const PrefixCandidate& b) {
              if (a.estimate != b.estimate) return a.estimate > b.estimate;
              return a.prefix < b.prefix;
            });
  if (all.size() > keep) all.resize(keep);
  return all;
}

}  // namespace detail

inline TreeHistResult treehist_run(const std::vector<uint64_t>& values,
                                   const TreeHistConfig& cfg) {
  uint32_t rounds = cfg.rounds();
  uint64_t n = values.size();
  if (n < 1) throw InputError("treehist: need at least one user");
  if (cfg.L < 64)
    for (uint64_t v : values)
      if (v >> cfg.L) throw InputError("treehist: value exceeds L bits");
  uint32_t inter_k = cfg.intermediate_k == 0 ? cfg.k : cfg.intermediate_k;

  // LDP-groups mode: disjoint groups of size floor(n/rounds).
  uint64_t group_size = n / rounds;
  if (cfg.mode == TreeHistMode::kLdpGroups && group_size == 0)
    throw InfeasibleError("treehist: fewer users than rounds", rounds);

  Rng master(cfg.seed);
  std::vector<uint64_t> retained{0};  // level-0 root: empty prefix
  TreeHistResult res;
  std::vector<PrefixCandidate> last_level;

  for (uint32_t j = 0; j < rounds; ++j) {
    CandidateDomain cd = candidate_domain(retained, cfg.g);
    uint64_t d = cd.domain.size;
    uint64_t dummy = d - 1;
    uint32_t level = j + 1;
    uint32_t prefix_bits = level * cfg.g;

    uint64_t lo = 0, hi = n;
    if (cfg.mode == TreeHistMode::kLdpGroups) {
      lo = uint64_t(j) * group_size;
      hi = (j + 1 == rounds) ? n : lo + group_size;
    }
    uint64_t n_round = hi - lo;

    detail::RoundBudget rb = detail::round_budget(cfg, n_round, d, rounds);

    std::vector<Report> reports;
    reports.reserve(n_round);
    if (cfg.estimator == Mechanism::kGrr) {
      GrrConfig gcfg(rb.eps_l, d);
      for (uint64_t i = lo; i < hi; ++i) {
        uint64_t pfx = values[i] >> (cfg.L - prefix_bits);
        auto it = cd.prefix_to_index.find(pfx);
        uint64_t idx = it == cd.prefix_to_index.end() ? dummy : it->second;
        Rng urng = master.derive(uint64_t(j) << 32 | i);
        reports.push_back(grr_perturb(idx, gcfg, urng));
      }
      FrequencyVector est = grr_aggregate(reports, gcfg);
      bool trunc = res.truncated;
      last_level = detail::top_candidates(
          cd, est, level, level == rounds ? cfg.k : inter_k, trunc);
      res.truncated = trunc;
    } else {
      SolhConfig scfg(rb.eps_l, d, rb.d_prime);
      for (uint64_t i = lo; i < hi; ++i) {
        uint64_t pfx = values[i] >> (cfg.L - prefix_bits);
        auto it = cd.prefix_to_index.find(pfx);
        uint64_t idx = it == cd.prefix_to_index.end() ? dummy : it->second;
        Rng urng = master.derive(uint64_t(j) << 32 | i);
        reports.push_back(solh_perturb(idx, scfg, urng));
      }
      FrequencyVector est = solh_aggregate(reports, scfg);
      bool trunc = res.truncated;
      last_level = detail::top_candidates(
          cd, est, level, level == rounds ? cfg.k : inter_k, trunc);
      res.truncated = trunc;
    }
    retained.clear();
    for (const PrefixCandidate& c : last_level) retained.push_back(c.prefix);
  }
  res.top = std::move(last_level);
  return res;
}

}  // namespace shufdp
