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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "shufdp/treehist.hpp"

namespace shufdp {
namespace {

// ---------------------------------------------------------------------------
// Candidate domains

TEST(CandidateDomain, SizesMatchFormula) {
  CandidateDomain a = candidate_domain({0}, 8);
  EXPECT_EQ(a.domain.size, 257u);  // 1 * 2^8 + 1 dummy
  CandidateDomain b = candidate_domain({0}, 1);
  EXPECT_EQ(b.domain.size, 3u);
  CandidateDomain c = candidate_domain({1, 5, 9}, 4);
  EXPECT_EQ(c.domain.size, 3u * 16 + 1);
}

TEST(CandidateDomain, IndexMapIsBijective) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    std::set<uint64_t> retained_set;
    while (retained_set.size() < 5) retained_set.insert(rng.below(1000));
    std::vector<uint64_t> retained(retained_set.begin(), retained_set.end());
    uint32_t g = 1 + trial % 6;
    CandidateDomain cd = candidate_domain(retained, g);
    ASSERT_EQ(cd.index_to_prefix.size(), cd.prefix_to_index.size());
    for (size_t i = 0; i < cd.index_to_prefix.size(); ++i)
      EXPECT_EQ(cd.prefix_to_index.at(cd.index_to_prefix[i]), i);
  }
}

TEST(CandidateDomain, RejectsBadArguments) {
  EXPECT_THROW(candidate_domain({}, 4), InputError);
  EXPECT_THROW(candidate_domain({0}, 0), ConfigError);
  EXPECT_THROW(candidate_domain({0}, 21), ConfigError);
}

// ---------------------------------------------------------------------------
// Configuration

TEST(TreeHistConfig, RoundsRequireDivisibility) {
  TreeHistConfig cfg;
  cfg.L = 16;
  cfg.g = 8;
  EXPECT_EQ(cfg.rounds(), 2u);
  cfg.g = 5;
  EXPECT_THROW(cfg.rounds(), ConfigError);
}

TEST(TreeHist, ValueExceedingLBitsRejected) {
  TreeHistConfig cfg;
  cfg.L = 8;
  cfg.g = 8;
  cfg.mode = TreeHistMode::kLdpGroups;
  cfg.eps = 4;
  EXPECT_THROW(treehist_run({uint64_t{1} << 10}, cfg), InputError);
}

TEST(TreeHist, LdpModeNeedsOneUserPerGroup) {
  TreeHistConfig cfg;
  cfg.L = 16;
  cfg.g = 8;
  cfg.mode = TreeHistMode::kLdpGroups;
  cfg.eps = 4;
  EXPECT_THROW(treehist_run({0}, cfg), InfeasibleError);
}

// ---------------------------------------------------------------------------
// Budget accounting

TEST(TreeHistBudget, ShufflerSplitSumsToCentralBudget) {
  TreeHistConfig cfg;
  cfg.L = 16;
  cfg.g = 8;
  cfg.eps = 1.0;
  cfg.delta = 1e-9;
  const uint64_t n = 50000;
  uint32_t rounds = cfg.rounds();
  for (uint64_t d : {257u, 8193u}) {
    detail::RoundBudget rb = detail::round_budget(cfg, n, d, rounds);
    ASSERT_GE(rb.d_prime, 2u);
    EXPECT_LE(rb.d_prime, d);
    // Per-round central budget is eps/rounds at delta/rounds; the local
    // budget must amplify back to it.
    AmplifyResult back = amplify(AmplifyMethod::kSolh, rb.eps_l, n,
                                 rb.d_prime, cfg.delta / rounds);
    EXPECT_NEAR(back.eps_c, cfg.eps / rounds, 1e-9);
  }
}

TEST(TreeHistBudget, LdpGroupsUseFullLocalBudget) {
  TreeHistConfig cfg;
  cfg.L = 16;
  cfg.g = 8;
  cfg.eps = 2.5;
  cfg.mode = TreeHistMode::kLdpGroups;
  detail::RoundBudget rb = detail::round_budget(cfg, 1000, 257, 2);
  EXPECT_DOUBLE_EQ(rb.eps_l, 2.5);
  // d' near e^eps + 1, capped by d.
  EXPECT_EQ(rb.d_prime, uint32_t(std::exp(2.5)) + 1);
}

// ---------------------------------------------------------------------------
// Recovery

TEST(TreeHist, AllSameValueIsTopCandidate) {
  TreeHistConfig cfg;
  cfg.L = 16;
  cfg.g = 8;
  cfg.k = 4;
  cfg.eps = 8;
  cfg.mode = TreeHistMode::kLdpGroups;
  cfg.estimator = Mechanism::kGrr;
  cfg.seed = 5;
  std::vector<uint64_t> values(600, 0xABCD);
  TreeHistResult res = treehist_run(values, cfg);
  ASSERT_FALSE(res.top.empty());
  EXPECT_EQ(res.top[0].prefix, 0xABCDu);
  EXPECT_EQ(res.top[0].level, 2u);
  EXPECT_GT(res.top[0].estimate, 0.5);
}

TEST(TreeHist, SingleRoundDegenerateCase) {
  TreeHistConfig cfg;
  cfg.L = 8;
  cfg.g = 8;
  cfg.k = 3;
  cfg.eps = 8;
  cfg.mode = TreeHistMode::kLdpGroups;
  cfg.estimator = Mechanism::kGrr;
  std::vector<uint64_t> values(400, 77);
  TreeHistResult res = treehist_run(values, cfg);
  ASSERT_FALSE(res.top.empty());
  EXPECT_EQ(res.top[0].prefix, 77u);
  EXPECT_EQ(res.top[0].level, 1u);
}

TEST(TreeHist, TruncatedFlagWhenKExceedsCandidates) {
  TreeHistConfig cfg;
  cfg.L = 2;
  cfg.g = 2;
  cfg.k = 32;
  cfg.eps = 6;
  cfg.mode = TreeHistMode::kLdpGroups;
  cfg.estimator = Mechanism::kGrr;
  std::vector<uint64_t> values(100, 2);
  TreeHistResult res = treehist_run(values, cfg);
  EXPECT_TRUE(res.truncated);
  EXPECT_EQ(res.top.size(), 4u);
}

TEST(TreeHist, DeterministicForFixedSeed) {
  TreeHistConfig cfg;
  cfg.L = 16;
  cfg.g = 8;
  cfg.k = 8;
  cfg.eps = 1.0;
  cfg.seed = 9;
  std::vector<uint64_t> values = [] {
    Rng rng(4);
    std::vector<uint64_t> v(20000);
    for (auto& x : v) x = rng.below(1 << 16);
    return v;
  }();
  TreeHistResult a = treehist_run(values, cfg);
  TreeHistResult b = treehist_run(values, cfg);
  ASSERT_EQ(a.top.size(), b.top.size());
  for (size_t i = 0; i < a.top.size(); ++i) {
    EXPECT_EQ(a.top[i].prefix, b.top[i].prefix);
    EXPECT_DOUBLE_EQ(a.top[i].estimate, b.top[i].estimate);
  }
}

TEST(TreeHist, ShufflerModeRecoversPlantedHeavies) {
  const uint64_t n = 20000;
  const uint32_t kHeavy = 5;
  std::vector<uint64_t> heavies{0x1234, 0x9B10, 0x44F2, 0xC0DE, 0x7731};
  Rng rng(11);
  std::vector<uint64_t> values;
  for (uint64_t i = 0; i < n; ++i) {
    if (rng.uniform() < 0.8)
      values.push_back(heavies[rng.below(kHeavy)]);
    else
      values.push_back(rng.below(1 << 16));
  }
  TreeHistConfig cfg;
  cfg.L = 16;
  cfg.g = 8;
  cfg.k = kHeavy;
  cfg.eps = 1.0;
  cfg.delta = 1e-9;
  cfg.seed = 21;
  TreeHistResult res = treehist_run(values, cfg);
  std::set<uint64_t> found;
  for (const auto& c : res.top) found.insert(c.prefix);
  uint32_t hits = 0;
  for (uint64_t h : heavies) hits += found.count(h);
  EXPECT_GE(hits, 4u);  // 80% of the planted set at this reduced scale
}

TEST(TreeHist, FinalCandidatesCarryFullDepth) {
  TreeHistConfig cfg;
  cfg.L = 16;
  cfg.g = 8;
  cfg.k = 6;
  cfg.eps = 1.0;
  cfg.seed = 31;
  Rng rng(8);
  std::vector<uint64_t> values(20000);
  for (auto& x : values) x = rng.below(1 << 16);
  TreeHistResult res = treehist_run(values, cfg);
  ASSERT_FALSE(res.top.empty());
  for (const auto& c : res.top) {
    EXPECT_EQ(c.level, 2u);
    EXPECT_LT(c.prefix, uint64_t{1} << 16);
  }
}

}  // namespace
}  // namespace shufdp
