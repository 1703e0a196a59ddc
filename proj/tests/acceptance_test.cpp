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
// Acceptance gate: one test per release criterion, each ending with a
// machine-greppable [CRITERION n] PASS/FAIL line.  Tolerances are pinned
// here; loosening them is a release decision, not a test fix.

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <vector>

#include "shufdp/amplification.hpp"
#include "shufdp/crypto.hpp"
#include "shufdp/data.hpp"
#include "shufdp/experiment.hpp"
#include "shufdp/mechanisms.hpp"
#include "shufdp/protocol.hpp"
#include "shufdp/shuffle.hpp"
#include "shufdp/treehist.hpp"
#include "test_util.hpp"

namespace shufdp {
namespace {

class Criterion {
 public:
  Criterion(int number, const char* summary)
      : number_(number), summary_(summary),
        start_(std::chrono::steady_clock::now()) {}
  ~Criterion() {
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start_)
                      .count();
    std::printf("[CRITERION %d] %s: %s (%.1fs)\n", number_,
                ::testing::Test::HasFailure() ? "FAIL" : "PASS", summary_,
                secs);
    std::fflush(stdout);
  }

 private:
  int number_;
  const char* summary_;
  std::chrono::steady_clock::time_point start_;
};

constexpr uint64_t kKosarakN = 990002;
constexpr double kDelta = 1e-9;

std::vector<uint64_t> cyclic_values(uint64_t n, uint64_t d) {
  std::vector<uint64_t> vals(n);
  for (uint64_t i = 0; i < n; ++i) vals[i] = i % d;
  return vals;
}

ShuffleState make_plain_state(const std::vector<uint64_t>& secrets, uint32_t r,
                              Rng& rng) {
  ShuffleState st;
  st.columns.assign(r, std::vector<uint64_t>(secrets.size()));
  for (size_t i = 0; i < secrets.size(); ++i) {
    auto s = share(secrets[i], r, 64, rng);
    for (uint32_t k = 0; k < r; ++k) st.columns[k][i] = s[k];
  }
  return st;
}

ShuffleState make_cipher_state(const ShuffleState& plain, uint32_t cipher,
                               Ahe& ahe, Rng& enc_rng) {
  ShuffleState st = plain;
  st.cipher_party = int(cipher);
  for (uint64_t v : plain.columns[cipher])
    st.cipher_column.push_back(ahe.encrypt(v, enc_rng));
  st.columns[cipher].clear();
  return st;
}

std::vector<Rng> party_rngs(uint32_t r, uint64_t seed) {
  std::vector<Rng> rngs;
  Rng master(seed);
  for (uint32_t k = 0; k < r; ++k) rngs.push_back(master.derive(k));
  return rngs;
}

uint64_t order_index(const std::vector<uint64_t>& out) {
  uint64_t idx = 0;
  for (size_t i = 0; i < out.size(); ++i) {
    uint64_t smaller = 0;
    for (size_t j = i + 1; j < out.size(); ++j)
      if (out[j] < out[i]) ++smaller;
    idx = idx * (out.size() - i) + smaller;
  }
  return idx;
}

uint64_t factorial(uint64_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// ---------------------------------------------------------------------------

TEST(Acceptance, C01OptimalDprimeGolden) {
  Criterion c(1, "optimal d' reproduces the published column at Kosarak scale");
  const double eps[] = {0.2, 0.4, 0.6, 0.8};
  const uint32_t expected[] = {45, 177, 397, 705};
  for (int i = 0; i < 4; ++i) {
    uint32_t dp = optimal_dprime(eps[i], kKosarakN, kDelta);
    EXPECT_NEAR(double(dp), double(expected[i]), 1.0)
        << "eps_c = " << eps[i];
  }
}

TEST(Acceptance, C02AnalyticVarianceGolden) {
  Criterion c(2, "SOLH analytic variance matches the published utility row");
  const double eps[] = {0.2, 0.4, 0.6, 0.8};
  const double expected[] = {5.27e-8, 1.30e-8, 5.76e-9, 3.24e-9};
  for (int i = 0; i < 4; ++i) {
    uint32_t dp = optimal_dprime(eps[i], kKosarakN, kDelta);
    VarianceEstimate v = var_solh(eps[i], kKosarakN, dp, kDelta);
    ASSERT_TRUE(v.feasible);
    EXPECT_NEAR(v.variance, expected[i], 0.02 * expected[i])
        << "eps_c = " << eps[i];
  }
}

TEST(Acceptance, C03MonteCarloMatchesAnalyticVariance) {
  Criterion c(3, "empirical estimator variance within 10% of formulas");
  const uint64_t kN = 10000;
  const int kTrials = 1000;
  for (double eps : {0.5, 1.0, 2.0}) {
    // GRR, d = 10
    {
      const uint64_t d = 10;
      auto vals = cyclic_values(kN, d);
      GrrConfig cfg(eps, d);
      double mean_var = 0;
      std::vector<FrequencyVector> ests;
      ests.reserve(kTrials);
      Rng master(100 + uint64_t(eps * 10));
      for (int t = 0; t < kTrials; ++t) {
        Rng rng = master.derive(t);
        std::vector<Report> reports;
        reports.reserve(kN);
        for (uint64_t v : vals) reports.push_back(grr_perturb(v, cfg, rng));
        ests.push_back(grr_aggregate(reports, cfg));
      }
      for (uint64_t v = 0; v < d; ++v) {
        double m = 0;
        for (const auto& e : ests) m += e[v] / kTrials;
        double s = 0;
        for (const auto& e : ests) s += (e[v] - m) * (e[v] - m) / (kTrials - 1);
        mean_var += s / d;
      }
      double analytic = grr_variance(eps, d, kN, 1.0 / d);
      EXPECT_NEAR(mean_var, analytic, 0.10 * analytic) << "GRR eps=" << eps;
    }
    // SOLH, d = 100
    {
      const uint64_t d = 100;
      uint32_t dp = uint32_t(std::max<long>(2, std::lround(std::exp(eps)) + 1));
      auto vals = cyclic_values(kN, d);
      SolhConfig cfg(eps, d, dp);
      std::vector<FrequencyVector> ests;
      ests.reserve(kTrials);
      Rng master(200 + uint64_t(eps * 10));
      for (int t = 0; t < kTrials; ++t) {
        Rng rng = master.derive(t);
        std::vector<Report> reports;
        reports.reserve(kN);
        for (uint64_t v : vals) reports.push_back(solh_perturb(v, cfg, rng));
        ests.push_back(solh_aggregate(reports, cfg));
      }
      double mean_var = 0;
      for (uint64_t v = 0; v < d; ++v) {
        double m = 0;
        for (const auto& e : ests) m += e[v] / kTrials;
        double s = 0;
        for (const auto& e : ests) s += (e[v] - m) * (e[v] - m) / (kTrials - 1);
        mean_var += s / d;
      }
      double analytic = solh_variance(eps, dp, kN, 1.0 / d);
      EXPECT_NEAR(mean_var, analytic, 0.10 * analytic) << "SOLH eps=" << eps;
    }
    // UE, d = 20
    {
      const uint64_t d = 20;
      auto vals = cyclic_values(kN, d);
      UeConfig cfg(eps, d);
      std::vector<FrequencyVector> ests;
      ests.reserve(kTrials);
      Rng master(300 + uint64_t(eps * 10));
      for (int t = 0; t < kTrials; ++t) {
        Rng rng = master.derive(t);
        std::vector<Report> reports;
        reports.reserve(kN);
        for (uint64_t v : vals) reports.push_back(ue_perturb(v, cfg, rng));
        ests.push_back(ue_aggregate(reports, cfg));
      }
      double mean_var = 0;
      for (uint64_t v = 0; v < d; ++v) {
        double m = 0;
        for (const auto& e : ests) m += e[v] / kTrials;
        double s = 0;
        for (const auto& e : ests) s += (e[v] - m) * (e[v] - m) / (kTrials - 1);
        mean_var += s / d;
      }
      double analytic = ue_variance(eps, kN);
      EXPECT_NEAR(mean_var, analytic, 0.10 * analytic) << "UE eps=" << eps;
    }
  }
}

TEST(Acceptance, C04UnbiasednessSuite) {
  Criterion c(4, "mean estimates within 3 standard errors, plain and PEOS");
  const uint64_t kN = 5000, kD = 10;
  const double kEps = 1.0;
  auto vals = cyclic_values(kN, kD);  // truth exactly 1/d per value
  const int kTrials = 120;

  auto check_mean = [&](const std::vector<FrequencyVector>& ests,
                        double per_trial_var, const char* label) {
    double se = std::sqrt(per_trial_var / kTrials);
    for (uint64_t v = 0; v < kD; ++v) {
      double m = 0;
      for (const auto& e : ests) m += e[v] / ests.size();
      EXPECT_NEAR(m, 0.1, 3 * se) << label << " value " << v;
    }
  };

  // Plain aggregation, every mechanism.
  {
    GrrConfig cfg(kEps, kD);
    std::vector<FrequencyVector> ests;
    Rng master(41);
    for (int t = 0; t < kTrials; ++t) {
      Rng rng = master.derive(t);
      std::vector<Report> reports;
      for (uint64_t v : vals) reports.push_back(grr_perturb(v, cfg, rng));
      ests.push_back(grr_aggregate(reports, cfg));
    }
    check_mean(ests, grr_variance(kEps, kD, kN, 0.1), "plain GRR");
  }
  {
    SolhConfig cfg(kEps, kD, 4);
    std::vector<FrequencyVector> ests;
    Rng master(42);
    for (int t = 0; t < kTrials; ++t) {
      Rng rng = master.derive(t);
      std::vector<Report> reports;
      for (uint64_t v : vals) reports.push_back(solh_perturb(v, cfg, rng));
      ests.push_back(solh_aggregate(reports, cfg));
    }
    check_mean(ests, solh_variance(kEps, 4, kN, 0.1), "plain SOLH");
  }
  {
    UeConfig cfg(kEps, kD);
    std::vector<FrequencyVector> ests;
    Rng master(43);
    for (int t = 0; t < kTrials; ++t) {
      Rng rng = master.derive(t);
      std::vector<Report> reports;
      for (uint64_t v : vals) reports.push_back(ue_perturb(v, cfg, rng));
      ests.push_back(ue_aggregate(reports, cfg));
    }
    check_mean(ests, ue_variance(kEps, kN), "plain UE");
  }

  // PEOS with and without fakes, both share-riding mechanisms.
  IdentityAhe ahe(64);
  for (uint64_t n_r : {uint64_t{0}, uint64_t{1000}}) {
    double inflate = std::pow(double(kN + n_r) / kN, 2.0);
    {
      std::vector<FrequencyVector> ests;
      for (int t = 0; t < kTrials; ++t) {
        PeosConfig cfg{GrrConfig(kEps, kD), 3, n_r, 64, 4400 + uint64_t(t)};
        ests.push_back(peos_run(vals, cfg, ahe).estimate);
      }
      check_mean(ests, grr_variance(kEps, kD, kN, 0.1) * inflate, "PEOS GRR");
    }
    {
      std::vector<FrequencyVector> ests;
      for (int t = 0; t < kTrials; ++t) {
        PeosConfig cfg{SolhConfig(kEps, kD, 4), 3, n_r, 64,
                       5500 + uint64_t(t)};
        ests.push_back(peos_run(vals, cfg, ahe).estimate);
      }
      check_mean(ests, solh_variance(kEps, 4, kN, 0.1) * inflate, "PEOS SOLH");
    }
  }
}

TEST(Acceptance, C05ShuffleCorrectnessAndUniformity) {
  Criterion c(5, "multiset preservation plus permutation uniformity, all variants");
  const int kTrials = 100000;
  for (uint64_t n : {uint64_t{3}, uint64_t{4}}) {
    std::vector<uint64_t> secrets(n);
    for (uint64_t i = 0; i < n; ++i) secrets[i] = i;
    uint64_t orders = factorial(n);

    // Sequential shuffle (single relay; uniformity is per-relay).
    {
      Rng rng(600 + n);
      auto kp = box_keypair(rng);
      std::vector<uint64_t> counts(orders, 0);
      std::vector<std::vector<uint8_t>> base;
      for (uint64_t i = 0; i < n; ++i)
        base.push_back(onion_encrypt({uint8_t(i)}, {kp.pk}));
      for (int t = 0; t < kTrials; ++t) {
        auto out = sequential_shuffle(base, {kp}, 0, rng);
        std::vector<uint64_t> order;
        std::multiset<uint8_t> seen;
        for (const auto& p : out) {
          order.push_back(p[0]);
          seen.insert(p[0]);
        }
        ASSERT_EQ(seen.size(), n);  // multiset preserved
        counts[order_index(order)]++;
      }
      EXPECT_GT(testutil::chi_square_uniform_p(counts), 0.01)
          << "SS n=" << n;
    }

    // Oblivious shuffle.
    {
      Rng rng(700 + n);
      std::vector<uint64_t> counts(orders, 0);
      ShuffleConfig cfg{2, 64};
      for (int t = 0; t < kTrials; ++t) {
        ShuffleState st = make_plain_state(secrets, 2, rng);
        auto rngs = party_rngs(2, (n << 40) + uint64_t(t));
        oblivious_shuffle(st, cfg, rngs);
        auto out = reconstruct_state(st, 64, nullptr);
        auto sorted = out;
        std::sort(sorted.begin(), sorted.end());
        ASSERT_EQ(sorted, secrets);
        counts[order_index(out)]++;
      }
      EXPECT_GT(testutil::chi_square_uniform_p(counts), 0.01)
          << "OS n=" << n;
    }

    // EOS.
    {
      Rng rng(800 + n);
      IdentityAhe ahe(64);
      std::vector<uint64_t> counts(orders, 0);
      ShuffleConfig cfg{3, 64};
      for (int t = 0; t < kTrials; ++t) {
        ShuffleState plain = make_plain_state(secrets, 3, rng);
        ShuffleState st = make_cipher_state(plain, 2, ahe, rng);
        auto rngs = party_rngs(3, (n << 41) + uint64_t(t));
        eos(st, cfg, ahe, rngs);
        auto out = reconstruct_state(st, 64, &ahe);
        auto sorted = out;
        std::sort(sorted.begin(), sorted.end());
        ASSERT_EQ(sorted, secrets);
        counts[order_index(out)]++;
      }
      EXPECT_GT(testutil::chi_square_uniform_p(counts), 0.01)
          << "EOS n=" << n;
    }
  }
}

TEST(Acceptance, C06EosPlaintextEquivalence) {
  Criterion c(6, "EOS output equals plaintext shuffle under coupled streams");
  // Identity double, 1000 random instances, bitwise equality.
  Rng rng(900);
  IdentityAhe identity(64);
  for (int trial = 0; trial < 1000; ++trial) {
    uint32_t r = 2 + trial % 4;
    std::vector<uint64_t> secrets(1 + trial % 6);
    for (auto& v : secrets) v = rng.next_u64();
    ShuffleConfig cfg{r, 64};
    ShuffleState plain = make_plain_state(secrets, r, rng);
    Rng enc_rng(trial);
    ShuffleState enc = make_cipher_state(plain, trial % r, identity, enc_rng);
    auto rngs_a = party_rngs(r, 90000 + trial);
    auto rngs_b = party_rngs(r, 90000 + trial);
    oblivious_shuffle(plain, cfg, rngs_a);
    eos(enc, cfg, identity, rngs_b);
    ASSERT_GE(enc.cipher_party, 0);
    for (uint32_t k = 0; k < r; ++k) {
      if (int(k) == enc.cipher_party) {
        for (size_t i = 0; i < secrets.size(); ++i)
          ASSERT_EQ(identity.decrypt(enc.cipher_column[i]),
                    plain.columns[k][i]);
      } else {
        ASSERT_EQ(enc.columns[k], plain.columns[k]);
      }
    }
  }

  // Real AHE at test key size: decrypted outputs equal the double's.
  Rng key_rng(31);
  PaillierAhe paillier(512, 64, key_rng);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<uint64_t> secrets{rng.next_u64(), rng.next_u64(),
                                  rng.next_u64(), rng.next_u64()};
    ShuffleConfig cfg{3, 64};
    ShuffleState plain = make_plain_state(secrets, 3, rng);
    Rng enc_a(trial), enc_b(trial + 1);
    ShuffleState sa = make_cipher_state(plain, trial % 3, identity, enc_a);
    ShuffleState sb = make_cipher_state(plain, trial % 3, paillier, enc_b);
    auto rngs_a = party_rngs(3, 95000 + trial);
    auto rngs_b = party_rngs(3, 95000 + trial);
    eos(sa, cfg, identity, rngs_a);
    eos(sb, cfg, paillier, rngs_b);
    ASSERT_EQ(sa.cipher_party, sb.cipher_party);
    for (uint32_t k = 0; k < 3; ++k) {
      if (int(k) == sa.cipher_party) {
        for (size_t i = 0; i < secrets.size(); ++i)
          ASSERT_EQ(paillier.decrypt(sb.cipher_column[i]),
                    identity.decrypt(sa.cipher_column[i]));
      } else {
        ASSERT_EQ(sa.columns[k], sb.columns[k]);
      }
    }
  }
}

TEST(Acceptance, C07PoisoningResistance) {
  Criterion c(7, "one honest shuffler keeps fakes uniform; all-bad control fails");
  auto constant = [](uint32_t, uint64_t) { return uint64_t{0xDEAD}; };
  PoisoningReport good =
      poisoning_resistance_check(3, {0}, constant, 100000, 71);
  EXPECT_FALSE(good.vacuous);
  EXPECT_TRUE(good.uniform);
  EXPECT_GT(good.p_value, 0.01);

  PoisoningReport bad =
      poisoning_resistance_check(3, {0, 1, 2}, constant, 100000, 72);
  EXPECT_TRUE(bad.vacuous);
  EXPECT_FALSE(bad.uniform);
  EXPECT_LT(bad.p_value, 0.01);
}

TEST(Acceptance, C08SmallInstancePrivacyOracle) {
  Criterion c(8, "exhaustive divergence respects the analytic thresholds");
  const double eps_l = 0.7, delta = 0.2;
  const uint64_t n = 3;
  std::vector<uint64_t> a{0, 1, 0}, b{1, 1, 0};

  // GRR branch (binary randomized response).
  {
    MechanismConfig mech = GrrConfig(eps_l, 2);
    AmplifyResult amp = amplify(AmplifyMethod::kGrr, eps_l, n, 2, delta);
    PrivacyLossResult at_central = privacy_loss_oracle(mech, a, b, amp.eps_c);
    ASSERT_FALSE(at_central.refused);
    EXPECT_LE(at_central.divergence, delta + 1e-12);
    PrivacyLossResult at_local = privacy_loss_oracle(mech, a, b, eps_l);
    EXPECT_NEAR(at_local.divergence, 0.0, 1e-12);
  }
  // SOLH branch with an enumerable 2-seed family.
  {
    SolhHashFamily fam;
    fam.seed_count = 2;
    fam.fn = [](uint64_t seed, uint64_t value, uint32_t d_prime) {
      return uint32_t((value + seed) % d_prime);
    };
    MechanismConfig mech = SolhConfig(eps_l, 2, 2, fam);
    AmplifyResult amp = amplify(AmplifyMethod::kSolh, eps_l, n, 2, delta);
    PrivacyLossResult at_central = privacy_loss_oracle(mech, a, b, amp.eps_c);
    ASSERT_FALSE(at_central.refused);
    EXPECT_LE(at_central.divergence, delta + 1e-12);
    PrivacyLossResult at_local = privacy_loss_oracle(mech, a, b, eps_l);
    EXPECT_NEAR(at_local.divergence, 0.0, 1e-12);
  }
}

TEST(Acceptance, C09TreeHistPlantedRecovery) {
  Criterion c(9, "median top-20 F1 >= 0.8 on planted heavy hitters");
  const uint64_t kN = 50000;
  const uint32_t kHeavy = 20;
  std::vector<double> f1s;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    std::set<uint64_t> heavy_set;
    while (heavy_set.size() < kHeavy) heavy_set.insert(rng.below(1 << 16));
    std::vector<uint64_t> heavies(heavy_set.begin(), heavy_set.end());
    std::vector<uint64_t> values;
    values.reserve(kN);
    for (uint64_t i = 0; i < kN; ++i) {
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
    cfg.delta = kDelta;
    cfg.estimator = Mechanism::kSolh;
    cfg.mode = TreeHistMode::kShufflerSplit;
    cfg.seed = 1000 + seed;
    TreeHistResult res = treehist_run(values, cfg);
    std::set<uint64_t> found;
    for (const auto& cand : res.top) found.insert(cand.prefix);
    uint32_t hits = 0;
    for (uint64_t h : heavies) hits += found.count(h);
    double precision = double(hits) / double(res.top.size());
    double recall = double(hits) / double(kHeavy);
    f1s.push_back(precision + recall > 0
                      ? 2 * precision * recall / (precision + recall)
                      : 0.0);
  }
  std::sort(f1s.begin(), f1s.end());
  double median = (f1s[9] + f1s[10]) / 2;
  EXPECT_GE(median, 0.8) << "median F1 over 20 seeds";
}

TEST(Acceptance, C10PlannerSoundness) {
  Criterion c(10, "planner satisfies targets and dominates a 50x50 grid");
  Rng rng(1010);
  int done = 0, attempts = 0;
  while (done < 100 && attempts < 1000) {
    ++attempts;
    uint64_t n = uint64_t(std::pow(10.0, 4.0 + 2.0 * rng.uniform()));
    uint64_t d = uint64_t(std::pow(10.0, 1.0 + 2.0 * rng.uniform()));
    double eps1 = 0.3 + 0.9 * rng.uniform();
    double eps3 = eps1 * (2.0 + 6.0 * rng.uniform());
    double eps2 = rng.uniform() < 0.3 ? kInf : eps1 * (1.5 + 2.5 * rng.uniform());
    PlanResult plan;
    try {
      plan = plan_parameters(eps1, eps2, eps3, n, d, kDelta);
    } catch (const InfeasibleError&) {
      continue;
    }
    ++done;
    // Targets hold when re-derived through the guarantee calculator.
    uint64_t D = plan.mechanism == Mechanism::kGrr ? d : plan.d_prime;
    PeosEps eps = peos_eps(plan.mechanism, plan.eps_l, n, plan.n_r, D, kDelta);
    EXPECT_LE(std::min(eps.eps_c, plan.eps_l), eps1 * (1 + 1e-9));
    EXPECT_LE(std::min(eps.eps_s, plan.eps_l), eps2 * (1 + 1e-9));
    EXPECT_LE(plan.eps_l, eps3 * (1 + 1e-12));

    // 50x50 verification grid over (eps_l, extra fakes).
    double cap = std::min(eps3, 40.0);
    uint64_t fake_step = std::max<uint64_t>(1, n / 100);
    double best_grid = kInf;
    for (int i = 1; i <= 50; ++i) {
      double eps_l = cap * i / 50;
      for (int j = 0; j < 50; ++j) {
        std::optional<uint64_t> forced =
            j == 0 ? std::optional<uint64_t>{}
                   : std::optional<uint64_t>{uint64_t(j) * fake_step};
        auto g = plan_point(Mechanism::kGrr, eps_l, forced, 0, n, d, kDelta,
                            eps1, eps2, eps3);
        if (g) best_grid = std::min(best_grid, g->variance);
        auto s = detail::best_solh_at(eps_l, forced, n, d, kDelta, eps1, eps2,
                                      eps3);
        if (s) best_grid = std::min(best_grid, s->variance);
      }
    }
    EXPECT_LE(plan.variance, best_grid * (1 + 1e-9))
        << "instance " << done << ": n=" << n << " d=" << d
        << " eps=(" << eps1 << "," << eps2 << "," << eps3 << ")";
  }
  EXPECT_EQ(done, 100) << "could not sample 100 feasible instances";
}

TEST(Acceptance, C11OverheadStructure) {
  Criterion c(11, "shuffle round count, per-user uploads, linear byte scaling");
  IdentityAhe ahe(64);
  for (uint32_t r : {3u, 7u}) {
    uint64_t expect_rounds = binomial(r, r / 2 + 1);
    std::map<uint64_t, uint64_t> totals;  // n -> total bytes
    for (uint64_t n : {uint64_t{1000}, uint64_t{10000}}) {
      auto vals = cyclic_values(n, 16);
      PeosConfig cfg{GrrConfig(1.0, 16), r, 0, 64, 110 + r};
      PeosResult res = peos_run(vals, cfg, ahe, true);
      OverheadReport rep = overhead_report(res.transcript);
      EXPECT_EQ(rep.shuffle_rounds, expect_rounds) << "r=" << r;
      EXPECT_EQ(rep.user_plain_share_messages, uint64_t{r} - 1) << "r=" << r;
      EXPECT_EQ(rep.user_plain_upload_bytes, (uint64_t{r} - 1) * 8);
      EXPECT_GT(rep.user_cipher_upload_bytes, 0u);
      uint64_t total = 0;
      for (const auto& [party, bytes] : rep.bytes_sent) total += bytes;
      totals[n] = total;
      std::printf("  [overhead] r=%u n=%llu total_bytes=%llu rounds=%llu\n", r,
                  (unsigned long long)n, (unsigned long long)total,
                  (unsigned long long)rep.shuffle_rounds);
    }
    double ratio = double(totals[10000]) / double(totals[1000]);
    EXPECT_NEAR(ratio, 10.0, 0.5) << "r=" << r;  // linear in n within 5%
  }
}

}  // namespace
}  // namespace shufdp
