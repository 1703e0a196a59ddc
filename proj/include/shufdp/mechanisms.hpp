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
// Local randomizers and server-side calibrated estimators for the
// frequency oracles: generalized randomized response (GRR), local hashing
// tuned for the shuffler setting (SOLH), symmetric unary encoding (UE),
// and appended unary encoding (AUE).

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "shufdp/errors.hpp"
#include "shufdp/rng.hpp"

namespace shufdp {

// Finite discrete domain; values are indices 0..size-1.
struct Domain {
  uint64_t size = 0;
};

using FrequencyVector = std::vector<double>;

// ---------------------------------------------------------------------------
// Hashing

// Version tag of the built-in keyed hash.  Bump if the mixing changes; wire
// compatibility of stored reports depends on it.
inline constexpr uint32_t kSolhHashVersion = 1;

// Keyed 64-bit avalanche hash reduced mod d'.  Stands in for a universal
// family: the seed selects the member, drawn uniformly from the seed space.
inline uint32_t solh_hash(uint64_t seed, uint64_t value, uint32_t d_prime) {
  uint64_t x = splitmix64(seed * 0xD6E8FEB86659FD93ULL ^
                          splitmix64(value + 0x2545F4914F6CDD1DULL));
  return static_cast<uint32_t>(x % d_prime);
}

// A hash family for SOLH: member selector (seed) ranges over
// [0, seed_count).  Tests may inject tiny enumerable families.
struct SolhHashFamily {
  std::function<uint32_t(uint64_t seed, uint64_t value, uint32_t d_prime)> fn =
      solh_hash;
  uint64_t seed_count = uint64_t{1} << 32;
  // Probability that two distinct values collide under a random member.
  // Negative means "universal": use 1/d'.  Injective test stubs set 0 so the
  // calibrated estimate reduces to the exact histogram in the noiseless case.
  double collision_rate = -1;
};

// ---------------------------------------------------------------------------
// Configs

struct GrrConfig {
  double epsilon_l = 0;
  uint64_t d = 0;

  GrrConfig(double eps, uint64_t domain) : epsilon_l(eps), d(domain) {
    if (domain < 2) throw ConfigError("GRR: domain size must be >= 2");
    if (eps < 0) throw ConfigError("GRR: epsilon_l must be >= 0");
  }

  double p() const {
    double e = std::exp(epsilon_l);
    return e / (e + static_cast<double>(d) - 1);
  }
  double q() const {
    return 1.0 / (std::exp(epsilon_l) + static_cast<double>(d) - 1);
  }
};

struct SolhConfig {
  double epsilon_l = 0;
  uint64_t d = 0;        // input domain size
  uint32_t d_prime = 0;  // hash range size
  uint32_t seed_bits = 32;
  SolhHashFamily family;

  SolhConfig(double eps, uint64_t domain, uint32_t hash_range,
             SolhHashFamily fam = {})
      : epsilon_l(eps), d(domain), d_prime(hash_range), family(std::move(fam)) {
    if (domain < 2) throw ConfigError("SOLH: domain size must be >= 2");
    if (eps < 0) throw ConfigError("SOLH: epsilon_l must be >= 0");
    if (hash_range < 2) throw ConfigError("SOLH: d' must be >= 2");
    if (hash_range > domain)
      throw ConfigError("SOLH: hash range must not exceed the domain");
  }

  // Truth probability of the inner d'-ary randomized response.
  double p() const {
    double e = std::exp(epsilon_l);
    return e / (e + static_cast<double>(d_prime) - 1);
  }
};

struct UeConfig {
  double epsilon_l = 0;
  uint64_t d = 0;
  uint64_t max_bits = uint64_t{1} << 24;  // bit-vector memory cap

  UeConfig(double eps, uint64_t domain) : epsilon_l(eps), d(domain) {
    if (domain < 2) throw ConfigError("UE: domain size must be >= 2");
    if (eps < 0) throw ConfigError("UE: epsilon_l must be >= 0");
  }

  // Per-bit flip probability.
  double f() const { return 1.0 / (std::exp(epsilon_l / 2) + 1); }
};

struct AueConfig {
  double epsilon_c = 0;
  uint64_t n = 0;
  double delta = 0;
  uint64_t d = 0;
  uint64_t max_bits = uint64_t{1} << 24;

  AueConfig(double eps_c, uint64_t users, double dlt, uint64_t domain)
      : epsilon_c(eps_c), n(users), delta(dlt), d(domain) {
    if (domain < 2) throw ConfigError("AUE: domain size must be >= 2");
    if (dlt <= 0 || dlt >= 1) throw ConfigError("AUE: delta must be in (0,1)");
    double noise = 200.0 * std::log(4.0 / dlt) /
                   (eps_c * eps_c * static_cast<double>(users));
    if (!(noise <= 1.0))
      throw ConfigError("AUE: infeasible, 200 ln(4/delta)/(eps_c^2 n) > 1");
  }

  // Per-location increment probability.
  double p_aue() const {
    return 1.0 - 200.0 * std::log(4.0 / delta) /
                     (epsilon_c * epsilon_c * static_cast<double>(n));
  }
};

// ---------------------------------------------------------------------------
// Reports

struct GrrReport {
  uint64_t value = 0;
};

struct SolhReport {
  uint64_t seed = 0;  // member of the hash family; < 2^seed_bits
  uint32_t hashed = 0;  // y, < d'
};

// Length-d vector; entries 0/1 for UE, 0..2 for AUE (bit plus increment).
struct BitVectorReport {
  std::vector<uint8_t> counts;
};

using Report = std::variant<GrrReport, SolhReport, BitVectorReport>;

// ---------------------------------------------------------------------------
// GRR

namespace detail {

// d-ary randomized response: the true value with probability p, any other
// with the remaining mass split evenly.
inline uint64_t grr_draw(uint64_t v, uint64_t d, double p, Rng& rng) {
  if (rng.uniform() < p) return v;
  uint64_t other = rng.below(d - 1);
  return other < v ? other : other + 1;
}

}  // namespace detail

inline Report grr_perturb(uint64_t v, const GrrConfig& cfg, Rng& rng) {
  if (v >= cfg.d) throw InputError("GRR: value out of domain");
  return GrrReport{detail::grr_draw(v, cfg.d, cfg.p(), rng)};
}

inline FrequencyVector grr_aggregate(const std::vector<Report>& reports,
                                     const GrrConfig& cfg) {
  if (reports.empty()) throw InputError("GRR aggregate: no reports");
  double p = cfg.p(), q = cfg.q();
  std::vector<uint64_t> counts(cfg.d, 0);
  for (const Report& r : reports) {
    const auto* g = std::get_if<GrrReport>(&r);
    if (g == nullptr) throw InputError("GRR aggregate: mixed report variants");
    if (g->value >= cfg.d) throw InputError("GRR aggregate: report out of domain");
    counts[g->value]++;
  }
  double n = static_cast<double>(reports.size());
  FrequencyVector est(cfg.d);
  for (uint64_t v = 0; v < cfg.d; ++v) {
    est[v] = (static_cast<double>(counts[v]) / n - q) / (p - q);
  }
  return est;
}

// ---------------------------------------------------------------------------
// SOLH

inline Report solh_perturb(uint64_t v, const SolhConfig& cfg, Rng& rng) {
  if (v >= cfg.d) throw InputError("SOLH: value out of domain");
  uint64_t seed = rng.below(cfg.family.seed_count);
  uint32_t hashed = cfg.family.fn(seed, v, cfg.d_prime);
  uint64_t y = detail::grr_draw(hashed, cfg.d_prime, cfg.p(), rng);
  return SolhReport{seed, static_cast<uint32_t>(y)};
}

inline FrequencyVector solh_aggregate(const std::vector<Report>& reports,
                                      const SolhConfig& cfg) {
  if (reports.empty()) throw InputError("SOLH aggregate: no reports");
  double p = cfg.p();
  // Support baseline: the truthful branch contributes p; the uniform branch
  // and hash collisions contribute the family's collision rate.
  double cr = cfg.family.collision_rate >= 0 ? cfg.family.collision_rate
                                             : 1.0 / cfg.d_prime;
  // Pr[support | wrong value] = cr*p + (1-cr)(1-p)/(d'-1); equals 1/d'
  // exactly when cr = 1/d'.
  double base = cr * p + (1 - cr) * (1 - p) / (cfg.d_prime - 1);
  if (std::abs(p - base) < 1e-15)
    throw ConfigError("SOLH aggregate: p = 1/d', estimator undefined");
  double n = static_cast<double>(reports.size());
  FrequencyVector est(cfg.d, 0.0);
  for (const Report& r : reports) {
    const auto* s = std::get_if<SolhReport>(&r);
    if (s == nullptr) throw InputError("SOLH aggregate: mixed report variants");
    for (uint64_t v = 0; v < cfg.d; ++v) {
      if (cfg.family.fn(s->seed, v, cfg.d_prime) == s->hashed) est[v] += 1.0;
    }
  }
  for (uint64_t v = 0; v < cfg.d; ++v) {
    est[v] = (est[v] / n - base) / (p - base);
  }
  return est;
}

// ---------------------------------------------------------------------------
// Unary encoding (symmetric RAPPOR-style)

inline Report ue_perturb(uint64_t v, const UeConfig& cfg, Rng& rng) {
  if (v >= cfg.d) throw InputError("UE: value out of domain");
  if (cfg.d > cfg.max_bits)
    throw ResourceError("UE: bit vector would exceed the memory cap");
  double f = cfg.f();
  BitVectorReport rep;
  rep.counts.resize(cfg.d);
  for (uint64_t j = 0; j < cfg.d; ++j) {
    uint8_t bit = (j == v) ? 1 : 0;
    rep.counts[j] = rng.uniform() < f ? (1 - bit) : bit;
  }
  return rep;
}

inline FrequencyVector ue_aggregate(const std::vector<Report>& reports,
                                    const UeConfig& cfg) {
  if (reports.empty()) throw InputError("UE aggregate: no reports");
  double f = cfg.f();
  double p = 1.0 - f, q = f;
  double n = static_cast<double>(reports.size());
  FrequencyVector est(cfg.d, 0.0);
  for (const Report& r : reports) {
    const auto* b = std::get_if<BitVectorReport>(&r);
    if (b == nullptr || b->counts.size() != cfg.d)
      throw InputError("UE aggregate: mixed or mis-sized report variants");
    for (uint64_t j = 0; j < cfg.d; ++j) est[j] += b->counts[j];
  }
  for (uint64_t j = 0; j < cfg.d; ++j) {
    est[j] = (est[j] / n - q) / (p - q);
  }
  return est;
}

// ---------------------------------------------------------------------------
// Appended unary encoding

inline Report aue_encode(uint64_t v, const AueConfig& cfg, Rng& rng) {
  if (v >= cfg.d) throw InputError("AUE: value out of domain");
  if (cfg.d > cfg.max_bits)
    throw ResourceError("AUE: vector would exceed the memory cap");
  double p = cfg.p_aue();
  BitVectorReport rep;
  rep.counts.resize(cfg.d);
  for (uint64_t j = 0; j < cfg.d; ++j) {
    uint8_t bit = (j == v) ? 1 : 0;
    rep.counts[j] = bit + (rng.uniform() < p ? 1 : 0);
  }
  return rep;
}

inline FrequencyVector aue_aggregate(const std::vector<Report>& reports,
                                     const AueConfig& cfg) {
  if (reports.empty()) throw InputError("AUE aggregate: no reports");
  double p = cfg.p_aue();
  double n = static_cast<double>(reports.size());
  FrequencyVector est(cfg.d, 0.0);
  for (const Report& r : reports) {
    const auto* b = std::get_if<BitVectorReport>(&r);
    if (b == nullptr || b->counts.size() != cfg.d)
      throw InputError("AUE aggregate: mixed or mis-sized report variants");
    for (uint64_t j = 0; j < cfg.d; ++j) est[j] += b->counts[j];
  }
  for (uint64_t j = 0; j < cfg.d; ++j) {
    est[j] = (est[j] - n * p) / n;
  }
  return est;
}

// ---------------------------------------------------------------------------
// Blanket decomposition

// Total-variation mass of the input-independent uniform component of a
// local randomizer's output distribution.
struct BlanketDecomposition {
  double gamma = 0;
};

inline BlanketDecomposition blanket_decompose(const GrrConfig& cfg) {
  double e = std::exp(cfg.epsilon_l);
  return {static_cast<double>(cfg.d) / (e + static_cast<double>(cfg.d) - 1)};
}

inline BlanketDecomposition blanket_decompose(const SolhConfig& cfg) {
  double e = std::exp(cfg.epsilon_l);
  return {cfg.d_prime / (e + static_cast<double>(cfg.d_prime) - 1)};
}

inline BlanketDecomposition blanket_decompose(const UeConfig& cfg) {
  return {2.0 / (std::exp(cfg.epsilon_l / 2) + 1)};
}

// ---------------------------------------------------------------------------
// Analytic single-value estimator variance (exact, at true frequency f_v)

inline double grr_variance(double eps_l, uint64_t d, uint64_t n, double f_v) {
  GrrConfig cfg(eps_l, d);
  double p = cfg.p(), q = cfg.q();
  double num = f_v * p * (1 - p) + (1 - f_v) * q * (1 - q);
  return num / (static_cast<double>(n) * (p - q) * (p - q));
}

inline double solh_variance(double eps_l, uint32_t d_prime, uint64_t n,
                            double f_v) {
  double e = std::exp(eps_l);
  double p = e / (e + static_cast<double>(d_prime) - 1);
  double base = 1.0 / d_prime;
  double num = f_v * p * (1 - p) + (1 - f_v) * base * (1 - base);
  return num / (static_cast<double>(n) * (p - base) * (p - base));
}

// Exact for every f_v: the two per-bit Bernoulli variances coincide.
inline double ue_variance(double eps_l, uint64_t n) {
  double e = std::exp(eps_l / 2);
  return e / (static_cast<double>(n) * (e - 1) * (e - 1));
}

inline double aue_variance(const AueConfig& cfg) {
  double p = cfg.p_aue();
  return p * (1 - p) / static_cast<double>(cfg.n);
}

// ---------------------------------------------------------------------------
// Post-processing

// Clips estimates to [0, 1] and renormalizes to sum 1.  Off the default
// path: clipping trades unbiasedness for feasibility.
inline FrequencyVector clip_and_renormalize(const FrequencyVector& est) {
  FrequencyVector out(est.size());
  double total = 0;
  for (size_t i = 0; i < est.size(); ++i) {
    out[i] = std::min(1.0, std::max(0.0, est[i]));
    total += out[i];
  }
  if (total > 0) {
    for (double& x : out) x /= total;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Wire encoding (for transcripts)

inline void put_le(std::vector<uint8_t>& out, uint64_t x, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(uint8_t(x >> (8 * i)));
}

inline uint64_t get_le(const std::vector<uint8_t>& in, size_t pos, int bytes) {
  uint64_t x = 0;
  for (int i = 0; i < bytes; ++i) x |= uint64_t(in.at(pos + i)) << (8 * i);
  return x;
}

// GRR: 8-byte little-endian value.
// SOLH: 4-byte seed then 4-byte hashed value, little-endian (64-bit total).
// Bit vectors: 8-byte length header then packed 2-bit entries, LSB-first.
inline std::vector<uint8_t> encode_report(const Report& report) {
  std::vector<uint8_t> out;
  if (const auto* g = std::get_if<GrrReport>(&report)) {
    put_le(out, g->value, 8);
  } else if (const auto* s = std::get_if<SolhReport>(&report)) {
    put_le(out, s->seed, 4);
    put_le(out, s->hashed, 4);
  } else {
    const auto& b = std::get<BitVectorReport>(report);
    put_le(out, b.counts.size(), 8);
    uint8_t cur = 0;
    int filled = 0;
    for (uint8_t c : b.counts) {
      cur |= uint8_t((c & 3) << filled);
      filled += 2;
      if (filled == 8) {
        out.push_back(cur);
        cur = 0;
        filled = 0;
      }
    }
    if (filled > 0) out.push_back(cur);
  }
  return out;
}

enum class ReportKind { kGrr, kSolh, kBitVector };

inline Report decode_report(const std::vector<uint8_t>& bytes,
                            ReportKind kind) {
  switch (kind) {
    case ReportKind::kGrr:
      if (bytes.size() != 8) throw InputError("decode: bad GRR report size");
      return GrrReport{get_le(bytes, 0, 8)};
    case ReportKind::kSolh: {
      if (bytes.size() != 8) throw InputError("decode: bad SOLH report size");
      return SolhReport{get_le(bytes, 0, 4),
                        static_cast<uint32_t>(get_le(bytes, 4, 4))};
    }
    case ReportKind::kBitVector: {
      if (bytes.size() < 8) throw InputError("decode: bad bit vector size");
      uint64_t len = get_le(bytes, 0, 8);
      if (bytes.size() != 8 + (len * 2 + 7) / 8)
        throw InputError("decode: bit vector length mismatch");
      BitVectorReport rep;
      rep.counts.resize(len);
      for (uint64_t i = 0; i < len; ++i) {
        rep.counts[i] = (bytes[8 + i / 4] >> (2 * (i % 4))) & 3;
      }
      return rep;
    }
  }
  throw InputError("decode: unknown report kind");
}

}  // namespace shufdp
