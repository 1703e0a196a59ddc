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
// The three shuffling constructions: sequential shuffle over onion
// envelopes, resharing-based oblivious shuffle over additive shares, and
// encrypted oblivious shuffle (EOS) where exactly one share column stays
// under additively homomorphic encryption throughout.

#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "shufdp/crypto.hpp"
#include "shufdp/errors.hpp"
#include "shufdp/onion.hpp"
#include "shufdp/rng.hpp"
#include "shufdp/transcript.hpp"

namespace shufdp {

inline uint64_t binomial(uint32_t n, uint32_t k) {
  if (k > n) return 0;
  uint64_t out = 1;
  for (uint32_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

struct ShuffleConfig {
  uint32_t r = 3;
  uint32_t ell = 64;

  uint32_t t() const { return r / 2 + 1; }
  uint64_t rounds() const { return binomial(r, t()); }

  void validate() const {
    if (r < 2) throw ConfigError("shuffle: r must be >= 2");
    share_mask(ell);
  }
};

// One hide-and-seek round: hiders receive and re-share, seekers split and
// hand off.  The two sets partition the shufflers.
struct PartitionRound {
  std::vector<uint32_t> hiders;
  std::vector<uint32_t> seekers;
};

// All C(r,t) hider sets in lexicographic order.
inline std::vector<PartitionRound> partition_schedule(uint32_t r) {
  uint32_t t = r / 2 + 1;
  std::vector<PartitionRound> out;
  std::vector<uint32_t> idx(t);
  for (uint32_t i = 0; i < t; ++i) idx[i] = i;
  for (;;) {
    PartitionRound pr;
    pr.hiders = idx;
    size_t pos = 0;
    for (uint32_t p = 0; p < r; ++p) {
      if (pos < t && idx[pos] == p)
        ++pos;
      else
        pr.seekers.push_back(p);
    }
    out.push_back(std::move(pr));
    // next lexicographic combination
    int i = int(t) - 1;
    while (i >= 0 && idx[i] == r - t + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (uint32_t j = uint32_t(i) + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Per-party share columns, length n + n_r each.  For EOS exactly one party
// holds ciphertexts (cipher_party >= 0) and its plain column is empty.
struct ShuffleState {
  std::vector<std::vector<uint64_t>> columns;
  int cipher_party = -1;
  std::vector<Ciphertext> cipher_column;

  size_t items() const {
    return cipher_party >= 0 ? cipher_column.size() : columns.at(0).size();
  }
};

inline std::vector<uint64_t> reconstruct_state(const ShuffleState& st,
                                               uint32_t ell, const Ahe* ahe) {
  uint64_t mask = share_mask(ell);
  size_t n = st.items();
  std::vector<uint64_t> out(n, 0);
  for (size_t k = 0; k < st.columns.size(); ++k) {
    if (int(k) == st.cipher_party) continue;
    if (st.columns[k].size() != n)
      throw ProtocolError("reconstruct", "column length mismatch");
    for (size_t i = 0; i < n; ++i) out[i] = (out[i] + st.columns[k][i]) & mask;
  }
  if (st.cipher_party >= 0) {
    if (ahe == nullptr)
      throw ProtocolError("reconstruct", "ciphertext column but no AHE");
    for (size_t i = 0; i < n; ++i)
      out[i] = (out[i] + ahe->decrypt(st.cipher_column[i])) & mask;
  }
  return out;
}

namespace detail {

inline std::vector<uint8_t> le_bytes(const std::vector<uint64_t>& v) {
  std::vector<uint8_t> out;
  out.reserve(v.size() * 8);
  for (uint64_t x : v)
    for (int i = 0; i < 8; ++i) out.push_back(uint8_t(x >> (8 * i)));
  return out;
}

inline std::string party_name(uint32_t k) {
  return "shuffler:" + std::to_string(k);
}

// Hide-and-seek engine shared by the plaintext and encrypted variants.
// Randomness discipline: each party draws only from its own stream, in an
// order independent of share values, so a plaintext run and an EOS run
// over the same streams stay bit-coupled.  Per round:
//   1. every seeker splits its column into t parts, part j to hider j
//      (the value-dependent part is part t-1; for the ciphertext column it
//      stays encrypted, making hider t-1 the next ciphertext holder);
//   2. the first hider draws a shared permutation seed; all hiders apply
//      the same Fisher-Yates permutation;
//   3. every hider re-splits into r parts, keeping the value-dependent
//      part (ciphertext holders keep theirs encrypted) and sending one
//      uniform part to every other party.
inline void shuffle_rounds(ShuffleState& st, const ShuffleConfig& cfg,
                           const Ahe* ahe, std::vector<Rng>& rngs,
                           Transcript* tr) {
  cfg.validate();
  uint32_t r = cfg.r, t = cfg.t();
  uint64_t mask = share_mask(cfg.ell);
  if (st.columns.size() != r)
    throw ProtocolError("shuffle", "need one column per shuffler");
  if (rngs.size() != r) throw ProtocolError("shuffle", "need one rng per shuffler");
  size_t n = st.items();
  for (uint32_t k = 0; k < r; ++k) {
    if (int(k) == st.cipher_party) continue;
    if (st.columns[k].size() != n)
      throw ProtocolError("shuffle", "column length mismatch");
  }
  if (st.cipher_party >= 0 && ahe == nullptr)
    throw ProtocolError("shuffle", "ciphertext column but no AHE");

  uint32_t round_no = 0;
  for (const PartitionRound& pr : partition_schedule(r)) {
    const auto& H = pr.hiders;
    // Accumulators per hider; jc indexes the hider holding ciphertexts.
    std::vector<std::vector<uint64_t>> acc(t, std::vector<uint64_t>(n, 0));
    std::vector<Ciphertext> cvec;
    int jc = -1;
    for (uint32_t j = 0; j < t; ++j) {
      uint32_t h = H[j];
      if (int(h) == st.cipher_party) {
        jc = int(j);
        cvec = std::move(st.cipher_column);
      } else {
        acc[j] = std::move(st.columns[h]);
      }
    }
    for (uint32_t s : pr.seekers) {
      if (int(s) == st.cipher_party) {
        cvec.resize(n);
        jc = int(t) - 1;
        for (size_t i = 0; i < n; ++i) {
          AheSplit sp = ahe_split(st.cipher_column[i], t, *ahe, rngs[s]);
          for (uint32_t j = 0; j + 1 < t; ++j)
            acc[j][i] = (acc[j][i] + sp.plain_shares[j]) & mask;
          cvec[i] = std::move(sp.cipher_share);
        }
        st.cipher_column.clear();
        if (tr) {
          for (uint32_t j = 0; j < t; ++j) {
            bool enc = j + 1 == t;
            uint64_t bytes = enc ? ahe->serialize(cvec[0]).size() * n : 8 * n;
            tr->log_sized(round_no, party_name(s), party_name(H[j]),
                          enc ? "reshare_to_hider_enc" : "reshare_to_hider",
                          bytes, splitmix64(round_no * r + s));
          }
        }
      } else {
        for (size_t i = 0; i < n; ++i) {
          uint64_t v = st.columns[s][i], sum = 0;
          for (uint32_t j = 0; j + 1 < t; ++j) {
            uint64_t w = rngs[s].next_u64() & mask;
            acc[j][i] = (acc[j][i] + w) & mask;
            sum = (sum + w) & mask;
          }
          acc[t - 1][i] = (acc[t - 1][i] + v - sum) & mask;
        }
        st.columns[s].clear();
        if (tr) {
          for (uint32_t j = 0; j < t; ++j)
            tr->log_sized(round_no, party_name(s), party_name(H[j]),
                          "reshare_to_hider", 8 * n,
                          splitmix64(round_no * r + s));
        }
      }
    }
    // Fold the plain contributions that landed on the ciphertext hider.
    if (jc >= 0) {
      for (size_t i = 0; i < n; ++i)
        cvec[i] = ahe->add_plain(cvec[i], acc[jc][i]);
      acc[jc].assign(n, 0);
    }
    // Agreed permutation from a shared per-round seed.
    uint64_t seed = rngs[H[0]].next_u64();
    if (tr) {
      for (uint32_t j = 1; j < t; ++j)
        tr->log_sized(round_no, party_name(H[0]), party_name(H[j]),
                      "perm_seed", 8, splitmix64(seed));
    }
    std::vector<size_t> perm = Rng(seed).permutation(n);
    for (uint32_t j = 0; j < t; ++j) {
      if (int(j) == jc) continue;
      std::vector<uint64_t> permuted(n);
      for (size_t i = 0; i < n; ++i) permuted[i] = acc[j][perm[i]];
      acc[j] = std::move(permuted);
    }
    if (jc >= 0) {
      std::vector<Ciphertext> permuted(n);
      for (size_t i = 0; i < n; ++i) permuted[i] = std::move(cvec[perm[i]]);
      cvec = std::move(permuted);
    }
    // Re-split into r parts and redistribute.
    std::vector<std::vector<uint64_t>> newcols(r, std::vector<uint64_t>(n, 0));
    std::vector<Ciphertext> newcipher;
    int new_e = -1;
    for (uint32_t j = 0; j < t; ++j) {
      uint32_t h = H[j];
      bool is_cipher = int(j) == jc;
      if (is_cipher) {
        newcipher.resize(n);
        new_e = int(h);
      }
      for (size_t i = 0; i < n; ++i) {
        uint64_t sum = 0;
        for (uint32_t k = 0; k < r; ++k) {
          if (k == h) continue;
          uint64_t w = rngs[h].next_u64() & mask;
          newcols[k][i] = (newcols[k][i] + w) & mask;
          sum = (sum + w) & mask;
        }
        if (is_cipher)
          newcipher[i] = ahe->add_plain(cvec[i], (0 - sum) & mask);
        else
          newcols[h][i] = (newcols[h][i] + acc[j][i] - sum) & mask;
      }
      if (tr) {
        for (uint32_t k = 0; k < r; ++k) {
          if (k == h) continue;
          tr->log_sized(round_no, party_name(h), party_name(k),
                        "reshare_to_party", 8 * n, splitmix64(h * r + k));
        }
      }
    }
    // Plain parts addressed to the ciphertext holder fold into its column.
    if (new_e >= 0) {
      for (size_t i = 0; i < n; ++i)
        newcipher[i] = ahe->add_plain(newcipher[i], newcols[new_e][i]);
      newcols[new_e].clear();
    }
    st.columns = std::move(newcols);
    st.cipher_party = new_e;
    st.cipher_column = std::move(newcipher);
    ++round_no;
  }
}

}  // namespace detail

// Resharing-based shuffle over plaintext share columns.
inline void oblivious_shuffle(ShuffleState& st, const ShuffleConfig& cfg,
                              std::vector<Rng>& rngs, Transcript* tr = nullptr) {
  if (st.cipher_party >= 0)
    throw ProtocolError("oblivious_shuffle", "plaintext shares only");
  detail::shuffle_rounds(st, cfg, nullptr, rngs, tr);
}

// EOS: identical structure, one column under AHE throughout.
inline void eos(ShuffleState& st, const ShuffleConfig& cfg, const Ahe& ahe,
                std::vector<Rng>& rngs, Transcript* tr = nullptr) {
  if (st.cipher_party < 0 ||
      st.cipher_party >= int(st.columns.size()))
    throw ProtocolError("eos", "need exactly one ciphertext column");
  detail::shuffle_rounds(st, cfg, &ahe, rngs, tr);
}

// ---------------------------------------------------------------------------
// Sequential shuffle baseline

inline std::vector<uint8_t> default_fake_payload(Rng& rng) {
  std::vector<uint8_t> out(8);
  uint64_t w = rng.next_u64();
  for (int i = 0; i < 8; ++i) out[i] = uint8_t(w >> (8 * i));
  return out;
}

// Each relay peels one onion layer, appends its quota of fake reports
// (wrapped for the remaining layers), and applies a uniform permutation.
// n_r not divisible by the relay count: the first n_r mod r relays insert
// one extra fake.
inline std::vector<std::vector<uint8_t>> sequential_shuffle(
    std::vector<std::vector<uint8_t>> envelopes,
    const std::vector<BoxKeyPair>& keys, uint64_t n_r, Rng& rng,
    const std::function<std::vector<uint8_t>(Rng&)>& fake_payload =
        default_fake_payload,
    Transcript* tr = nullptr) {
  if (keys.empty()) throw InputError("sequential shuffle: need >= 1 relay");
  uint32_t r = uint32_t(keys.size());
  for (uint32_t j = 0; j < r; ++j) {
    std::vector<std::vector<uint8_t>> peeled;
    peeled.reserve(envelopes.size());
    for (size_t i = 0; i < envelopes.size(); ++i) {
      try {
        peeled.push_back(onion_peel(keys[j], envelopes[i]));
      } catch (const ProtocolError&) {
        throw ProtocolError("sequential_shuffle",
                            "decryption failed at layer " + std::to_string(j));
      }
    }
    uint64_t quota = n_r / r + (j < n_r % r ? 1 : 0);
    std::vector<std::array<uint8_t, crypto_box_PUBLICKEYBYTES>> rest;
    for (uint32_t k = j + 1; k < r; ++k) rest.push_back(keys[k].pk);
    for (uint64_t f = 0; f < quota; ++f) {
      std::vector<uint8_t> payload = fake_payload(rng);
      peeled.push_back(rest.empty() ? payload : onion_encrypt(payload, rest));
    }
    rng.shuffle(peeled);
    if (tr) {
      uint64_t bytes = 0;
      for (const auto& e : peeled) bytes += e.size();
      tr->log_sized(j, detail::party_name(j),
                    j + 1 < r ? detail::party_name(j + 1) : "server",
                    "sequential_batch", bytes, splitmix64(j));
    }
    envelopes = std::move(peeled);
  }
  return envelopes;
}

}  // namespace shufdp
