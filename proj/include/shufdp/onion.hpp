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
// Layered public-key encryption for the sequential-shuffle baseline: the
// sender wraps a payload once per relay, outermost layer first to be
// peeled.  Built on libsodium sealed boxes (X25519 + XSalsa20-Poly1305).

#pragma once

#include <sodium.h>

#include <array>
#include <cstdint>
#include <vector>

#include "shufdp/errors.hpp"
#include "shufdp/rng.hpp"

namespace shufdp {

struct BoxKeyPair {
  std::array<uint8_t, crypto_box_PUBLICKEYBYTES> pk;
  std::array<uint8_t, crypto_box_SECRETKEYBYTES> sk;
};

inline void sodium_ready() {
  if (sodium_init() < 0) throw ResourceError("libsodium failed to initialize");
}

// Keypair derived deterministically from the party's rng stream.
inline BoxKeyPair box_keypair(Rng& rng) {
  sodium_ready();
  std::array<uint8_t, crypto_box_SEEDBYTES> seed;
  for (size_t i = 0; i < seed.size(); i += 8) {
    uint64_t w = rng.next_u64();
    for (size_t j = 0; j < 8 && i + j < seed.size(); ++j)
      seed[i + j] = uint8_t(w >> (8 * j));
  }
  BoxKeyPair kp;
  crypto_box_seed_keypair(kp.pk.data(), kp.sk.data(), seed.data());
  return kp;
}

// Wraps payload under pubkeys.front() outermost: relays peel in the order
// the keys were given.
inline std::vector<uint8_t> onion_encrypt(
    const std::vector<uint8_t>& payload,
    const std::vector<std::array<uint8_t, crypto_box_PUBLICKEYBYTES>>& pubkeys) {
  sodium_ready();
  if (pubkeys.empty()) throw InputError("onion: need at least one layer");
  std::vector<uint8_t> cur = payload;
  for (auto it = pubkeys.rbegin(); it != pubkeys.rend(); ++it) {
    std::vector<uint8_t> next(cur.size() + crypto_box_SEALBYTES);
    if (crypto_box_seal(next.data(), cur.data(), cur.size(), it->data()) != 0)
      throw ProtocolError("onion_encrypt", "sealing failed");
    cur = std::move(next);
  }
  return cur;
}

// Removes one layer.  Throws ProtocolError on authentication failure.
inline std::vector<uint8_t> onion_peel(const BoxKeyPair& kp,
                                       const std::vector<uint8_t>& envelope) {
  sodium_ready();
  if (envelope.size() < crypto_box_SEALBYTES)
    throw InputError("onion: envelope too short");
  std::vector<uint8_t> out(envelope.size() - crypto_box_SEALBYTES);
  if (crypto_box_seal_open(out.data(), envelope.data(), envelope.size(),
                           kp.pk.data(), kp.sk.data()) != 0)
    throw ProtocolError("onion_peel", "authentication failed");
  return out;
}

}  // namespace shufdp
