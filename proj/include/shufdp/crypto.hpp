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
// Additive secret sharing over Z_{2^ell} and additively homomorphic
// encryption.  The production AHE is Paillier; arithmetic happens mod N,
// results are reduced mod 2^ell after decryption.  That reduction is exact
// as long as the number of homomorphic additions stays within the budget
// B = N / 2^ell, which every ciphertext tracks.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <vector>

#include "shufdp/errors.hpp"
#include "shufdp/rng.hpp"

namespace shufdp {

// ---------------------------------------------------------------------------
// Additive secret sharing mod 2^ell

inline uint64_t share_mask(uint32_t ell) {
  if (ell == 0 || ell > 64) throw ConfigError("shares: ell must be in [1,64]");
  return ell == 64 ? ~uint64_t{0} : (uint64_t{1} << ell) - 1;
}

// Splits value into `count` additive shares mod 2^ell.
inline std::vector<uint64_t> share(uint64_t value, uint32_t count, uint32_t ell,
                                   Rng& rng) {
  if (count == 0) throw InputError("shares: count must be >= 1");
  uint64_t mask = share_mask(ell);
  std::vector<uint64_t> out(count);
  uint64_t sum = 0;
  for (uint32_t i = 0; i + 1 < count; ++i) {
    out[i] = rng.next_u64() & mask;
    sum = (sum + out[i]) & mask;
  }
  out[count - 1] = (value - sum) & mask;
  return out;
}

inline uint64_t reconstruct(const std::vector<uint64_t>& shares, uint32_t ell) {
  uint64_t mask = share_mask(ell);
  uint64_t sum = 0;
  for (uint64_t s : shares) sum = (sum + s) & mask;
  return sum;
}

// ---------------------------------------------------------------------------
// AHE interface

struct Ciphertext {
  mpz_class value;
  uint32_t adds = 0;  // homomorphic additions absorbed so far
};

// Additively homomorphic encryption of 64-bit plaintexts.  Decryption
// returns the plaintext sum reduced mod 2^ell; the implementation must
// reject once the addition budget that makes the reduction exact is spent.
class Ahe {
 public:
  virtual ~Ahe() = default;

  virtual Ciphertext encrypt(uint64_t m, Rng& rng) = 0;
  virtual uint64_t decrypt(const Ciphertext& c) const = 0;
  virtual Ciphertext add(const Ciphertext& a, const Ciphertext& b) const = 0;
  virtual Ciphertext add_plain(const Ciphertext& a, uint64_t m) const = 0;

  virtual uint32_t ell() const = 0;
  virtual uint32_t add_budget() const = 0;
  virtual std::vector<uint8_t> serialize(const Ciphertext& c) const = 0;
  virtual Ciphertext deserialize(const std::vector<uint8_t>& bytes) const = 0;
};

namespace detail {

inline mpz_class mpz_from_u64(uint64_t x) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(x), 0, 0, &x);
  return out;
}

inline uint64_t u64_from_mpz(const mpz_class& x) {
  uint64_t out = 0;
  mpz_class low = x & mpz_class(detail::mpz_from_u64(~uint64_t{0}));
  size_t count = 0;
  mpz_export(&out, &count, 1, sizeof(out), 0, 0, low.get_mpz_t());
  return out;
}

inline mpz_class random_mpz_below(const mpz_class& bound, Rng& rng) {
  size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  size_t words = (bits + 63) / 64;
  for (;;) {
    mpz_class r = 0;
    for (size_t i = 0; i < words; ++i) {
      r <<= 64;
      r += mpz_from_u64(rng.next_u64());
    }
    r >>= words * 64 - bits;  // keep exactly `bits` bits
    if (r < bound) return r;
  }
}

// Deterministic Miller-Rabin-backed prime of the given bit length, drawn
// from the caller's stream.  Key sizes here are test/demo scale; this is
// not a hardened prime generator.
inline mpz_class random_prime(uint32_t bits, Rng& rng) {
  for (;;) {
    mpz_class p = (mpz_class(1) << (bits - 1)) |
                  random_mpz_below(mpz_class(1) << (bits - 1), rng) | 1;
    if (mpz_probab_prime_p(p.get_mpz_t(), 30) > 0) return p;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Paillier

struct PaillierPublicKey {
  mpz_class n;   // modulus
  mpz_class n2;  // n^2
};

struct PaillierSecretKey {
  mpz_class lambda;  // lcm(p-1, q-1)
  mpz_class mu;      // (L(g^lambda mod n^2))^-1 mod n
};

// Paillier with g = n + 1: Enc(m; r) = (1 + m n) r^n mod n^2.  The
// plaintext space Z_n hosts sums of 2^ell-bounded shares; add_budget()
// bounds how many can be absorbed before the mod-2^ell reduction of the
// decryption could wrap.
class PaillierAhe : public Ahe {
 public:
  PaillierAhe(uint32_t modulus_bits, uint32_t ell, Rng& rng) : ell_(ell) {
    if (ell == 0 || ell > 64) throw ConfigError("paillier: ell out of range");
    if (modulus_bits < 128)
      throw ConfigError("paillier: modulus must be >= 128 bits");
    mpz_class p, q;
    do {
      p = detail::random_prime(modulus_bits / 2, rng);
      q = detail::random_prime(modulus_bits / 2, rng);
    } while (p == q);
    pk_.n = p * q;
    pk_.n2 = pk_.n * pk_.n;
    mpz_class pm1 = p - 1, qm1 = q - 1;
    mpz_lcm(sk_.lambda.get_mpz_t(), pm1.get_mpz_t(), qm1.get_mpz_t());
    // g = n + 1 makes L(g^lambda mod n^2) = lambda mod n, so mu = lambda^-1.
    if (mpz_invert(sk_.mu.get_mpz_t(), sk_.lambda.get_mpz_t(),
                   pk_.n.get_mpz_t()) == 0)
      throw ProtocolError("keygen", "lambda not invertible mod n");
    mpz_class budget = pk_.n >> ell;
    budget_ = budget > 0xFFFFFFFF ? 0xFFFFFFFF
                                  : static_cast<uint32_t>(budget.get_ui());
    if (budget_ < 2) throw ConfigError("paillier: modulus too small for ell");
  }

  const PaillierPublicKey& public_key() const { return pk_; }

  Ciphertext encrypt(uint64_t m, Rng& rng) override {
    mpz_class r = detail::random_mpz_below(pk_.n, rng);
    while (r == 0) r = detail::random_mpz_below(pk_.n, rng);
    mpz_class rn;
    mpz_powm(rn.get_mpz_t(), r.get_mpz_t(), pk_.n.get_mpz_t(),
             pk_.n2.get_mpz_t());
    mpz_class c = ((1 + detail::mpz_from_u64(m) * pk_.n) % pk_.n2) * rn % pk_.n2;
    return Ciphertext{c, 1};
  }

  uint64_t decrypt(const Ciphertext& c) const override {
    mpz_class u;
    mpz_powm(u.get_mpz_t(), c.value.get_mpz_t(), sk_.lambda.get_mpz_t(),
             pk_.n2.get_mpz_t());
    mpz_class m = ((u - 1) / pk_.n) * sk_.mu % pk_.n;
    return detail::u64_from_mpz(m) & share_mask(ell_);
  }

  Ciphertext add(const Ciphertext& a, const Ciphertext& b) const override {
    check_budget(uint64_t{a.adds} + b.adds);
    return Ciphertext{a.value * b.value % pk_.n2, a.adds + b.adds};
  }

  // (1 + m n) has a known discrete log; multiplying it in costs one mulmod,
  // no exponentiation.  The added plaintext is not hidden from observers of
  // both ciphertexts, which is fine for blanket noise contributions.
  Ciphertext add_plain(const Ciphertext& a, uint64_t m) const override {
    check_budget(uint64_t{a.adds} + 1);
    mpz_class f = (1 + detail::mpz_from_u64(m) * pk_.n) % pk_.n2;
    return Ciphertext{a.value * f % pk_.n2, a.adds + 1};
  }

  uint32_t ell() const override { return ell_; }
  uint32_t add_budget() const override { return budget_; }

  std::vector<uint8_t> serialize(const Ciphertext& c) const override {
    size_t bytes = (mpz_sizeinbase(pk_.n2.get_mpz_t(), 2) + 7) / 8;
    std::vector<uint8_t> out(8 + bytes, 0);
    for (int i = 0; i < 4; ++i) out[i] = uint8_t(c.adds >> (8 * i));
    for (int i = 0; i < 4; ++i) out[4 + i] = uint8_t(bytes >> (8 * i));
    size_t count = 0;
    mpz_export(out.data() + 8, &count, -1, 1, 0, 0, c.value.get_mpz_t());
    return out;
  }

  Ciphertext deserialize(const std::vector<uint8_t>& bytes) const override {
    if (bytes.size() < 8) throw InputError("paillier: short ciphertext");
    uint32_t adds = 0, len = 0;
    for (int i = 0; i < 4; ++i) adds |= uint32_t(bytes[i]) << (8 * i);
    for (int i = 0; i < 4; ++i) len |= uint32_t(bytes[4 + i]) << (8 * i);
    if (bytes.size() != 8 + size_t(len))
      throw InputError("paillier: ciphertext length mismatch");
    Ciphertext c;
    c.adds = adds;
    mpz_import(c.value.get_mpz_t(), len, -1, 1, 0, 0, bytes.data() + 8);
    if (c.value >= pk_.n2) throw InputError("paillier: ciphertext out of range");
    return c;
  }

 private:
  void check_budget(uint64_t adds) const {
    if (adds > budget_)
      throw ResourceError("paillier: homomorphic addition budget exhausted");
  }

  PaillierPublicKey pk_;
  PaillierSecretKey sk_;
  uint32_t ell_;
  uint32_t budget_;
};

// ---------------------------------------------------------------------------
// Identity test double

// Stores the running plaintext sum mod 2^ell in the clear.  Used by tests
// that need ciphertext-path arithmetic to be bit-comparable with plaintext
// shares, and by cost models that want protocol structure without bignum
// time.  Consumes one rng draw per encryption so that randomness streams
// stay aligned with a real AHE.
class IdentityAhe : public Ahe {
 public:
  explicit IdentityAhe(uint32_t ell) : ell_(ell), mask_(share_mask(ell)) {}

  Ciphertext encrypt(uint64_t m, Rng& rng) override {
    (void)rng.next_u64();
    return Ciphertext{mpz_class(detail::mpz_from_u64(m & mask_)), 1};
  }

  uint64_t decrypt(const Ciphertext& c) const override {
    return detail::u64_from_mpz(c.value) & mask_;
  }

  Ciphertext add(const Ciphertext& a, const Ciphertext& b) const override {
    uint64_t s = (detail::u64_from_mpz(a.value) + detail::u64_from_mpz(b.value)) &
                 mask_;
    return Ciphertext{detail::mpz_from_u64(s), a.adds + b.adds};
  }

  Ciphertext add_plain(const Ciphertext& a, uint64_t m) const override {
    uint64_t s = (detail::u64_from_mpz(a.value) + m) & mask_;
    return Ciphertext{detail::mpz_from_u64(s), a.adds + 1};
  }

  uint32_t ell() const override { return ell_; }
  uint32_t add_budget() const override { return 0xFFFFFFFF; }

  std::vector<uint8_t> serialize(const Ciphertext& c) const override {
    std::vector<uint8_t> out(12, 0);
    for (int i = 0; i < 4; ++i) out[i] = uint8_t(c.adds >> (8 * i));
    uint64_t v = detail::u64_from_mpz(c.value);
    for (int i = 0; i < 8; ++i) out[4 + i] = uint8_t(v >> (8 * i));
    return out;
  }

  Ciphertext deserialize(const std::vector<uint8_t>& bytes) const override {
    if (bytes.size() != 12) throw InputError("identity ahe: bad size");
    uint32_t adds = 0;
    uint64_t v = 0;
    for (int i = 0; i < 4; ++i) adds |= uint32_t(bytes[i]) << (8 * i);
    for (int i = 0; i < 8; ++i) v |= uint64_t(bytes[4 + i]) << (8 * i);
    return Ciphertext{detail::mpz_from_u64(v & mask_), adds};
  }

 private:
  uint32_t ell_;
  uint64_t mask_;
};

// ---------------------------------------------------------------------------
// Ciphertext splitting

struct AheSplit {
  std::vector<uint64_t> plain_shares;  // t-1 fresh additive shares
  Ciphertext cipher_share;             // original minus their sum, under AHE
};

// Re-splits an encrypted share into t additive shares: t-1 uniform
// plaintext masks plus the ciphertext with their negated sum folded in.
inline AheSplit ahe_split(const Ciphertext& c, uint32_t t, const Ahe& ahe,
                          Rng& rng) {
  if (t < 1) throw InputError("ahe_split: t must be >= 1");
  uint64_t mask = share_mask(ahe.ell());
  AheSplit out;
  uint64_t sum = 0;
  for (uint32_t i = 0; i + 1 < t; ++i) {
    uint64_t s = rng.next_u64() & mask;
    out.plain_shares.push_back(s);
    sum = (sum + s) & mask;
  }
  out.cipher_share = ahe.add_plain(c, (0 - sum) & mask);
  return out;
}

}  // namespace shufdp
