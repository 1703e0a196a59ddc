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
// Message-level protocol transcripts with byte accounting, dumped as JSON
// lines; the raw material for adversary-view extraction and overhead
// reporting.

#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shufdp/errors.hpp"

namespace shufdp {

inline uint64_t fnv1a64(const uint8_t* data, size_t len) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::string digest_hex(const std::vector<uint8_t>& bytes) {
  uint64_t h = fnv1a64(bytes.data(), bytes.size());
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Party names: "user:<i>", "shuffler:<i>", "server".
struct Message {
  uint32_t round = 0;
  std::string from;
  std::string to;
  std::string kind;
  uint64_t byte_length = 0;
  std::string payload_digest;
};

struct Transcript {
  std::map<std::string, uint64_t> party_seeds;
  std::vector<Message> messages;
  std::vector<uint64_t> output;  // reconstructed residues, server side

  void log(uint32_t round, std::string from, std::string to, std::string kind,
           const std::vector<uint8_t>& payload) {
    messages.push_back(Message{round, std::move(from), std::move(to),
                               std::move(kind), payload.size(),
                               digest_hex(payload)});
  }

  // Logs size/digest without materializing the payload (hot paths pass a
  // precomputed digest of the logical bytes).
  void log_sized(uint32_t round, std::string from, std::string to,
                 std::string kind, uint64_t bytes, uint64_t digest) {
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
    messages.push_back(Message{round, std::move(from), std::move(to),
                               std::move(kind), bytes, buf});
  }

  void dump_jsonl(std::ostream& os) const {
    for (const Message& m : messages) {
      nlohmann::json j{{"round", m.round},     {"from", m.from},
                       {"to", m.to},           {"kind", m.kind},
                       {"byte_length", m.byte_length},
                       {"payload_digest", m.payload_digest}};
      os << j.dump() << "\n";
    }
  }

  std::string dump_jsonl() const {
    std::ostringstream os;
    dump_jsonl(os);
    return os.str();
  }

  uint64_t bytes_sent_by(const std::string& party) const {
    uint64_t total = 0;
    for (const Message& m : messages)
      if (m.from == party) total += m.byte_length;
    return total;
  }
};

}  // namespace shufdp
