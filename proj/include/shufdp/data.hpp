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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "shufdp/errors.hpp"
#include "shufdp/mechanisms.hpp"
#include "shufdp/rng.hpp"

namespace shufdp {

inline double mse(const FrequencyVector& truth, const FrequencyVector& est) {
  if (truth.size() != est.size())
    throw InputError("mse: vector length mismatch");
  double total = 0;
  for (size_t i = 0; i < truth.size(); ++i) {
    double diff = truth[i] - est[i];
    total += diff * diff;
  }
  return total / double(truth.size());
}

inline FrequencyVector empirical_frequencies(const std::vector<uint64_t>& values,
                                             uint64_t d) {
  FrequencyVector f(d, 0.0);
  for (uint64_t v : values) {
    if (v >= d) throw InputError("frequencies: value out of domain");
    f[v] += 1.0;
  }
  for (double& x : f) x /= double(values.size());
  return f;
}

// n draws from Zipf over ranks 1..d with mass proportional to rank^-s;
// value index = rank - 1.
inline std::vector<uint64_t> gen_zipf(uint64_t n, uint64_t d, double exponent,
                                      uint64_t seed) {
  if (d < 1) throw InputError("zipf: d must be >= 1");
  std::vector<double> cdf(d);
  double total = 0;
  for (uint64_t i = 0; i < d; ++i) {
    total += std::pow(double(i + 1), -exponent);
    cdf[i] = total;
  }
  for (double& c : cdf) c /= total;
  Rng rng(seed);
  std::vector<uint64_t> out(n);
  for (uint64_t i = 0; i < n; ++i) {
    double u = rng.uniform();
    out[i] = uint64_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  }
  return out;
}

struct Dataset {
  std::vector<uint64_t> values;
  Domain domain;
  std::vector<std::string> labels;  // index -> original token
};

// One value token per line; tokens become indices by first occurrence.
// An optional leading "value" header line is skipped.
inline Dataset ingest_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("csv: cannot open " + path);
  Dataset ds;
  std::unordered_map<std::string, uint64_t> index;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line == "value") continue;
    if (line.empty())
      throw InputError("csv: empty token at line " + std::to_string(line_no));
    for (unsigned char c : line) {
      // reject continuation bytes with no lead byte and raw controls
      if (c < 0x20 && c != '\t')
        throw InputError("csv: non-text byte at line " + std::to_string(line_no));
    }
    auto [it, inserted] = index.emplace(line, ds.labels.size());
    if (inserted) ds.labels.push_back(line);
    ds.values.push_back(it->second);
  }
  if (ds.values.empty()) throw InputError("csv: empty file " + path);
  ds.domain.size = ds.labels.size();
  return ds;
}

}  // namespace shufdp
