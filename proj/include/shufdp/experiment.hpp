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
// Batch experiment grids: run a list of methods over an epsilon_c grid on
// a real or synthetic dataset, emit JSON-lines records plus a CSV summary.
// Emitted files are deterministic functions of the spec; wall times live
// only in the in-memory records so reruns stay byte-identical.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shufdp/amplification.hpp"
#include "shufdp/data.hpp"
#include "shufdp/errors.hpp"
#include "shufdp/mechanisms.hpp"
#include "shufdp/transcript.hpp"

namespace shufdp {

struct ExperimentSpec {
  // dataset: CSV path, or synthetic Zipf when csv_path is empty
  std::string csv_path;
  uint64_t n = 10000;
  uint64_t d = 100;
  double zipf_exponent = 1.1;

  std::vector<std::string> methods{"base", "grr", "solh", "ue"};
  std::vector<double> eps_c_grid{0.2, 0.4, 0.6, 0.8, 1.0};
  double delta = 1e-9;
  uint32_t repetitions = 10;
  uint64_t seed = 1;
  std::string output_prefix;  // writes <prefix>.jsonl and <prefix>.csv
};

struct ResultRecord {
  std::string method;
  double eps_c = 0;
  uint32_t repetition = 0;
  double mse_value = 0;
  std::string estimate_digest;
  double wall_ms = 0;  // not serialized: keeps output files deterministic
  bool skipped = false;
  std::string skip_reason;
};

namespace detail {

inline std::string freq_digest(const FrequencyVector& f) {
  std::vector<uint8_t> bytes;
  bytes.reserve(f.size() * 8);
  for (double x : f) {
    uint64_t u;
    static_assert(sizeof(u) == sizeof(x));
    std::memcpy(&u, &x, 8);
    for (int i = 0; i < 8; ++i) bytes.push_back(uint8_t(u >> (8 * i)));
  }
  return digest_hex(bytes);
}

// Resolves (method, eps_c) to a runnable cell; empty optional with reason
// when the analytic feasibility predicate rejects it.
struct Cell {
  std::function<FrequencyVector(const std::vector<uint64_t>&, Rng&)> run;
};

inline std::optional<Cell> resolve_cell(const std::string& method, double eps_c,
                                        uint64_t n, uint64_t d, double delta,
                                        std::string& reason) {
  try {
    if (method == "base") {
      Cell c;
      c.run = [d](const std::vector<uint64_t>&, Rng&) {
        return FrequencyVector(d, 1.0 / double(d));
      };
      return c;
    }
    if (method == "grr") {
      double eps_l = invert_amplification(AmplifyMethod::kGrr, eps_c, n, d, delta);
      Cell c;
      c.run = [eps_l, d](const std::vector<uint64_t>& vals, Rng& rng) {
        GrrConfig cfg(eps_l, d);
        std::vector<Report> reports;
        reports.reserve(vals.size());
        for (uint64_t v : vals) reports.push_back(grr_perturb(v, cfg, rng));
        return grr_aggregate(reports, cfg);
      };
      return c;
    }
    if (method == "solh") {
      uint32_t dp = optimal_dprime(eps_c, n, delta);
      if (dp > d) dp = uint32_t(d);
      double eps_l = invert_amplification(AmplifyMethod::kSolh, eps_c, n, dp, delta);
      Cell c;
      c.run = [eps_l, d, dp](const std::vector<uint64_t>& vals, Rng& rng) {
        SolhConfig cfg(eps_l, d, dp);
        std::vector<Report> reports;
        reports.reserve(vals.size());
        for (uint64_t v : vals) reports.push_back(solh_perturb(v, cfg, rng));
        return solh_aggregate(reports, cfg);
      };
      return c;
    }
    if (method == "ue") {
      double eps_l = invert_amplification(AmplifyMethod::kUe, eps_c, n, 0, delta);
      Cell c;
      c.run = [eps_l, d](const std::vector<uint64_t>& vals, Rng& rng) {
        UeConfig cfg(eps_l, d);
        std::vector<Report> reports;
        reports.reserve(vals.size());
        for (uint64_t v : vals) reports.push_back(ue_perturb(v, cfg, rng));
        return ue_aggregate(reports, cfg);
      };
      return c;
    }
    if (method == "aue") {
      AueConfig cfg(eps_c, n, delta, d);
      Cell c;
      c.run = [cfg](const std::vector<uint64_t>& vals, Rng& rng) {
        std::vector<Report> reports;
        reports.reserve(vals.size());
        for (uint64_t v : vals) reports.push_back(aue_encode(v, cfg, rng));
        return aue_aggregate(reports, cfg);
      };
      return c;
    }
    reason = "unknown method";
    return std::nullopt;
  } catch (const std::exception& e) {
    reason = e.what();
    return std::nullopt;
  }
}

}  // namespace detail

inline std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec) {
  if (spec.repetitions < 1)
    throw ConfigError("experiment: repetitions must be >= 1");
  std::vector<uint64_t> values;
  uint64_t d;
  if (!spec.csv_path.empty()) {
    Dataset ds = ingest_csv(spec.csv_path);
    values = std::move(ds.values);
    d = ds.domain.size;
  } else {
    values = gen_zipf(spec.n, spec.d, spec.zipf_exponent, spec.seed);
    d = spec.d;
  }
  uint64_t n = values.size();
  FrequencyVector truth = empirical_frequencies(values, d);

  std::vector<ResultRecord> records;
  Rng master(spec.seed);
  for (size_t mi = 0; mi < spec.methods.size(); ++mi) {
    for (size_t ei = 0; ei < spec.eps_c_grid.size(); ++ei) {
      double eps_c = spec.eps_c_grid[ei];
      std::string reason;
      auto cell = detail::resolve_cell(spec.methods[mi], eps_c, n, d,
                                       spec.delta, reason);
      if (!cell) {
        ResultRecord rec;
        rec.method = spec.methods[mi];
        rec.eps_c = eps_c;
        rec.skipped = true;
        rec.skip_reason = reason;
        records.push_back(rec);
        continue;
      }
      for (uint32_t rep = 0; rep < spec.repetitions; ++rep) {
        Rng rng = master.derive((uint64_t(mi) << 40) | (uint64_t(ei) << 20) | rep);
        auto t0 = std::chrono::steady_clock::now();
        FrequencyVector est = cell->run(values, rng);
        auto t1 = std::chrono::steady_clock::now();
        ResultRecord rec;
        rec.method = spec.methods[mi];
        rec.eps_c = eps_c;
        rec.repetition = rep;
        rec.mse_value = mse(truth, est);
        rec.estimate_digest = detail::freq_digest(est);
        rec.wall_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
        records.push_back(rec);
      }
    }
  }

  if (!spec.output_prefix.empty()) {
    std::ofstream jl(spec.output_prefix + ".jsonl", std::ios::binary);
    if (!jl) throw ResourceError("experiment: cannot write output");
    for (const ResultRecord& r : records) {
      nlohmann::json j{{"method", r.method},
                       {"eps_c", r.eps_c},
                       {"repetition", r.repetition},
                       {"mse", r.mse_value},
                       {"estimate_digest", r.estimate_digest},
                       {"skipped", r.skipped},
                       {"skip_reason", r.skip_reason}};
      jl << j.dump() << "\n";
    }
    // per-cell mean and standard deviation
    std::ofstream csv(spec.output_prefix + ".csv", std::ios::binary);
    csv << "method,eps_c,reps,mean_mse,std_mse,skipped,skip_reason\n";
    std::map<std::pair<std::string, double>, std::vector<double>> cells;
    std::map<std::pair<std::string, double>, std::string> skips;
    for (const ResultRecord& r : records) {
      if (r.skipped)
        skips[{r.method, r.eps_c}] = r.skip_reason;
      else
        cells[{r.method, r.eps_c}].push_back(r.mse_value);
    }
    for (const std::string& m : spec.methods) {
      for (double e : spec.eps_c_grid) {
        auto key = std::make_pair(m, e);
        char eps_buf[32];
        snprintf(eps_buf, sizeof(eps_buf), "%g", e);
        if (skips.count(key)) {
          csv << m << "," << eps_buf << ",0,,,1,\"" << skips[key] << "\"\n";
          continue;
        }
        const auto& v = cells[key];
        double mean = 0;
        for (double x : v) mean += x;
        mean /= double(v.size());
        double var = 0;
        for (double x : v) var += (x - mean) * (x - mean);
        double sd = v.size() > 1 ? std::sqrt(var / double(v.size() - 1)) : 0;
        char buf[64];
        snprintf(buf, sizeof(buf), "%.9e,%.9e", mean, sd);
        csv << m << "," << eps_buf << "," << v.size() << "," << buf << ",0,\n";
      }
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// Overhead accounting

struct OverheadReport {
  std::map<std::string, uint64_t> bytes_sent;  // per party
  uint64_t shuffle_rounds = 0;
  uint64_t user_plain_upload_bytes = 0;   // per user, plaintext shares
  uint64_t user_cipher_upload_bytes = 0;  // per user, the encrypted share
  uint64_t user_plain_share_messages = 0;
};

inline OverheadReport overhead_report(const Transcript& t) {
  OverheadReport rep;
  uint64_t max_round = 0;
  bool any_shuffle = false;
  for (const Message& m : t.messages) {
    rep.bytes_sent[m.from] += m.byte_length;
    if (m.kind.rfind("reshare_to_hider", 0) == 0) {
      any_shuffle = true;
      max_round = std::max(max_round, uint64_t(m.round));
    }
    if (m.from == "user:0") {
      if (m.kind == "upload_share") {
        rep.user_plain_upload_bytes += m.byte_length;
        rep.user_plain_share_messages++;
      } else if (m.kind == "upload_share_enc") {
        rep.user_cipher_upload_bytes += m.byte_length;
      }
    }
  }
  rep.shuffle_rounds = any_shuffle ? max_round + 1 : 0;
  return rep;
}

}  // namespace shufdp
