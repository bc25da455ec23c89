/*
 * Copyright 2026 The SpecDet Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SPECDET_CPS_HPP_
#define SPECDET_CPS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace specdet::cps {

inline constexpr std::string_view kTraceHeader =
    "timestamp_us,pid,process_name,l3_tca,l3_tcm,tot_ins,label";

// One per-process counter reading. Label 1 = malicious, 0 = benign.
struct CpsSample {
  std::uint64_t timestamp_us = 0;
  std::int64_t pid = 0;
  std::string process_name;
  std::uint64_t l3_tca = 0;  // L3 total cache accesses
  std::uint64_t l3_tcm = 0;  // L3 total cache misses
  std::uint64_t tot_ins = 0; // total instructions (a.k.a. TOT_INST)
  std::optional<int> label;

  friend bool operator==(const CpsSample&, const CpsSample&) = default;
};

struct CpsFeatureRow {
  double l3_tca = 0.0;
  double l3_tcm = 0.0;
  double tot_ins = 0.0;
  double miss_rate = 0.0;
  std::optional<int> label;

  // {l3_tca, l3_tcm, tot_ins, miss_rate}
  Eigen::Vector4d vector() const { return {l3_tca, l3_tcm, tot_ins, miss_rate}; }
};

inline constexpr int kFeatureDim = 4;

// Throws DataError for l3_tcm > l3_tca, bad labels or unwritable names.
void validate_sample(const CpsSample& s);

std::vector<CpsSample> read_trace(std::istream& in);
std::vector<CpsSample> parse_trace(const std::filesystem::path& file);
void write_trace(std::ostream& out, const std::vector<CpsSample>& samples);
void save_trace(const std::filesystem::path& file, const std::vector<CpsSample>& samples);

std::vector<CpsFeatureRow> derive_features(const std::vector<CpsSample>& samples);
double miss_rate(const CpsSample& s);

// Per-class generator parameters. Accesses and instructions are log-normal
// around their means with log-space spread `dispersion`; the miss ratio is
// Beta-distributed with mean `mean_miss_ratio` and concentration
// `concentration`.
struct TrafficProfile {
  double mean_access = 0.0;
  double mean_miss_ratio = 0.0;
  double instr_rate = 0.0;
  double dispersion = 0.0;
  double concentration = 0.0;
  // When > 0, instructions are tied to misses: tot_ins ~ misses * ins_per_miss.
  double ins_per_miss = 0.0;
};

TrafficProfile default_benign_profile();
TrafficProfile default_attack_profile();

class SynthConfig {
 public:
  // Defaults: 1000 benign, 250 attack samples, seed 42.
  SynthConfig();
  // Throws UsageError unless attack.mean_miss_ratio > benign.mean_miss_ratio
  // and every profile parameter is in range.
  SynthConfig(std::size_t n_benign, std::size_t n_attack, TrafficProfile benign,
              TrafficProfile attack, std::uint64_t seed);

  std::size_t n_benign() const { return n_benign_; }
  std::size_t n_attack() const { return n_attack_; }
  const TrafficProfile& benign() const { return benign_; }
  const TrafficProfile& attack() const { return attack_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t interval_us() const { return 1000; }

 private:
  std::size_t n_benign_;
  std::size_t n_attack_;
  TrafficProfile benign_;
  TrafficProfile attack_;
  std::uint64_t seed_;
};

SynthConfig make_synth_config(std::size_t n_benign, std::size_t n_attack, std::uint64_t seed);

/// Labeled samples from both profiles, class order shuffled, timestamps
/// advancing one interval per sample. Deterministic in the seed.
std::vector<CpsSample> synth_trace(const SynthConfig& config);

}  // namespace specdet::cps

#endif  // SPECDET_CPS_HPP_
