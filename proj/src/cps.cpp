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

#include "specdet/cps.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "specdet/error.hpp"
#include "specdet/text_util.hpp"

namespace specdet::cps {

void validate_sample(const CpsSample& s) {
  if (s.l3_tcm > s.l3_tca) throw DataError("cache misses exceed accesses");
  if (s.label && *s.label != 0 && *s.label != 1) throw DataError("label must be 0, 1 or empty");
  if (s.process_name.find_first_of("\r\n") != std::string::npos) {
    throw DataError("process name contains a line break");
  }
}

std::vector<CpsSample> read_trace(std::istream& in) {
  std::vector<CpsSample> samples;
  std::map<std::int64_t, std::uint64_t> last_ts;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DataError("trace is empty: missing header at line 1");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) {
    throw DataError("bad trace header at line 1: expected '" + std::string(kTraceHeader) + "'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string at = " at line " + std::to_string(line_no);
    std::vector<std::string> f;
    try {
      f = split_csv_record(line);
    } catch (const DataError& e) {
      throw DataError(std::string("malformed row") + at + ": " + e.what());
    }
    if (f.size() != 7) {
      throw DataError("malformed row" + at + ": expected 7 fields, got " + std::to_string(f.size()));
    }
    CpsSample s;
    auto need_u64 = [&](const std::string& text, const char* name, std::uint64_t& out) {
      if (!parse_u64(text, out)) {
        throw DataError(std::string("malformed row") + at + ": bad " + name + " '" + text + "'");
      }
    };
    need_u64(f[0], "timestamp_us", s.timestamp_us);
    if (!parse_i64(f[1], s.pid)) throw DataError("malformed row" + at + ": bad pid '" + f[1] + "'");
    s.process_name = f[2];
    need_u64(f[3], "l3_tca", s.l3_tca);
    need_u64(f[4], "l3_tcm", s.l3_tcm);
    need_u64(f[5], "tot_ins", s.tot_ins);
    if (f[6] == "0") {
      s.label = 0;
    } else if (f[6] == "1") {
      s.label = 1;
    } else if (!f[6].empty()) {
      throw DataError("malformed row" + at + ": label must be 0, 1 or empty");
    }
    if (s.l3_tcm > s.l3_tca) throw DataError("cache misses exceed accesses" + at);
    auto [it, fresh] = last_ts.emplace(s.pid, s.timestamp_us);
    if (!fresh) {
      if (s.timestamp_us < it->second) {
        throw DataError("timestamp decreases for pid " + std::to_string(s.pid) + at);
      }
      it->second = s.timestamp_us;
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<CpsSample> parse_trace(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open trace " + file.string());
  return read_trace(in);
}

void write_trace(std::ostream& out, const std::vector<CpsSample>& samples) {
  out << kTraceHeader << '\n';
  for (const auto& s : samples) {
    validate_sample(s);
    out << s.timestamp_us << ',' << s.pid << ',' << quote_csv_field(s.process_name) << ','
        << s.l3_tca << ',' << s.l3_tcm << ',' << s.tot_ins << ',';
    if (s.label) out << *s.label;
    out << '\n';
  }
}

void save_trace(const std::filesystem::path& file, const std::vector<CpsSample>& samples) {
  std::ostringstream ss;
  write_trace(ss, samples);
  write_file(file, ss.str());
}

double miss_rate(const CpsSample& s) {
  if (s.l3_tca == 0) return 0.0;
  return static_cast<double>(s.l3_tcm) / static_cast<double>(s.l3_tca);
}

std::vector<CpsFeatureRow> derive_features(const std::vector<CpsSample>& samples) {
  std::vector<CpsFeatureRow> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) {
    CpsFeatureRow r;
    r.l3_tca = static_cast<double>(s.l3_tca);
    r.l3_tcm = static_cast<double>(s.l3_tcm);
    r.tot_ins = static_cast<double>(s.tot_ins);
    r.miss_rate = miss_rate(s);
    r.label = s.label;
    rows.push_back(r);
  }
  return rows;
}

TrafficProfile default_benign_profile() {
  TrafficProfile p;
  p.mean_access = 20000.0;
  p.mean_miss_ratio = 0.05;
  p.instr_rate = 2.0e6;
  p.dispersion = 0.5;
  p.concentration = 40.0;
  p.ins_per_miss = 0.0;
  return p;
}

// Flush+Reload style loop: many evictions, and the instruction count grows
// with the number of misses it provokes.
TrafficProfile default_attack_profile() {
  TrafficProfile p;
  p.mean_access = 60000.0;
  p.mean_miss_ratio = 0.5;
  p.instr_rate = 2.0e5;
  p.dispersion = 0.5;
  p.concentration = 20.0;
  p.ins_per_miss = 40.0;
  return p;
}

namespace {

void check_profile(const TrafficProfile& p, const char* which) {
  const std::string w(which);
  if (!(p.mean_access > 0.0)) throw UsageError(w + " mean_access must be > 0");
  if (!(p.mean_miss_ratio > 0.0 && p.mean_miss_ratio < 1.0)) {
    throw UsageError(w + " mean_miss_ratio must be in (0, 1)");
  }
  if (!(p.instr_rate > 0.0)) throw UsageError(w + " instr_rate must be > 0");
  if (!(p.dispersion >= 0.0)) throw UsageError(w + " dispersion must be >= 0");
  if (!(p.concentration > 0.0)) throw UsageError(w + " concentration must be > 0");
  if (!(p.ins_per_miss >= 0.0)) throw UsageError(w + " ins_per_miss must be >= 0");
}

struct ProcessSlot {
  std::int64_t pid;
  const char* name;
};

constexpr ProcessSlot kBenignProcesses[] = {
    {1021, "bash"},    {1187, "nginx"}, {1342, "postgres"}, {1409, "python3"},
    {1533, "chrome"},  {1678, "sshd"},  {1790, "make"},     {1855, "gcc"}};
constexpr ProcessSlot kAttackProcesses[] = {{4242, "spectre_v1"}, {4243, "flush_reload"}};

class ProfileSampler {
 public:
  explicit ProfileSampler(const TrafficProfile& p)
      : p_(p),
        access_(std::log(p.mean_access) - 0.5 * p.dispersion * p.dispersion, p.dispersion),
        instr_(std::log(p.instr_rate) - 0.5 * p.dispersion * p.dispersion, p.dispersion),
        noise_(-0.5 * p.dispersion * p.dispersion, p.dispersion),
        alpha_(p.mean_miss_ratio * p.concentration, 1.0),
        beta_((1.0 - p.mean_miss_ratio) * p.concentration, 1.0) {}

  void draw(std::mt19937_64& rng, CpsSample& s) {
    const double a = alpha_(rng);
    const double b = beta_(rng);
    const double ratio = (a + b) > 0.0 ? a / (a + b) : p_.mean_miss_ratio;
    s.l3_tca = static_cast<std::uint64_t>(std::llround(access_(rng)));
    s.l3_tcm = std::min(s.l3_tca,
                        static_cast<std::uint64_t>(std::llround(static_cast<double>(s.l3_tca) * ratio)));
    double ins = instr_(rng);
    if (p_.ins_per_miss > 0.0) {
      ins += static_cast<double>(s.l3_tcm) * p_.ins_per_miss * std::exp(noise_(rng));
    }
    s.tot_ins = static_cast<std::uint64_t>(std::llround(ins));
  }

 private:
  TrafficProfile p_;
  std::lognormal_distribution<double> access_;
  std::lognormal_distribution<double> instr_;
  std::normal_distribution<double> noise_;
  std::gamma_distribution<double> alpha_;
  std::gamma_distribution<double> beta_;
};

}  // namespace

SynthConfig::SynthConfig()
    : SynthConfig(1000, 250, default_benign_profile(), default_attack_profile(), 42) {}

SynthConfig::SynthConfig(std::size_t n_benign, std::size_t n_attack, TrafficProfile benign,
                         TrafficProfile attack, std::uint64_t seed)
    : n_benign_(n_benign), n_attack_(n_attack), benign_(benign), attack_(attack), seed_(seed) {
  check_profile(benign_, "benign");
  check_profile(attack_, "attack");
  if (!(attack_.mean_miss_ratio > benign_.mean_miss_ratio)) {
    throw UsageError("attack mean miss ratio must exceed benign mean miss ratio");
  }
}

SynthConfig make_synth_config(std::size_t n_benign, std::size_t n_attack, std::uint64_t seed) {
  return SynthConfig(n_benign, n_attack, default_benign_profile(), default_attack_profile(), seed);
}

std::vector<CpsSample> synth_trace(const SynthConfig& config) {
  std::mt19937_64 rng(config.seed());
  std::vector<int> labels(config.n_benign(), 0);
  labels.resize(config.n_benign() + config.n_attack(), 1);
  std::shuffle(labels.begin(), labels.end(), rng);

  ProfileSampler benign(config.benign());
  ProfileSampler attack(config.attack());
  std::uniform_int_distribution<std::size_t> pick_benign(0, std::size(kBenignProcesses) - 1);
  std::uniform_int_distribution<std::size_t> pick_attack(0, std::size(kAttackProcesses) - 1);

  std::vector<CpsSample> out;
  out.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    CpsSample s;
    s.timestamp_us = i * config.interval_us();
    s.label = labels[i];
    const ProcessSlot& slot =
        labels[i] ? kAttackProcesses[pick_attack(rng)] : kBenignProcesses[pick_benign(rng)];
    s.pid = slot.pid;
    s.process_name = slot.name;
    (labels[i] ? attack : benign).draw(rng, s);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace specdet::cps
