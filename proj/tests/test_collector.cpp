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

#include <gtest/gtest.h>

#include <map>
#include <stdexcept>
#include <thread>
#include <unistd.h>

#include "specdet/collector.hpp"
#include "specdet/error.hpp"

namespace specdet::cps {
namespace {

// Counters advance by fixed steps on every read.
class FakeSource : public CounterSource {
 public:
  explicit FakeSource(std::vector<MonitoredProcess> targets, bool available = true)
      : targets_(std::move(targets)), available_(available) {}

  CollectorCapability capability() const override {
    CollectorCapability c;
    c.available = available_;
    c.resolution_us = kMinResolutionUs;
    c.events = {"fake"};
    if (!available_) c.reason = "fake source switched off";
    return c;
  }
  std::vector<MonitoredProcess> targets() const override { return targets_; }
  std::optional<CounterReading> read(std::int64_t pid) override {
    auto& r = state_[pid];
    ++reads_;
    if (wrap_every_ && reads_ % wrap_every_ == 0) {
      r = {};  // counter reset looks like a wrap
      return r;
    }
    r.l3_tca += 100;
    r.l3_tcm += miss_step_;
    r.tot_ins += 1000;
    return r;
  }

  std::uint64_t miss_step_ = 10;
  std::uint64_t wrap_every_ = 0;

 private:
  std::vector<MonitoredProcess> targets_;
  bool available_;
  std::map<std::int64_t, CounterReading> state_;
  std::uint64_t reads_ = 0;
};

TEST(Collector, UnavailableSourceIsCapabilityError) {
  FakeSource src({{1, "a"}}, false);
  EXPECT_THROW(collect_live(src, 1000, 1, [](const CpsSample&) {}), CapabilityError);
}

TEST(Collector, IntervalBelowResolution) {
  FakeSource src({{1, "a"}});
  EXPECT_THROW(collect_live(src, 1, 1, [](const CpsSample&) {}), UsageError);
}

TEST(Collector, NominalRateAndOrdering) {
  FakeSource src({{10, "alpha"}, {20, "beta"}});
  std::map<std::int64_t, std::vector<CpsSample>> per_pid;
  const auto stats =
      collect_live(src, 1000, 1, [&](const CpsSample& s) { per_pid[s.pid].push_back(s); });
  ASSERT_EQ(per_pid.size(), 2u);
  std::uint64_t total = 0;
  for (const auto& [pid, samples] : per_pid) {
    total += samples.size();
    EXPECT_GE(samples.size(), 800u) << pid;
    EXPECT_LE(samples.size(), 1200u) << pid;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      EXPECT_NO_THROW(validate_sample(samples[i]));
      EXPECT_EQ(samples[i].l3_tca, 100u);
      EXPECT_EQ(samples[i].l3_tcm, 10u);
      EXPECT_EQ(samples[i].tot_ins, 1000u);
      EXPECT_FALSE(samples[i].label.has_value());
      if (i > 0) {
        EXPECT_GE(samples[i].timestamp_us, samples[i - 1].timestamp_us);
      }
    }
    EXPECT_EQ(samples.front().process_name, pid == 10 ? "alpha" : "beta");
  }
  EXPECT_EQ(stats.emitted, total);
  EXPECT_EQ(stats.dropped_overflow, 0u);
  EXPECT_EQ(stats.dropped_backpressure, 0u);
}

TEST(Collector, ImpossibleDeltasAreDropped) {
  FakeSource src({{1, "a"}});
  src.miss_step_ = 200;  // misses grow faster than accesses
  std::uint64_t seen = 0;
  const auto stats = collect_live(src, 10000, 1, [&](const CpsSample&) { ++seen; });
  EXPECT_EQ(seen, 0u);
  EXPECT_GT(stats.dropped_overflow, 0u);
}

TEST(Collector, CounterWrapIsDropped) {
  FakeSource src({{1, "a"}});
  src.wrap_every_ = 5;
  std::uint64_t seen = 0;
  const auto stats = collect_live(src, 10000, 1, [&](const CpsSample&) { ++seen; });
  EXPECT_GT(stats.dropped_overflow, 0u);
  EXPECT_GT(seen, 0u);
  EXPECT_EQ(stats.emitted, seen);
}

TEST(Collector, SlowConsumerDropsOldest) {
  std::vector<MonitoredProcess> many;
  for (int p = 0; p < 50; ++p) many.push_back({p, "p"});
  FakeSource src(many);
  std::uint64_t seen = 0;
  const auto stats = collect_live(
      src, 1000, 1,
      [&](const CpsSample&) {
        ++seen;
        if (seen % 100 == 0) std::this_thread::sleep_for(std::chrono::milliseconds(20));
      },
      8);
  EXPECT_GT(stats.dropped_backpressure, 0u);
  EXPECT_EQ(stats.emitted, seen);
}

TEST(Collector, SinkExceptionStopsCollection) {
  FakeSource src({{1, "a"}});
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_THROW(collect_live(src, 1000, 5,
                            [](const CpsSample&) { throw std::runtime_error("disk full"); }),
               std::runtime_error);
  EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::seconds(3));
}

TEST(Collector, PerfProbeReportsAReason) {
  const auto cap = probe_capability();
  if (cap.available) {
    EXPECT_GE(cap.resolution_us, kMinResolutionUs);
    EXPECT_FALSE(cap.events.empty());
  } else {
    EXPECT_FALSE(cap.reason.empty());
    auto src = make_perf_source({static_cast<std::int64_t>(::getpid())});
    EXPECT_THROW(collect_live(*src, 1000, 1, [](const CpsSample&) {}), CapabilityError);
  }
}

}  // namespace
}  // namespace specdet::cps
