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

#ifndef SPECDET_COLLECTOR_HPP_
#define SPECDET_COLLECTOR_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "specdet/cps.hpp"

namespace specdet::cps {

// Finest sampling interval the toolkit accepts.
inline constexpr std::uint64_t kMinResolutionUs = 3;

struct CollectorCapability {
  bool available = false;
  std::uint64_t resolution_us = 0;
  std::vector<std::string> events;
  std::string reason;  // remediation hint when unavailable
};

// Cumulative counter values for one process.
struct CounterReading {
  std::uint64_t l3_tca = 0;
  std::uint64_t l3_tcm = 0;
  std::uint64_t tot_ins = 0;
};

struct MonitoredProcess {
  std::int64_t pid = 0;
  std::string name;
};

class CounterSource {
 public:
  virtual ~CounterSource() = default;
  virtual CollectorCapability capability() const = 0;
  virtual std::vector<MonitoredProcess> targets() const = 0;
  // nullopt when the process has gone away or the read failed.
  virtual std::optional<CounterReading> read(std::int64_t pid) = 0;
};

/// Linux perf_event backend counting LLC references, LLC misses and retired
/// instructions per process (user space only). An empty `pids` list means
/// every process the caller may attach to.
std::unique_ptr<CounterSource> make_perf_source(const std::vector<std::int64_t>& pids);

// Probes by attaching to the calling process.
CollectorCapability probe_capability();

struct CollectStats {
  std::uint64_t emitted = 0;
  std::uint64_t dropped_overflow = 0;      // counter wrapped or misses > accesses
  std::uint64_t dropped_backpressure = 0;  // queue full, oldest sample discarded
  std::uint64_t missed_ticks = 0;          // producer fell behind the interval
};

/// Samples every target each `interval_us` until `duration_s` elapses and
/// hands per-interval deltas to `sink`, in order, on the calling thread.
///
/// A single producer thread reads the counters into a bounded queue of
/// `queue_capacity` samples; when the consumer lags the oldest queued
/// sample is dropped. Throws CapabilityError if the source is unavailable
/// and UsageError if interval_us is below the source resolution.
CollectStats collect_live(CounterSource& source, std::uint64_t interval_us,
                          std::uint64_t duration_s,
                          const std::function<void(const CpsSample&)>& sink,
                          std::size_t queue_capacity = 1 << 16);

}  // namespace specdet::cps

#endif  // SPECDET_COLLECTOR_HPP_
