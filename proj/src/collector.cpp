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

#include "specdet/collector.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "specdet/error.hpp"
#include "specdet/text_util.hpp"

#if defined(__linux__)
#include <linux/perf_event.h>
#include <sys/ioctl.h>
#include <sys/syscall.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#endif

namespace specdet::cps {

#if defined(__linux__)
namespace {

const std::vector<std::string> kPerfEvents = {"LLC_REFERENCES (L3_TCA)", "LLC_MISSES (L3_TCM)",
                                              "INSTRUCTIONS (TOT_INS)"};

class FileDescriptor {
 public:
  FileDescriptor() = default;
  explicit FileDescriptor(int fd) : fd_(fd) {}
  FileDescriptor(FileDescriptor&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
  FileDescriptor& operator=(FileDescriptor&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = o.fd_;
      o.fd_ = -1;
    }
    return *this;
  }
  FileDescriptor(const FileDescriptor&) = delete;
  FileDescriptor& operator=(const FileDescriptor&) = delete;
  ~FileDescriptor() { reset(); }

  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

int open_counter(std::uint64_t config, std::int64_t pid, int group_fd) {
  perf_event_attr attr{};
  attr.size = sizeof(attr);
  attr.type = PERF_TYPE_HARDWARE;
  attr.config = config;
  attr.exclude_kernel = 1;
  attr.exclude_hv = 1;
  attr.inherit = 0;
  attr.read_format = PERF_FORMAT_GROUP;
  attr.disabled = group_fd == -1 ? 1 : 0;
  return static_cast<int>(
      ::syscall(SYS_perf_event_open, &attr, static_cast<pid_t>(pid), -1, group_fd, 0UL));
}

// Three-counter group attached to one process.
struct CounterGroup {
  FileDescriptor leader, misses, instructions;
};

std::optional<CounterGroup> open_group(std::int64_t pid, int* err) {
  CounterGroup g;
  g.leader = FileDescriptor(open_counter(PERF_COUNT_HW_CACHE_REFERENCES, pid, -1));
  if (g.leader.get() < 0) {
    *err = errno;
    return std::nullopt;
  }
  g.misses = FileDescriptor(open_counter(PERF_COUNT_HW_CACHE_MISSES, pid, g.leader.get()));
  g.instructions = FileDescriptor(open_counter(PERF_COUNT_HW_INSTRUCTIONS, pid, g.leader.get()));
  if (g.misses.get() < 0 || g.instructions.get() < 0) {
    *err = errno;
    return std::nullopt;
  }
  ::ioctl(g.leader.get(), PERF_EVENT_IOC_RESET, PERF_IOC_FLAG_GROUP);
  ::ioctl(g.leader.get(), PERF_EVENT_IOC_ENABLE, PERF_IOC_FLAG_GROUP);
  return g;
}

std::string remediation(int err) {
  switch (err) {
    case EACCES:
    case EPERM:
      return "insufficient privilege for perf_event_open (" + std::string(std::strerror(err)) +
             "); lower /proc/sys/kernel/perf_event_paranoid or grant CAP_PERFMON";
    case ENOENT:
    case EOPNOTSUPP:
    case ENODEV:
      return "hardware cache counters are not exposed on this host (" +
             std::string(std::strerror(err)) + "); run on bare metal or a VM with a virtual PMU";
    case ENOSYS:
      return "kernel built without perf_event support";
    default:
      return std::string("perf_event_open failed: ") + std::strerror(err);
  }
}

std::string process_name(std::int64_t pid) {
  std::ifstream in("/proc/" + std::to_string(pid) + "/comm");
  std::string name;
  std::getline(in, name);
  return name.empty() ? "?" : name;
}

class PerfSource final : public CounterSource {
 public:
  explicit PerfSource(const std::vector<std::int64_t>& pids) {
    int err = 0;
    auto self = open_group(0, &err);
    if (!self) {
      cap_.reason = remediation(err);
      return;
    }
    cap_.available = true;
    cap_.resolution_us = kMinResolutionUs;
    cap_.events = kPerfEvents;

    std::vector<std::int64_t> wanted = pids;
    if (wanted.empty()) {
      std::error_code ec;
      for (const auto& entry : std::filesystem::directory_iterator("/proc", ec)) {
        std::int64_t pid;
        if (parse_i64(entry.path().filename().string(), pid)) wanted.push_back(pid);
      }
    }
    for (std::int64_t pid : wanted) {
      int e = 0;
      auto g = open_group(pid, &e);
      if (!g) continue;
      targets_.push_back({pid, process_name(pid)});
      groups_.emplace(pid, std::move(*g));
    }
  }

  CollectorCapability capability() const override { return cap_; }
  std::vector<MonitoredProcess> targets() const override { return targets_; }

  std::optional<CounterReading> read(std::int64_t pid) override {
    auto it = groups_.find(pid);
    if (it == groups_.end()) return std::nullopt;
    std::uint64_t buf[4] = {0, 0, 0, 0};
    ssize_t n = ::read(it->second.leader.get(), buf, sizeof(buf));
    if (n != static_cast<ssize_t>(sizeof(buf)) || buf[0] != 3) return std::nullopt;
    return CounterReading{buf[1], buf[2], buf[3]};
  }

 private:
  CollectorCapability cap_;
  std::vector<MonitoredProcess> targets_;
  std::map<std::int64_t, CounterGroup> groups_;
};

}  // namespace

std::unique_ptr<CounterSource> make_perf_source(const std::vector<std::int64_t>& pids) {
  return std::make_unique<PerfSource>(pids);
}

CollectorCapability probe_capability() {
  int err = 0;
  if (open_group(0, &err)) {
    return {true, kMinResolutionUs, kPerfEvents, ""};
  }
  return {false, 0, {}, remediation(err)};
}

#else

namespace {
class UnsupportedSource final : public CounterSource {
 public:
  CollectorCapability capability() const override {
    return {false, 0, {}, "live collection requires Linux perf_event"};
  }
  std::vector<MonitoredProcess> targets() const override { return {}; }
  std::optional<CounterReading> read(std::int64_t) override { return std::nullopt; }
};
}  // namespace

std::unique_ptr<CounterSource> make_perf_source(const std::vector<std::int64_t>&) {
  return std::make_unique<UnsupportedSource>();
}

CollectorCapability probe_capability() {
  return {false, 0, {}, "live collection requires Linux perf_event"};
}

#endif

CollectStats collect_live(CounterSource& source, std::uint64_t interval_us,
                          std::uint64_t duration_s,
                          const std::function<void(const CpsSample&)>& sink,
                          std::size_t queue_capacity) {
  const CollectorCapability cap = source.capability();
  if (!cap.available) {
    throw CapabilityError("live collection unavailable: " + cap.reason);
  }
  if (interval_us < cap.resolution_us) {
    throw UsageError("interval " + std::to_string(interval_us) + " us is below the " +
                     std::to_string(cap.resolution_us) + " us counter resolution");
  }
  if (queue_capacity == 0) throw UsageError("queue capacity must be positive");

  using Clock = std::chrono::steady_clock;
  const auto interval = std::chrono::microseconds(interval_us);
  const auto start = Clock::now();
  const auto stop_at = start + std::chrono::seconds(duration_s);
  const std::vector<MonitoredProcess> targets = source.targets();

  CollectStats stats;
  std::mutex mu;
  std::condition_variable cv;
  std::deque<CpsSample> queue;
  bool done = false;
  std::atomic<bool> cancelled{false};

  std::thread producer([&] {
    std::map<std::int64_t, CounterReading> previous;
    for (const auto& t : targets) {
      if (auto r = source.read(t.pid)) previous[t.pid] = *r;
    }
    auto next = start + interval;
    while (next <= stop_at && !cancelled.load()) {
      std::this_thread::sleep_until(next);
      const auto ts = static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::microseconds>(next - start).count());
      std::vector<CpsSample> batch;
      std::uint64_t overflow = 0;
      for (const auto& t : targets) {
        auto r = source.read(t.pid);
        if (!r) continue;
        auto prev_it = previous.find(t.pid);
        if (prev_it == previous.end()) {
          previous[t.pid] = *r;
          continue;
        }
        const CounterReading prev = prev_it->second;
        prev_it->second = *r;
        if (r->l3_tca < prev.l3_tca || r->l3_tcm < prev.l3_tcm || r->tot_ins < prev.tot_ins) {
          ++overflow;
          continue;
        }
        CpsSample s;
        s.timestamp_us = ts;
        s.pid = t.pid;
        s.process_name = t.name;
        s.l3_tca = r->l3_tca - prev.l3_tca;
        s.l3_tcm = r->l3_tcm - prev.l3_tcm;
        s.tot_ins = r->tot_ins - prev.tot_ins;
        if (s.l3_tcm > s.l3_tca) {
          ++overflow;
          continue;
        }
        batch.push_back(std::move(s));
      }
      {
        std::lock_guard lock(mu);
        stats.dropped_overflow += overflow;
        for (auto& s : batch) {
          if (queue.size() >= queue_capacity) {
            queue.pop_front();
            ++stats.dropped_backpressure;
          }
          queue.push_back(std::move(s));
        }
      }
      cv.notify_one();
      next += interval;
      const auto now = Clock::now();
      if (now > next + interval) {
        const auto behind = (now - next) / interval;
        stats.missed_ticks += static_cast<std::uint64_t>(behind);
        next += behind * interval;
      }
    }
    {
      std::lock_guard lock(mu);
      done = true;
    }
    cv.notify_one();
  });

  try {
    for (;;) {
      std::deque<CpsSample> ready;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return done || !queue.empty(); });
        if (queue.empty() && done) break;
        ready.swap(queue);
      }
      for (const auto& s : ready) {
        sink(s);
        ++stats.emitted;
      }
    }
  } catch (...) {
    cancelled.store(true);
    producer.join();
    throw;
  }
  producer.join();
  return stats;
}

}  // namespace specdet::cps
