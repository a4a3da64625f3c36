// Copyright (c) 2026 The ICM Pipeline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <chrono>
#include <memory>
#include <mutex>
#include <thread>

namespace icm {

/// Monotonic time source in seconds. The gateway's rate limiter and retry
/// backoff sleep through this interface so tests can run on simulated time.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now() = 0;
  virtual void sleep_until(double t) = 0;
  void sleep_for(double seconds) { sleep_until(now() + seconds); }
};

class SystemClock : public Clock {
 public:
  SystemClock() : start_(std::chrono::steady_clock::now()) {}

  double now() override {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  void sleep_until(double t) override {
    auto target = start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                               std::chrono::duration<double>(t));
    std::this_thread::sleep_until(target);
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Simulated clock: sleeping advances time instead of waiting. sleep_until
/// from concurrent threads never stacks delays, it only moves the clock
/// forward to the furthest requested point.
class ManualClock : public Clock {
 public:
  double now() override {
    std::lock_guard<std::mutex> lock(mu_);
    return now_;
  }

  void sleep_until(double t) override {
    std::lock_guard<std::mutex> lock(mu_);
    now_ = std::max(now_, t);
  }

  void advance(double seconds) {
    std::lock_guard<std::mutex> lock(mu_);
    now_ += seconds;
  }

 private:
  std::mutex mu_;
  double now_ = 0.0;
};

}  // namespace icm
