// Copyright 2026 The gzonoid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded, chunked Monte Carlo plumbing: configuration, running moments with
// a deterministic pairwise merge, and a chunk scheduler.

#ifndef GZONOID_MONTE_CARLO_HPP
#define GZONOID_MONTE_CARLO_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "gzonoid/errors.hpp"
#include "gzonoid/rng.hpp"

namespace gzonoid {

struct MCConfig {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  std::int64_t chunk = 1 << 16;
  // 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct EstimateWithCI {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
};

/// Count, mean and centered second moment (Welford / Chan et al.).
struct RunningMoments {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double v) noexcept {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }

  [[nodiscard]] static RunningMoments merge(const RunningMoments& a,
                                            const RunningMoments& b) noexcept {
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    RunningMoments r;
    r.n = a.n + b.n;
    const double d = b.mean - a.mean;
    const double fb = static_cast<double>(b.n) / static_cast<double>(r.n);
    r.mean = a.mean + d * fb;
    r.m2 = a.m2 + b.m2 + d * d * static_cast<double>(a.n) * fb;
    return r;
  }

  [[nodiscard]] EstimateWithCI estimate() const {
    EstimateWithCI e;
    e.mean = mean;
    e.n_samples = n;
    if (n > 1) {
      const double var = m2 / static_cast<double>(n - 1);
      e.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    }
    return e;
  }
};

/// Pairwise (tree) reduction in index order, independent of scheduling.
[[nodiscard]] inline RunningMoments pairwise_merge(
    std::vector<RunningMoments> parts) {
  if (parts.empty()) return {};
  while (parts.size() > 1) {
    std::vector<RunningMoments> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      next.push_back(RunningMoments::merge(parts[i], parts[i + 1]));
    }
    if (parts.size() % 2 == 1) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts.front();
}

/// Runs `body(chunk_index)` for every chunk in [0, n_chunks) on a small
/// thread pool. The first exception thrown by any chunk is rethrown.
template <class Body>
void for_each_chunk(std::int64_t n_chunks, unsigned threads, Body&& body) {
  if (n_chunks <= 0) return;
  unsigned workers = threads == 0 ? std::thread::hardware_concurrency() : threads;
  workers = std::max(1u, std::min<unsigned>(
                             workers, static_cast<unsigned>(std::min<std::int64_t>(
                                          n_chunks, 1 << 16))));
  if (workers == 1) {
    for (std::int64_t i = 0; i < n_chunks; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= n_chunks) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n_chunks);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline void validate(const MCConfig& cfg) {
  if (cfg.samples < 2) throw DomainError("MCConfig: samples must be >= 2");
  if (cfg.chunk < 1) throw DomainError("MCConfig: chunk must be >= 1");
}

/// Monte Carlo mean of `sample(rng)` with one Philox stream per chunk.
/// The result is a pure function of (seed, samples, chunk). Each chunk works
/// on its own copy of `sample`, so a mutable sampler may keep scratch space.
template <class Sampler>
[[nodiscard]] EstimateWithCI run_monte_carlo(const MCConfig& cfg,
                                             const Sampler& sample) {
  validate(cfg);
  const std::int64_t n_chunks = (cfg.samples + cfg.chunk - 1) / cfg.chunk;
  std::vector<RunningMoments> parts(static_cast<std::size_t>(n_chunks));
  for_each_chunk(n_chunks, cfg.threads, [&](std::int64_t c) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(c));
    const std::int64_t begin = c * cfg.chunk;
    const std::int64_t end = std::min(cfg.samples, begin + cfg.chunk);
    auto local = sample;
    RunningMoments m;
    for (std::int64_t i = begin; i < end; ++i) m.push(local(rng));
    parts[static_cast<std::size_t>(c)] = m;
  });
  return pairwise_merge(std::move(parts)).estimate();
}

}  // namespace gzonoid

#endif  // GZONOID_MONTE_CARLO_HPP
