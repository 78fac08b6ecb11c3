#pragma once

// Reproducible Monte Carlo: independent mt19937_64 streams keyed by
// (seed, stream id), reduced in stream order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "ridgelet/errors.hpp"

namespace ridgelet {

struct McSpec {
  std::size_t sample_count = 100000;
  std::uint64_t seed = 20240601;
  int stream_count = 16;
  int threads = 1;

  void validate() const {
    if (sample_count < 1) throw DomainError("McSpec: sample_count must be >= 1");
    if (stream_count < 1) throw DomainError("McSpec: stream_count must be >= 1");
    if (threads < 1) throw DomainError("McSpec: threads must be >= 1");
  }
  /// Same settings with a different seed derived from a label (per scale, per probe, ...).
  McSpec derived(std::uint64_t label) const {
    McSpec m = *this;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(label), static_cast<std::uint32_t>(label >> 32), 0x9e3779b9u};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    m.seed = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    return m;
  }
};

using Rng = std::mt19937_64;

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

struct McResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

namespace detail {

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void push(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double tot = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / tot;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / tot;
    n += o.n;
  }
};

/// Runs body(stream_index) for every stream on up to `threads` workers.
template <class Body>
void for_each_stream(int streams, int threads, Body&& body) {
  const int workers = std::max(1, std::min(threads, streams));
  if (workers == 1) {
    for (int s = 0; s < streams; ++s) body(s);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int s = w; s < streams; s += workers) body(s);
    });
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Mean and standard error of sample(rng) over mc.sample_count draws.
/// Results do not depend on the thread count.
template <class Sample>
McResult run_mc(const McSpec& mc, Sample&& sample) {
  mc.validate();
  const int S = mc.stream_count;
  std::vector<detail::Moments> parts(static_cast<std::size_t>(S));
  const std::size_t base = mc.sample_count / static_cast<std::size_t>(S);
  const std::size_t extra = mc.sample_count % static_cast<std::size_t>(S);
  detail::for_each_stream(S, mc.threads, [&](int s) {
    Rng rng = make_stream(mc.seed, static_cast<std::uint64_t>(s));
    const std::size_t cnt = base + (static_cast<std::size_t>(s) < extra ? 1 : 0);
    detail::Moments mom;
    for (std::size_t i = 0; i < cnt; ++i) mom.push(sample(rng));
    parts[static_cast<std::size_t>(s)] = mom;
  });
  detail::Moments tot;
  for (const auto& p : parts) tot.merge(p);
  McResult r;
  r.samples = tot.n;
  r.estimate = tot.mean;
  r.std_error = tot.n > 1 ? std::sqrt(tot.m2 / static_cast<double>(tot.n - 1) / static_cast<double>(tot.n)) : 0.0;
  return r;
}

/// Parallel map over indices [0, count) with a fixed assignment of work.
template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  const int workers = static_cast<int>(std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < count; i += static_cast<std::size_t>(workers)) body(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace ridgelet
