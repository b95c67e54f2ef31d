#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "equichern/random.hpp"
#include "equichern/report.hpp"

namespace equichern {

/// Worker threads for sharded enumerations, from EQUICHERN_WORKERS (default 1).
inline int worker_count() {
  const char* env = std::getenv("EQUICHERN_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw std::invalid_argument("EQUICHERN_WORKERS must be a positive integer");
  return static_cast<int>(std::min<long>(v, 256));
}

/// Collects the instances of one check: a seeded sampler, a digest of the
/// inputs, the instance and failure counts and the shortest failing input.
class Probe {
 public:
  explicit Probe(std::uint64_t seed) : s(seed), seed_(seed) {}

  Sampler s;

  void input(std::string_view text) { digest_.add(text); }

  template <class W>
  void expect(bool ok, W&& witness) {
    ++instances_;
    if (ok) return;
    ++failed_;
    std::string w = witness();
    if (witness_.empty() || w.size() < witness_.size()) witness_ = std::move(w);
  }

  /// Runs fn(i, probe) for i in [0, count) in a fixed number of chunks. The
  /// chunks run on the worker threads and are merged in chunk order, so the
  /// result does not depend on the worker count.
  template <class F>
  void shard(long count, F fn) {
    constexpr int kChunks = 64;
    std::vector<Probe> parts;
    parts.reserve(kChunks);
    for (int c = 0; c < kChunks; ++c) parts.emplace_back(seed_ * 1099511628211ull + static_cast<std::uint64_t>(c));
    std::atomic<int> next{0};
    auto work = [&] {
      for (int c; (c = next.fetch_add(1)) < kChunks;) {
        const long lo = count * c / kChunks, hi = count * (c + 1) / kChunks;
        for (long i = lo; i < hi; ++i) fn(i, parts[c]);
      }
    };
    const int workers = std::min(worker_count(), kChunks);
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& p : parts) {
      digest_.add(p.digest_.hex());
      instances_ += p.instances_;
      failed_ += p.failed_;
      if (!p.witness_.empty() && (witness_.empty() || p.witness_.size() < witness_.size())) witness_ = p.witness_;
    }
  }

  long instances() const { return instances_; }
  long failed() const { return failed_; }
  const std::string& witness() const { return witness_; }
  std::string digest() const { return digest_.hex(); }

 private:
  std::uint64_t seed_;
  Fnv digest_;
  long instances_ = 0;
  long failed_ = 0;
  std::string witness_;
};

/// One named check. An empty `run` marks a check the scenario does not support.
struct CheckDef {
  std::string id;
  std::string anchor;
  std::string note;
  std::function<void(Probe&)> run;
};

inline CheckRecord run_check(const CheckDef& def, std::uint64_t seed) {
  CheckRecord r;
  r.id = def.id;
  r.anchor = def.anchor;
  r.note = def.note;
  if (!def.run) {
    r.status = Status::skipped_unsupported;
    r.digest = Fnv().hex();
    return r;
  }
  Fnv h;
  h.add(def.id);
  Probe p(h.value() ^ seed);
  const auto t0 = std::chrono::steady_clock::now();
  def.run(p);
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.instances = p.instances();
  r.digest = p.digest();
  if (p.instances() == 0) throw std::logic_error("check " + def.id + " ran no instances");
  if (p.failed() > 0) {
    r.status = Status::fail;
    r.counterexample = p.witness();
    r.note = (r.note.empty() ? "" : r.note + "; ") + std::to_string(p.failed()) + " of " +
             std::to_string(p.instances()) + " instances failed";
  }
  return r;
}

}  // namespace equichern
