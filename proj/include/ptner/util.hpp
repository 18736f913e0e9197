/* Copyright 2026 The ptner Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef PTNER_UTIL_HPP_
#define PTNER_UTIL_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace ptner {

uint64_t splitmix64(uint64_t x);

// FNV-1a, used to fingerprint input files in run metadata.
uint64_t fnv1a64(const void* data, size_t n);
std::string file_fingerprint(const std::string& path);  // hex digest, "" if unreadable

// Deterministic RNG wrapper. std::mt19937_64 output is fully specified by the
// standard, and all derived draws below avoid std::*_distribution (whose
// algorithms are implementation-defined), so identical seeds give identical
// streams on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n). Multiply-shift; bias is < 2^-64 per draw.
  size_t uniform_index(size_t n) {
    return static_cast<size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Fisher–Yates.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // Deterministic substream for trial/worker `stream`.
  Rng fork(uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ (0x9E3779B97F4A7C15ULL * (stream + 1))));
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

// Thread count from PTNER_THREADS (falls back to hardware concurrency).
int env_thread_count();

// Runs fn(i) for i in [0, n) on `threads` threads. Work is split by index,
// so results written to slot i are independent of the thread count.
void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn);

}  // namespace ptner

#endif  // PTNER_UTIL_HPP_
