#pragma once

#include <cstdint>
#include <initializer_list>

namespace bmhd {

/// Counter-based generator: a stream is a pure function of (key, counter).
/// Splitting derives child keys by hashing, so results do not depend on the
/// order in which samples are drawn or on the number of threads.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(mix(key)), counter_(0) {}

  static std::uint64_t mix(std::uint64_t z);
  static std::uint64_t hash(std::initializer_list<std::uint64_t> parts);

  Rng split(std::uint64_t tag) const { return Rng(hash({key_, tag})); }

  std::uint64_t next_u64() { return mix(key_ ^ mix(++counter_)); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller, no cached pair.
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace bmhd
