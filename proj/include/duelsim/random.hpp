#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace duelsim {

/// A seeded random stream.
///
/// Every sampler in the library draws through a Stream, so two streams built
/// from the same seed produce identical draw sequences. A Stream is
/// single-owner; concurrent runs each hold their own.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1), built from the top 53 bits.
  double uniform();
  /// Uniform integer in [0, n). Requires n > 0.
  std::size_t index(std::size_t n);
  double normal();
  double gamma(double shape);
  double beta(double a, double b);
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Child seed keyed by (master, a, b). Used to split one master seed into
/// independent per-run / per-purpose streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t label_hash(std::string_view text);

}  // namespace duelsim
