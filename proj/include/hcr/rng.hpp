#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <vector>

namespace hcr {

/// Deterministic, platform-independent random source (xoshiro256** core).
///
/// All samplers are hand-rolled on top of uniform() so that sequences are
/// reproducible across compilers and standard libraries. Streams for distinct
/// purposes are derived from one master seed via derive_seed(), which absorbs
/// a list of integer tags with a splitmix64 mixer.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double uniform();

  /// Uniform integer in [lo, hi] inclusive. Requires lo <= hi.
  int uniform_int(int lo, int hi);

  /// Poisson sample by inversion (sequential search). Requires mean >= 0.
  /// Means used in this project are small (single digits), where inversion
  /// is both fast and exactly reproducible.
  int poisson(double mean);

  /// Binomial(trials, p) as independent Bernoulli draws. One uniform is
  /// consumed per trial, which keeps draws coupled across scenarios that
  /// share the stream (common random numbers).
  int binomial(int trials, double p);

  /// Geometric on {1, 2, ...} with success probability p, by inversion.
  int geometric(double p);

  /// Sample an index from a discrete distribution given cumulative weights.
  /// cumulative.back() must be > 0; values are not required to be normalized.
  int discrete(const std::vector<double>& cumulative);

 private:
  std::uint64_t s_[4];
};

/// Mix a master seed with a sequence of tags into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

/// Stable 64-bit tag for a short label (FNV-1a). Used to name streams.
constexpr std::uint64_t stream_tag(std::string_view label) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace hcr
