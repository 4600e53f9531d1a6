#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "permclust/permutation.hpp"
#include "permclust/rational.hpp"

namespace permclust {

/// Counter-based generator: output i is a bijective 64-bit mix of
/// key + i*odd-constant, so streams are reproducible and cheap to split.
/// Identical (seed, stream) pairs yield identical draws on every platform.
class CounterRng {
public:
  static CounterRng from_seed(std::uint64_t seed);
  /// Independent stream derived from this generator's key; does not advance
  /// or share state with the parent.
  CounterRng stream(std::uint64_t index) const;

  std::uint64_t next();
  /// Unbiased draw from {0, .., bound-1} by masked rejection.
  std::uint64_t below(std::uint64_t bound);
  /// Unbiased draw from {0, .., bound-1} for big bounds by bit-rejection.
  BigInt below_big(const BigInt& bound);

private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

/// Exact uniform sampler over S_n^{av(231)} following the recursive
/// decomposition at the maximum: the position j of the largest value is drawn
/// with probability C_{j-1}C_{n-j}/C_n, then the two sides are filled
/// independently. Position draws use per-size cumulative tables scaled to 128
/// bits, with an exact big-integer tie-break on the (measure ~2^-128) boundary
/// cases, so the sampler is exactly uniform.
class Catalan231Sampler {
public:
  explicit Catalan231Sampler(int max_n);

  int max_size() const { return max_n_; }
  Permutation sample(int n, CounterRng& rng) const;
  /// Position of the maximum at block size m for a given 128-bit draw;
  /// exposed for the tie-break path and the distribution tests.
  int split_position(int m, unsigned __int128 x, CounterRng& rng) const;

private:
  int max_n_ = 0;
  std::vector<std::vector<unsigned __int128>> bounds_;  // per size: m-1 scaled prefix sums
  std::vector<BigInt> catalans_;
};

Permutation sample_231(int n, CounterRng& rng);

/// Exact uniform sampler over S_n^{av(321)}: a uniform Dyck path (cycle
/// lemma) decoded through the excedance correspondence.
Permutation sample_321(int n, CounterRng& rng);

/// Uniform Dyck word of semilength n: +1/-1 steps, all prefix sums >= 0.
std::vector<int> uniform_dyck_word(int n, CounterRng& rng);
Permutation dyck_to_321_avoider(const std::vector<int>& word);

/// Uniform member of any class by indexing into the materialized
/// lexicographic enumeration (cap-guarded, cached per class and size).
Permutation sample_enumerated(int n, const AvoidanceClass& cls, CounterRng& rng);

enum class SampleMethod { automatic, recursive231, dyck321, enumerated };

SampleMethod parse_sample_method(const std::string& name);

/// Uniform member of the class via the given method. `automatic` picks the
/// dedicated sampler for a single length-3 pattern (routing through the
/// class-preserving symmetries when needed) and falls back to enumeration.
Permutation sample_class(int n, const AvoidanceClass& cls, SampleMethod method,
                         CounterRng& rng);

struct MCParams {
  int n = 0;
  int k = 0;
  std::optional<Permutation> tau;  // empty: total cluster count
  AvoidanceClass cls;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  SampleMethod method = SampleMethod::automatic;
};

struct MCEstimate {
  std::uint64_t samples = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double stderr_of_mean = 0.0;
  std::uint64_t seed = 0;
  int workers = 1;
  // exact accumulators, so merged results are reproducible bit for bit
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
};

/// Monte Carlo estimate of the mean cluster count. Worker w draws from the
/// stream (seed, w), and estimates merge by exact count aggregation, so the
/// result depends only on (params, workers), not on scheduling.
MCEstimate monte_carlo(const MCParams& params);

}  // namespace permclust
