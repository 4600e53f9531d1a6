#pragma once

#include <optional>
#include <string>
#include <vector>

#include "permclust/permutation.hpp"
#include "permclust/rational.hpp"

namespace permclust {

/// The distinguished cluster pattern whose expected count grows linearly:
/// k..1 for eta in {231, 312, 123}, 1..k for eta in {132, 213, 321}.
Permutation tau_star(const Permutation& eta, int k);

struct UniformBaseline {
  BigRational prob_per_l;  // chance that a fixed value window clusters
  BigRational expected_count;
};
/// Cluster statistics under the uniform measure on all of S_n.
UniformBaseline uniform_baseline(int n, int k);

/// Exact expected number of length-k clusters with pattern tau under the
/// uniform measure on S_n^{av(eta)}, eta of length 3. Returns 0 when tau
/// itself contains eta (such clusters cannot occur).
BigRational expectation_s3(int n, int k, const Permutation& tau, const Permutation& eta);

/// Expected total number of length-k clusters over S_n^{av(eta)}.
BigRational expectation_s3_total(int n, int k, const Permutation& eta);

/// Exact probability, over S_n^{av(321)}, that the values {l..l+k-1} occupy
/// k consecutive positions in pattern tau: C_{l-1}C_{n-k-l+1}/C_n for
/// non-identity tau, and the l-independent C_{n-k+1}/C_n for tau = 1..k.
/// Returns 0 when tau contains 321.
BigRational cluster_event_probability_321(int n, int k, int l, const Permutation& tau);

/// Expected tau-cluster count over S_n^{av(c)} for a class of simple patterns
/// of length >= 4; the value does not depend on tau as long as tau avoids the
/// class (and is 0 otherwise).
BigRational expectation_simple_multi(int n, int k, const Permutation& tau,
                                     const AvoidanceClass& cls);
BigRational expectation_simple_multi_total(int n, int k, const AvoidanceClass& cls);

enum class AsymptoticKind {
  nonmon_nonstar,   // E/n -> 1/(2*4^(k-1)), eta in {132,213,231,312}
  nonmon_star,      // E/n -> 1/4^(k-1)
  nonmon_total,     // E/n -> (C_k+1)/(2*4^(k-1))
  mon_nonstar,      // E itself -> 1/4^(k-1), eta in {123,321}
  mon_star,         // E/n -> 1/4^(k-1)
  mon_total,        // E/n -> 1/4^(k-1)
  separable,        // E/n -> (3-2*sqrt(2))^(k-1)
  separable_total,  // times the number of separable patterns of length k
  sw_general,       // E/n -> 1/L^(k-1), L estimated via sw_ratio
};

AsymptoticKind parse_asymptotic_kind(const std::string& name);
std::string to_string(AsymptoticKind kind);

struct AsymptoticConstant {
  std::string description;            // human-readable closed form
  std::optional<BigRational> exact;   // set when the constant is rational
  double value = 0.0;                 // 15-significant-digit rendering domain
};

struct AsymptoticPoint {
  int n = 0;
  BigRational exact_value;  // the finite-n quantity being compared
  double value = 0.0;
  double relative_gap = 0.0;  // |value - constant| / constant
};

struct AsymptoticReport {
  AsymptoticKind kind;
  int k = 0;
  AsymptoticConstant constant;
  std::vector<AsymptoticPoint> points;
  // For mon_total only: the two additive terms of the growing-k expansion
  // n/4^(k-1) + 4/(sqrt(pi) k^(3/2)), reported per n without asserting which
  // dominates.
  struct TwoTerm {
    double linear = 0.0;
    double offset = 0.0;
  };
  std::vector<TwoTerm> two_term;
};

/// Finite-n evaluations of a normalized cluster expectation against its limit
/// constant. `cls` is consulted only by the separable/sw_general kinds
/// (defaulting to {2413,3142} for the separable ones).
AsymptoticReport asymptotic_constants(AsymptoticKind kind, int k, const std::vector<int>& ns,
                                      const std::optional<AvoidanceClass>& cls = std::nullopt);

}  // namespace permclust
