#pragma once

#include <map>
#include <optional>
#include <vector>

#include "permclust/enumerate.hpp"
#include "permclust/permutation.hpp"
#include "permclust/rational.hpp"

namespace permclust {

/// A window of k consecutive positions holding k consecutive values:
/// positions start_pos..start_pos+k-1 carry the values {low_value..low_value+k-1}
/// in the relative order `pattern`.
struct ClusterOccurrence {
  int low_value = 0;  // l
  int start_pos = 0;  // m
  Permutation pattern;

  bool operator==(const ClusterOccurrence&) const = default;
};

/// All length-k cluster occurrences of sigma, sorted by start position.
std::vector<ClusterOccurrence> occurrences(const Permutation& sigma, int k);

/// Number of length-k cluster windows.
int count_clusters(const Permutation& sigma, int k);
/// Number of length-k cluster windows whose pattern equals tau.
int count_clusters_tau(const Permutation& sigma, const Permutation& tau);

struct MomentReport {
  int n = 0;
  int k = 0;
  std::optional<Permutation> tau;  // empty: the total count over all patterns
  AvoidanceClass cls;
  BigInt class_size;
  BigRational mean;
  BigRational second_moment;
  BigRational variance;
};

/// Exact moments of the cluster count statistic under the uniform measure on
/// S_n^{av(c)}, by full enumeration (cap-guarded).
MomentReport exact_moments(int n, int k, const std::optional<Permutation>& tau,
                           const AvoidanceClass& cls);

/// One enumeration pass producing the per-pattern moment table, keyed by the
/// patterns with at least one occurrence in the class (a pattern that never
/// occurs carries the zero statistic and is omitted), plus the total-count row.
struct MomentSweep {
  std::map<Permutation, MomentReport> by_tau;
  MomentReport total;
};
MomentSweep moment_sweep(int n, int k, const AvoidanceClass& cls);

/// Exact probability, over S_n^{av(c)}, that the values {l..l+k-1} occupy k
/// consecutive positions (and, when tau is given, do so in pattern tau).
BigRational event_probability(int n, int k, int l, const std::optional<Permutation>& tau,
                              const AvoidanceClass& cls);

/// Exact distribution of the cluster-count statistic over S_n^{av(c)}:
/// value -> number of class members attaining it.
std::map<int, BigInt> count_distribution(int n, int k, const std::optional<Permutation>& tau,
                                         const AvoidanceClass& cls);

/// Left boundary event for the conditional split: the top i-1 values of sigma
/// sit in the last i-1 positions in the relative order tau_1..tau_{i-1},
/// where i is the position of the maximum in tau.
bool in_left_boundary_event(const Permutation& sigma, const Permutation& tau);

/// Right boundary event: sigma starts with its largest k-1 values descending.
bool in_right_boundary_event(const Permutation& sigma, int k);

/// Verifies, for the class {231}, that the conditional law of the tau-cluster
/// count given "the maximum sits at position j" equals the independent-split
/// law (two independent copies at sizes j-1 and n-j, plus the boundary
/// indicator correction when a cluster can straddle the maximum).
bool conditional_decomposition_check(int n, int k, const Permutation& tau, int j);

/// Sum of the tau-cluster counts over the members of the left boundary event
/// at size m = n-k+i-1. These are the coefficients that bound the cross term
/// in the second-moment analysis.
BigInt cross_term_coefficient(int n, int k, const Permutation& tau);

}  // namespace permclust
