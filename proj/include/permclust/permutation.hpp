#pragma once

#include <string>
#include <vector>

#include "permclust/errors.hpp"

namespace permclust {

// A word is a sequence of distinct positive integers, not necessarily 1..m.
// Prefixes of permutations under construction are words.
using Word = std::vector<int>;

/// One-line notation sigma_1 .. sigma_n over {1..n}. Immutable once built.
/// Positions and values are 1-based throughout, matching the usual
/// combinatorial conventions; word() exposes the raw 0-indexed buffer.
class Permutation {
public:
  explicit Permutation(std::vector<int> word);

  static Permutation identity(int n);
  static Permutation decreasing(int n);

  int size() const { return static_cast<int>(word_.size()); }
  int at(int pos) const { return word_[pos - 1]; }  // 1-based position
  const std::vector<int>& word() const { return word_; }

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation&) const = default;

private:
  std::vector<int> word_;
};

enum class Symmetry { reverse, complement, reverse_complement };

/// A window of consecutive positions: start_pos (1-based) and length.
struct Interval {
  int start_pos = 0;
  int length = 0;
  bool operator==(const Interval&) const = default;
  auto operator<=>(const Interval&) const = default;
};

/// Finite set of patterns, each of length >= 2, kept sorted and deduplicated.
class AvoidanceClass {
public:
  AvoidanceClass() = default;  // no patterns: the full symmetric group
  explicit AvoidanceClass(std::vector<Permutation> patterns);
  static AvoidanceClass parse(const std::string& text);  // "2413+3142"

  const std::vector<Permutation>& patterns() const { return patterns_; }
  std::string key() const;  // canonical serialization, usable as a cache key

  bool operator==(const AvoidanceClass&) const = default;
  auto operator<=>(const AvoidanceClass&) const = default;

private:
  std::vector<Permutation> patterns_;
};

/// Pattern of a word: the unique permutation with the same relative order.
Permutation reduce(const Word& w);

Permutation symmetry(const Permutation& sigma, Symmetry which);
Permutation reverse(const Permutation& sigma);
Permutation complement(const Permutation& sigma);
Permutation reverse_complement(const Permutation& sigma);

/// Subsequence containment of a pattern inside a word with distinct entries.
bool word_contains(const Word& w, const Permutation& pattern);
/// Containment restricted to occurrences whose last element is w.back().
/// This is the incremental test used while growing prefixes.
bool word_contains_ending_at_last(const Word& w, const Permutation& pattern);

bool contains(const Permutation& sigma, const Permutation& pattern);
bool avoids_all(const Permutation& sigma, const AvoidanceClass& cls);
bool word_avoids_all(const Word& w, const AvoidanceClass& cls);

/// All proper blocks: windows of length 2..n-1 holding consecutive values,
/// sorted by (start_pos, length).
std::vector<Interval> find_blocks(const Permutation& sigma);

/// True iff find_blocks is empty. Vacuously true for n <= 2 by the literal
/// definition; callers that need the stricter convention must special-case
/// small sizes themselves.
bool is_simple(const Permutation& sigma);

/// Collapse the cluster of values {l..l+k-1} sitting at positions a..a+k-1
/// to the single value l, then reduce. Inverse of extend given the window
/// pattern.
Permutation contract(const Permutation& sigma, int l, int a, int k);

/// Inverse construction: insert the pattern tau on values l-1+{1..k} at
/// positions a..a+k-1 of the inflation of nu, where nu_a = l.
Permutation extend(const Permutation& nu, const Permutation& tau, int l, int a);

/// Digit string for n <= 9 ("213546897"), comma-separated otherwise.
/// Both forms are accepted on input.
Permutation parse_permutation(const std::string& text);
std::string to_string(const Permutation& sigma);
std::string to_string(const Word& w);

}  // namespace permclust
