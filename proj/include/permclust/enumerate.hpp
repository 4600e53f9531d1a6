#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "permclust/permutation.hpp"
#include "permclust/rational.hpp"

namespace permclust {

/// Streaming visitor over S_n^{av(c)} in lexicographic order. Return false
/// from the visitor to stop early.
using ClassVisitor = std::function<bool(const Permutation&)>;
void for_each_in_class(int n, const AvoidanceClass& cls, const ClassVisitor& visit);

/// Materialized class members in lexicographic order. Refuses classes larger
/// than the enumeration cap; intended for desk-scale n.
std::vector<Permutation> class_members(int n, const AvoidanceClass& cls);

/// n-th Catalan number, exact.
BigInt catalan(int n);
/// catalan(0..up_to) as a dense table.
std::vector<BigInt> catalan_values(int up_to);

/// |S_n^{av(c)}|. Uses catalan(n) directly when c is a single length-3
/// pattern; otherwise counts by streaming enumeration (memoized, cap-guarded).
BigInt count_class(int n, const AvoidanceClass& cls);

/// Stanley-Wilf ratio estimate |S_{n+1}^{av(c)}| / |S_n^{av(c)}|.
BigRational sw_ratio(int n, const AvoidanceClass& cls);

struct CountRow {
  int n = 0;
  BigInt count;
};
std::vector<CountRow> count_table(int from, int to, const AvoidanceClass& cls);

/// Enumeration budget: default 10^7 members, overridable via the
/// PERMCLUST_ENUM_CAP environment variable or set_enumeration_cap.
std::uint64_t enumeration_cap();
void set_enumeration_cap(std::uint64_t cap);

}  // namespace permclust
