#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "permclust/cluster.hpp"
#include "permclust/enumerate.hpp"
#include "permclust/permutation.hpp"
#include "permclust/rational.hpp"

using namespace permclust;

namespace {

Permutation P(const std::string& text) { return parse_permutation(text); }

std::vector<Permutation> all_perms(int n) {
  std::vector<int> word(n);
  std::iota(word.begin(), word.end(), 1);
  std::vector<Permutation> out;
  do {
    out.emplace_back(word);
  } while (std::next_permutation(word.begin(), word.end()));
  return out;
}

}  // namespace

TEST_CASE("occurrences of the worked nine-element example") {
  auto occ = occurrences(P("213546897"), 3);
  REQUIRE(occ.size() == 4);
  CHECK(occ[0] == ClusterOccurrence{1, 1, P("213")});
  CHECK(occ[1] == ClusterOccurrence{3, 3, P("132")});
  CHECK(occ[2] == ClusterOccurrence{4, 4, P("213")});
  CHECK(occ[3] == ClusterOccurrence{7, 7, P("231")});
  CHECK(count_clusters(P("213546897"), 3) == 4);
  CHECK(count_clusters_tau(P("213546897"), P("213")) == 2);
}

TEST_CASE("occurrences on monotone and simple permutations") {
  for (int n = 2; n <= 9; ++n) {
    for (int k = 2; k <= n; ++k) {
      auto occ = occurrences(Permutation::identity(n), k);
      CHECK(static_cast<int>(occ.size()) == n - k + 1);
      for (const auto& o : occ) CHECK(o.pattern == Permutation::identity(k));
      CHECK(count_clusters_tau(Permutation::identity(n), Permutation::identity(k)) == n - k + 1);
      CHECK(count_clusters_tau(Permutation::decreasing(n), Permutation::decreasing(k)) ==
            n - k + 1);
    }
  }
  for (int k = 2; k <= 6; ++k) CHECK(occurrences(P("6241753"), k).empty());
  auto full = occurrences(P("6241753"), 7);
  REQUIRE(full.size() == 1);
  CHECK(full[0] == ClusterOccurrence{1, 1, P("6241753")});
  CHECK_THROWS_AS(occurrences(P("123"), 1), InvalidInput);
  CHECK_THROWS_AS(occurrences(P("123"), 4), InvalidInput);
  CHECK_THROWS_AS(count_clusters(P("123"), 1), InvalidInput);
  CHECK_THROWS_AS(count_clusters_tau(P("123"), P("1")), InvalidInput);
}

TEST_CASE("occurrence lists carry distinct values and positions") {
  for (int n = 2; n <= 7; ++n) {
    for (const auto& sigma : all_perms(n)) {
      for (int k = 2; k <= n; ++k) {
        auto occ = occurrences(sigma, k);
        std::set<int> values, positions;
        for (const auto& o : occ) {
          values.insert(o.low_value);
          positions.insert(o.start_pos);
          CHECK(1 <= o.low_value);
          CHECK(o.low_value <= n - k + 1);
          CHECK(1 <= o.start_pos);
          CHECK(o.start_pos <= n - k + 1);
        }
        CHECK(values.size() == occ.size());
        CHECK(positions.size() == occ.size());
        CHECK(std::is_sorted(occ.begin(), occ.end(),
                             [](const ClusterOccurrence& a, const ClusterOccurrence& b) {
                               return a.start_pos < b.start_pos;
                             }));
      }
    }
  }
}

TEST_CASE("total count partitions over patterns") {
  for (int n = 2; n <= 8; ++n) {
    for (const auto& sigma : all_perms(n)) {
      for (int k = 2; k <= std::min(n, 4); ++k) {
        int total = 0;
        for (const auto& tau : all_perms(k)) total += count_clusters_tau(sigma, tau);
        CHECK(total == count_clusters(sigma, k));
      }
    }
  }
}

TEST_CASE("exact moments: published instances") {
  auto r = exact_moments(4, 2, P("12"), AvoidanceClass::parse("231"));
  CHECK(r.mean == make_rational(5, 7));
  CHECK(r.class_size == 14);
  CHECK(r.variance == r.second_moment - r.mean * r.mean);

  auto r321 = exact_moments(4, 2, P("21"), AvoidanceClass::parse("321"));
  CHECK(r321.mean == make_rational(5, 14));

  // single-window case: every pattern of the class shows up with chance 1/C_k
  for (const char* eta : {"123", "132", "213", "231", "312", "321"}) {
    AvoidanceClass cls = AvoidanceClass::parse(eta);
    for (int k = 2; k <= 3; ++k) {
      for (const auto& tau : class_members(k, cls)) {
        auto m = exact_moments(k, k, tau, cls);
        CHECK(m.mean == make_rational(BigInt(1), catalan(k)));
        CHECK(m.second_moment == m.mean);  // indicator statistic
      }
    }
  }
}

TEST_CASE("moment reports are internally consistent") {
  for (int n = 2; n <= 7; ++n) {
    for (int k = 2; k <= std::min(n, 4); ++k) {
      auto sweep = moment_sweep(n, k, AvoidanceClass::parse("231"));
      CHECK(sweep.total.class_size == catalan(n));
      CHECK(sweep.total.variance >= 0);
      BigRational mean_sum = 0;
      for (const auto& [tau, rep] : sweep.by_tau) {
        CHECK(rep.variance == rep.second_moment - rep.mean * rep.mean);
        CHECK(rep.variance >= 0);
        CHECK(rep.mean == exact_moments(n, k, tau, AvoidanceClass::parse("231")).mean);
        mean_sum += rep.mean;
      }
      CHECK(mean_sum == sweep.total.mean);
      CHECK(sweep.total.mean == exact_moments(n, k, std::nullopt, AvoidanceClass::parse("231")).mean);
    }
  }
}

TEST_CASE("moments are symmetry-equivariant") {
  for (const char* eta_text : {"231", "321"}) {
    Permutation eta = P(eta_text);
    for (int k = 2; k <= 4; ++k) {
      for (int n = std::max(2, k); n <= 8; ++n) {
        for (const auto& tau : all_perms(k)) {
          auto base = exact_moments(n, k, tau, AvoidanceClass({eta}));
          auto rev = exact_moments(n, k, reverse(tau), AvoidanceClass({reverse(eta)}));
          auto comp = exact_moments(n, k, complement(tau), AvoidanceClass({complement(eta)}));
          CHECK(base.mean == rev.mean);
          CHECK(base.second_moment == rev.second_moment);
          CHECK(base.mean == comp.mean);
          CHECK(base.second_moment == comp.second_moment);
        }
      }
    }
  }
}

TEST_CASE("position of the maximum follows the Catalan product law") {
  AvoidanceClass cls = AvoidanceClass::parse("231");
  for (int n = 1; n <= 12; ++n) {
    std::vector<BigInt> by_pos(n + 1, 0);
    for_each_in_class(n, cls, [&](const Permutation& sigma) {
      int j = 1;
      while (sigma.at(j) != n) ++j;
      by_pos[j] += 1;
      return true;
    });
    BigInt total = 0;
    for (int j = 1; j <= n; ++j) {
      CHECK(by_pos[j] == catalan(j - 1) * catalan(n - j));
      total += by_pos[j];
    }
    CHECK(total == catalan(n));
  }
}

TEST_CASE("event probabilities under the unrestricted measure") {
  for (int n = 2; n <= 8; ++n) {
    for (int k = 2; k <= n; ++k) {
      BigRational expected =
          make_rational(BigInt(n - k + 1) * factorial(k) * factorial(n - k), factorial(n));
      for (int l = 1; l <= n - k + 1; ++l) {
        CHECK(event_probability(n, k, l, std::nullopt, AvoidanceClass()) == expected);
      }
    }
  }
}

TEST_CASE("event probabilities over 321-avoiders") {
  AvoidanceClass cls = AvoidanceClass::parse("321");
  CHECK(event_probability(6, 3, 2, P("132"), cls) == make_rational(2, 132));
  for (int l = 1; l <= 4; ++l) {
    CHECK(event_probability(6, 3, l, P("123"), cls) == make_rational(14, 132));
  }
  // patterns containing the forbidden one never cluster
  CHECK(event_probability(6, 3, 2, P("321"), cls) == 0);
}

TEST_CASE("event probabilities: more pinned values") {
  CHECK(event_probability(6, 3, 2, std::nullopt, AvoidanceClass::parse("231")) ==
        make_rational(25, 66));
  for (const char* eta : {"123", "132", "213", "231", "312", "321"}) {
    AvoidanceClass cls = AvoidanceClass::parse(eta);
    for (int k = 2; k <= 3; ++k) {
      for (const auto& tau : class_members(k, cls)) {
        CHECK(event_probability(k, k, 1, tau, cls) == make_rational(BigInt(1), catalan(k)));
      }
    }
  }
  CHECK_THROWS_AS(event_probability(6, 3, 5, std::nullopt, AvoidanceClass::parse("231")),
                  InvalidInput);
}

TEST_CASE("count distributions sum to the class size and reproduce the mean") {
  AvoidanceClass cls = AvoidanceClass::parse("231");
  for (int n = 2; n <= 8; ++n) {
    for (int k = 2; k <= std::min(n, 3); ++k) {
      auto dist = count_distribution(n, k, std::nullopt, cls);
      BigInt members = 0;
      BigInt weighted = 0;
      for (const auto& [value, cnt] : dist) {
        CHECK(value >= 0);
        members += cnt;
        weighted += BigInt(value) * cnt;
      }
      CHECK(members == catalan(n));
      CHECK(make_rational(weighted, members) == exact_moments(n, k, std::nullopt, cls).mean);
    }
  }
  CHECK(count_distribution(0, 2, std::nullopt, cls) == std::map<int, BigInt>{{0, 1}});
}

TEST_CASE("boundary events have Catalan-ratio probabilities") {
  AvoidanceClass cls = AvoidanceClass::parse("231");
  // left event: the top of the pattern's prefix pinned at the right edge
  for (const char* tau_text : {"123", "132", "213", "312"}) {
    Permutation tau = P(tau_text);
    int i = 1;
    while (tau.at(i) != tau.size()) ++i;
    for (int m = std::max(1, i - 1); m <= 8; ++m) {
      BigInt hits = 0;
      for_each_in_class(m, cls, [&](const Permutation& sigma) {
        if (in_left_boundary_event(sigma, tau)) hits += 1;
        return true;
      });
      CHECK(hits == catalan(m - i + 1));
    }
  }
  // right event: the top k-1 values descending at the front
  for (int k = 2; k <= 4; ++k) {
    for (int m = k - 1; m <= 8; ++m) {
      BigInt hits = 0;
      for_each_in_class(m, cls, [&](const Permutation& sigma) {
        if (in_right_boundary_event(sigma, k)) hits += 1;
        return true;
      });
      CHECK(hits == catalan(m - k + 1));
    }
  }
}

TEST_CASE("conditional law given the maximum position splits into independent blocks") {
  CHECK(conditional_decomposition_check(7, 3, P("213"), 6));
  CHECK(conditional_decomposition_check(7, 3, P("321"), 3));
  for (int k = 2; k <= 3; ++k) {
    AvoidanceClass cls = AvoidanceClass::parse("231");
    for (const auto& tau : class_members(k, cls)) {
      // single-window case first
      int i = 1;
      while (tau.at(i) != k) ++i;
      CHECK(conditional_decomposition_check(k, k, tau, i));
      for (int n = k; n <= 8; ++n) {
        for (int j = 1; j <= n; ++j) {
          CHECK(conditional_decomposition_check(n, k, tau, j));
        }
      }
    }
  }
  CHECK_THROWS_AS(conditional_decomposition_check(6, 3, P("231"), 2), InvalidInput);
}

TEST_CASE("cross term coefficients") {
  // k=2, ascending pair: members of the left event end with their maximum
  CHECK(cross_term_coefficient(4, 2, P("12")) == 2);
  CHECK(cross_term_coefficient(3, 2, P("12")) == 1);
  CHECK(cross_term_coefficient(2, 2, P("12")) == 0);  // too short
  // independent recount over the enumerated event
  for (int n = 4; n <= 9; ++n) {
    Permutation tau = P("12");
    BigInt direct = 0;
    for_each_in_class(n - 1, AvoidanceClass::parse("231"), [&](const Permutation& sigma) {
      if (sigma.at(n - 1) == n - 1) direct += count_clusters_tau(sigma, tau);
      return true;
    });
    CHECK(cross_term_coefficient(n, 2, tau) == direct);
  }
  CHECK_THROWS_AS(cross_term_coefficient(6, 3, P("321")), InvalidInput);
  CHECK_THROWS_AS(cross_term_coefficient(6, 3, P("231")), InvalidInput);
}
