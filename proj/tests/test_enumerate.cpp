#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "permclust/enumerate.hpp"
#include "permclust/permutation.hpp"

using namespace permclust;

namespace {

Permutation P(const std::string& text) { return parse_permutation(text); }

const AvoidanceClass kSeparable = AvoidanceClass::parse("2413+3142");

AvoidanceClass apply_to_class(const AvoidanceClass& cls, Symmetry which) {
  std::vector<Permutation> pats;
  for (const auto& p : cls.patterns()) pats.push_back(symmetry(p, which));
  return AvoidanceClass(pats);
}

}  // namespace

TEST_CASE("catalan values") {
  const long expected[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796};
  for (int n = 0; n <= 10; ++n) CHECK(catalan(n) == expected[n]);
  CHECK(catalan(12) == 208012);
  CHECK(catalan(30) == BigInt("3814986502092304"));
  CHECK_THROWS_AS(catalan(-1), InvalidInput);
  auto table = catalan_values(10);
  REQUIRE(table.size() == 11);
  for (int n = 0; n <= 10; ++n) CHECK(table[n] == expected[n]);
}

TEST_CASE("catalan satisfies the first-return convolution") {
  auto c = catalan_values(50);
  for (int n = 1; n <= 50; ++n) {
    BigInt sum = 0;
    for (int j = 1; j <= n; ++j) sum += c[j - 1] * c[n - j];
    CHECK(sum == c[n]);
  }
}

TEST_CASE("class members stream in lexicographic order") {
  auto members = class_members(3, AvoidanceClass::parse("231"));
  std::vector<Permutation> expected = {P("123"), P("132"), P("213"), P("312"), P("321")};
  CHECK(members == expected);

  CHECK(class_members(1, kSeparable) == std::vector<Permutation>{P("1")});
  CHECK(class_members(4, kSeparable).size() == 22);

  for (int n = 1; n <= 7; ++n) {
    for (const char* pat : {"231", "321"}) {
      AvoidanceClass cls = AvoidanceClass::parse(pat);
      auto got = class_members(n, cls);
      CHECK(std::is_sorted(got.begin(), got.end()));
      CHECK(std::adjacent_find(got.begin(), got.end()) == got.end());
      CHECK(BigInt(static_cast<unsigned long>(got.size())) == count_class(n, cls));
      for (const auto& sigma : got) CHECK(avoids_all(sigma, cls));
    }
  }
}

TEST_CASE("visitor can stop the stream early") {
  std::vector<Permutation> first3;
  for_each_in_class(4, AvoidanceClass::parse("231"), [&](const Permutation& sigma) {
    first3.push_back(sigma);
    return first3.size() < 3;
  });
  std::vector<Permutation> expected = {P("1234"), P("1243"), P("1324")};
  CHECK(first3 == expected);
  CHECK_THROWS_AS(for_each_in_class(0, kSeparable, [](const Permutation&) { return true; }),
                  InvalidInput);
}

TEST_CASE("every length-3 class is Catalan-counted") {
  for (const char* pat : {"123", "132", "213", "231", "312", "321"}) {
    AvoidanceClass cls = AvoidanceClass::parse(pat);
    CHECK(count_class(6, cls) == 132);
    for (int n = 1; n <= 10; ++n) CHECK(count_class(n, cls) == catalan(n));
    // not just the closed-form shortcut: recount by streaming
    for (int n = 1; n <= 8; ++n) {
      long seen = 0;
      for_each_in_class(n, cls, [&](const Permutation&) {
        ++seen;
        return true;
      });
      CHECK(BigInt(seen) == catalan(n));
    }
  }
}

TEST_CASE("separable counts match the big Schroeder sequence") {
  const long expected[] = {1, 2, 6, 22, 90, 394, 1806, 8558, 41586, 206098};
  std::vector<BigInt> counts;
  for (int n = 1; n <= 10; ++n) {
    counts.push_back(count_class(n, kSeparable));
    CHECK(counts.back() == expected[n - 1]);
  }
  CHECK(count_class(0, kSeparable) == 1);
  CHECK(count_class(6, kSeparable) == 394);
  // independent cross-check: the Schroeder linear recurrence
  // (m+1) r_m = 3(2m-1) r_{m-1} - (m-2) r_{m-2}, with r_m = counts at size m+1
  for (int m = 2; m <= 9; ++m) {
    CHECK(BigInt(m + 1) * counts[m] ==
          BigInt(3) * (2 * m - 1) * counts[m - 1] - BigInt(m - 2) * counts[m - 2]);
  }
}

TEST_CASE("counting is symmetry-invariant") {
  std::vector<AvoidanceClass> classes = {
      AvoidanceClass::parse("231"),
      AvoidanceClass::parse("2413"),
      AvoidanceClass::parse("231+2413"),
      kSeparable,
  };
  for (const auto& cls : classes) {
    for (int n = 1; n <= 8; ++n) {
      BigInt base = count_class(n, cls);
      CHECK(base == count_class(n, apply_to_class(cls, Symmetry::reverse)));
      CHECK(base == count_class(n, apply_to_class(cls, Symmetry::complement)));
      CHECK(base == count_class(n, apply_to_class(cls, Symmetry::reverse_complement)));
    }
  }
}

TEST_CASE("stanley-wilf ratios") {
  CHECK(sw_ratio(5, AvoidanceClass::parse("231")) == make_rational(22, 7));
  for (int n = 1; n <= 12; ++n) {
    CHECK(sw_ratio(n, AvoidanceClass::parse("321")) ==
          make_rational(catalan(n + 1), catalan(n)));
  }
  CHECK(sw_ratio(1, AvoidanceClass::parse("231")) == 2);
  CHECK(sw_ratio(1, AvoidanceClass::parse("2413")) == 2);
  CHECK(sw_ratio(1, AvoidanceClass::parse("21")) == 1);
  double far = to_double(sw_ratio(500, AvoidanceClass::parse("132")));
  CHECK(std::abs(far - 4.0) / 4.0 < 0.01);
  CHECK_THROWS_AS(sw_ratio(0, kSeparable), InvalidInput);
}

TEST_CASE("count_table") {
  auto rows = count_table(3, 6, kSeparable);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].n == 3);
  CHECK(rows[0].count == 6);
  CHECK(rows[3].n == 6);
  CHECK(rows[3].count == 394);
  CHECK_THROWS_AS(count_table(5, 3, kSeparable), InvalidInput);
}

TEST_CASE("maximum of a 231-avoider caps a full low prefix") {
  AvoidanceClass cls = AvoidanceClass::parse("231");
  for (int n = 1; n <= 9; ++n) {
    for_each_in_class(n, cls, [&](const Permutation& sigma) {
      int j = 1;
      while (sigma.at(j) != n) ++j;
      for (int p = 1; p < j; ++p) CHECK(sigma.at(p) <= j - 1);
      return true;
    });
  }
}

TEST_CASE("enumeration cap is enforced and adjustable") {
  const std::uint64_t saved = enumeration_cap();
  CHECK(saved == 10000000);  // default budget
  set_enumeration_cap(10);
  CHECK(enumeration_cap() == 10);
  CHECK_THROWS_AS(class_members(5, AvoidanceClass::parse("4321")), ResourceLimit);
  CHECK_THROWS_AS(count_class(5, AvoidanceClass::parse("1234")), ResourceLimit);
  set_enumeration_cap(saved);
  CHECK(count_class(5, AvoidanceClass::parse("1234")) == 103);
}
