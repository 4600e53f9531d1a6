#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "permclust/cluster.hpp"
#include "permclust/enumerate.hpp"
#include "permclust/formulas.hpp"
#include "permclust/permutation.hpp"

using namespace permclust;

namespace {

Permutation P(const std::string& text) { return parse_permutation(text); }

const std::vector<const char*> kEtas = {"123", "132", "213", "231", "312", "321"};

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

TEST_CASE("the linear-growth pattern per class") {
  CHECK(tau_star(P("231"), 4) == P("4321"));
  CHECK(tau_star(P("312"), 4) == P("4321"));
  CHECK(tau_star(P("123"), 2) == P("21"));
  CHECK(tau_star(P("321"), 4) == P("1234"));
  CHECK(tau_star(P("132"), 3) == P("123"));
  CHECK(tau_star(P("213"), 3) == P("123"));
  CHECK_THROWS_AS(tau_star(P("2413"), 3), InvalidInput);
  CHECK_THROWS_AS(tau_star(P("231"), 1), InvalidInput);
}

TEST_CASE("uniform baseline") {
  CHECK(uniform_baseline(4, 2).expected_count == make_rational(3, 2));
  CHECK(uniform_baseline(10, 3).expected_count == make_rational(8, 15));
  for (int k = 2; k <= 6; ++k) {
    CHECK(uniform_baseline(k, k).expected_count == 1);
    CHECK(uniform_baseline(k, k).prob_per_l == 1);
  }
  // exact definitionals
  for (int n = 2; n <= 9; ++n) {
    for (int k = 2; k <= n; ++k) {
      auto base = uniform_baseline(n, k);
      BigRational per_l =
          make_rational(BigInt(n - k + 1) * factorial(k) * factorial(n - k), factorial(n));
      CHECK(base.prob_per_l == per_l);
      CHECK(base.expected_count == per_l * BigRational(n - k + 1));
    }
  }
  // brute cross-check over the unrestricted class
  for (int n = 2; n <= 7; ++n) {
    for (int k = 2; k <= n; ++k) {
      CHECK(uniform_baseline(n, k).expected_count ==
            exact_moments(n, k, std::nullopt, AvoidanceClass()).mean);
    }
  }
  CHECK_THROWS_AS(uniform_baseline(3, 4), InvalidInput);
  CHECK_THROWS_AS(uniform_baseline(3, 1), InvalidInput);
}

TEST_CASE("length-3 class expectations: pinned values") {
  CHECK(expectation_s3(4, 2, P("12"), P("231")) == make_rational(5, 7));
  CHECK(expectation_s3(4, 2, P("21"), P("231")) == make_rational(15, 14));
  CHECK(expectation_s3(4, 2, P("12"), P("321")) == make_rational(15, 14));
  CHECK(expectation_s3(4, 2, P("21"), P("321")) == make_rational(5, 14));
  // patterns containing the forbidden pattern cannot cluster
  CHECK(expectation_s3(6, 3, P("231"), P("231")) == 0);
  CHECK(expectation_s3(6, 4, P("1342"), P("132")) == 0);
  CHECK_THROWS_AS(expectation_s3(4, 5, P("12345"), P("231")), InvalidInput);
  CHECK_THROWS_AS(expectation_s3(4, 2, P("123"), P("231")), InvalidInput);  // |tau| != k
}

TEST_CASE("length-3 class totals: pinned values") {
  CHECK(expectation_s3_total(4, 2, P("231")) == make_rational(25, 14));
  CHECK(expectation_s3_total(4, 2, P("321")) == make_rational(10, 7));
  for (const char* eta : kEtas) {
    for (int k = 2; k <= 5; ++k) CHECK(expectation_s3_total(k, k, P(eta)) == 1);
  }
}

TEST_CASE("closed forms match brute-force enumeration for every length-3 class") {
  for (const char* eta_text : kEtas) {
    Permutation eta = P(eta_text);
    AvoidanceClass cls({eta});
    for (int k = 2; k <= 4; ++k) {
      for (int n = k; n <= 8; ++n) {
        auto sweep = moment_sweep(n, k, cls);
        for (const auto& tau : class_members(k, cls)) {
          auto it = sweep.by_tau.find(tau);
          BigRational brute = it == sweep.by_tau.end() ? BigRational(0) : it->second.mean;
          CHECK(expectation_s3(n, k, tau, eta) == brute);
        }
        CHECK(expectation_s3_total(n, k, eta) == sweep.total.mean);
      }
    }
  }
}

TEST_CASE("the distinguished pattern dominates strictly beyond the single window") {
  for (const char* eta_text : kEtas) {
    Permutation eta = P(eta_text);
    for (int k = 2; k <= 6; ++k) {
      Permutation star = tau_star(eta, k);
      for (int n = k + 1; n <= 30; ++n) {
        BigRational top = expectation_s3(n, k, star, eta);
        for (const auto& tau : class_members(k, AvoidanceClass({eta}))) {
          if (tau == star) continue;
          CHECK(top > expectation_s3(n, k, tau, eta));
        }
      }
    }
  }
}

TEST_CASE("totals are the sums of the per-pattern values") {
  for (const char* eta_text : kEtas) {
    Permutation eta = P(eta_text);
    for (int k = 2; k <= 5; ++k) {
      for (int n = k; n <= 12; ++n) {
        BigRational sum = 0;
        for (const auto& tau : class_members(k, AvoidanceClass({eta}))) {
          sum += expectation_s3(n, k, tau, eta);
        }
        CHECK(sum == expectation_s3_total(n, k, eta));
      }
    }
  }
}

TEST_CASE("expectations close under simultaneous symmetry") {
  for (const char* eta_text : kEtas) {
    Permutation eta = P(eta_text);
    for (int k = 2; k <= 4; ++k) {
      for (int n = k; n <= 9; ++n) {
        for (const auto& tau : all_perms(k)) {
          BigRational base = expectation_s3(n, k, tau, eta);
          CHECK(base == expectation_s3(n, k, reverse(tau), reverse(eta)));
          CHECK(base == expectation_s3(n, k, complement(tau), complement(eta)));
          CHECK(base == expectation_s3(n, k, reverse_complement(tau), reverse_complement(eta)));
        }
      }
    }
  }
}

TEST_CASE("event probabilities over 321-avoiders in closed form") {
  AvoidanceClass av321 = AvoidanceClass::parse("321");
  CHECK(cluster_event_probability_321(6, 3, 2, P("132")) == make_rational(2, 132));
  for (int l = 1; l <= 4; ++l) {
    CHECK(cluster_event_probability_321(6, 3, l, P("123")) == make_rational(14, 132));
  }
  for (int n = 2; n <= 8; ++n) {
    for (int k = 2; k <= std::min(n, 4); ++k) {
      for (const auto& tau : all_perms(k)) {
        for (int l = 1; l <= n - k + 1; ++l) {
          CHECK(cluster_event_probability_321(n, k, l, tau) ==
                event_probability(n, k, l, tau, av321));
        }
      }
    }
  }
  // the identity branch does not depend on l
  for (int k = 2; k <= 4; ++k) {
    for (int n = k; n <= 12; ++n) {
      BigRational first = cluster_event_probability_321(n, k, 1, Permutation::identity(k));
      for (int l = 2; l <= n - k + 1; ++l) {
        CHECK(cluster_event_probability_321(n, k, l, Permutation::identity(k)) == first);
      }
    }
  }
  CHECK_THROWS_AS(cluster_event_probability_321(6, 3, 5, P("123")), InvalidInput);
}

TEST_CASE("simple-pattern classes: pinned values") {
  AvoidanceClass sep = AvoidanceClass::parse("2413+3142");
  CHECK(expectation_simple_multi(6, 3, P("132"), sep) == make_rational(44, 197));
  CHECK(expectation_simple_multi_total(6, 3, sep) == make_rational(264, 197));
  CHECK(expectation_simple_multi_total(6, 2, sep) == make_rational(900, 394));

  AvoidanceClass single = AvoidanceClass::parse("3142");
  BigRational direct = make_rational(BigInt(5) * count_class(5, single), count_class(7, single));
  CHECK(expectation_simple_multi(7, 3, P("123"), single) == direct);
  CHECK(expectation_simple_multi(7, 3, P("123"), single) ==
        exact_moments(7, 3, P("123"), single).mean);

  for (int k = 2; k <= 4; ++k) {
    for (const auto& tau : class_members(k, sep)) {
      CHECK(expectation_simple_multi(k, k, tau, sep) ==
            make_rational(BigInt(1), count_class(k, sep)));
    }
    CHECK(expectation_simple_multi_total(k, k, sep) == 1);
  }
}

TEST_CASE("simple-pattern expectations ignore the cluster pattern") {
  for (const char* cls_text : {"3142", "2413+3142"}) {
    AvoidanceClass cls = AvoidanceClass::parse(cls_text);
    for (int k = 2; k <= 4; ++k) {
      for (int n = k; n <= 8; ++n) {
        BigRational first = expectation_simple_multi(n, k, class_members(k, cls).front(), cls);
        for (const auto& tau : class_members(k, cls)) {
          CHECK(expectation_simple_multi(n, k, tau, cls) == first);
        }
        // a pattern that hits the class is flagged by a zero, not an error
        if (k == 4) CHECK(expectation_simple_multi(n, k, P("3142"), cls) == 0);
      }
    }
  }
}

TEST_CASE("simple-pattern preconditions name the offender") {
  AvoidanceClass bad_len = AvoidanceClass::parse("231+2413");
  CHECK_THROWS_WITH_AS(expectation_simple_multi(6, 2, P("12"), bad_len),
                       doctest::Contains("231"), InvalidInput);
  AvoidanceClass not_simple = AvoidanceClass::parse("3412");
  CHECK_THROWS_WITH_AS(expectation_simple_multi(6, 2, P("12"), not_simple),
                       doctest::Contains("3412"), InvalidInput);
  CHECK_THROWS_AS(expectation_simple_multi_total(6, 2, not_simple), InvalidInput);
}

TEST_CASE("brute-force agreement for the separable class") {
  AvoidanceClass sep = AvoidanceClass::parse("2413+3142");
  for (int k = 2; k <= 3; ++k) {
    for (int n = k; n <= 8; ++n) {
      auto sweep = moment_sweep(n, k, sep);
      for (const auto& tau : class_members(k, sep)) {
        auto it = sweep.by_tau.find(tau);
        BigRational brute = it == sweep.by_tau.end() ? BigRational(0) : it->second.mean;
        CHECK(expectation_simple_multi(n, k, tau, sep) == brute);
      }
      CHECK(expectation_simple_multi_total(n, k, sep) == sweep.total.mean);
    }
  }
}

TEST_CASE("asymptotic kinds parse and render") {
  for (const char* name :
       {"nonmon_nonstar", "nonmon_star", "nonmon_total", "mon_nonstar", "mon_star", "mon_total",
        "separable", "separable_total", "sw_general"}) {
    CHECK(to_string(parse_asymptotic_kind(name)) == name);
  }
  CHECK_THROWS_AS(parse_asymptotic_kind("bogus"), InvalidInput);
}

TEST_CASE("asymptotic constants and finite-size gaps") {
  auto rep = asymptotic_constants(AsymptoticKind::nonmon_nonstar, 2, {100, 2000});
  REQUIRE(rep.constant.exact.has_value());
  CHECK(*rep.constant.exact == make_rational(1, 8));
  REQUIRE(rep.points.size() == 2);
  CHECK(rep.points[1].n == 2000);
  CHECK(rep.points[1].relative_gap < 0.02);
  CHECK(rep.points[1].relative_gap < rep.points[0].relative_gap);

  auto mono = asymptotic_constants(AsymptoticKind::mon_nonstar, 3, {2000});
  REQUIRE(mono.constant.exact.has_value());
  CHECK(*mono.constant.exact == make_rational(1, 16));
  // the expectation itself converges: the finite value already sits near 1/16
  CHECK(mono.points[0].relative_gap < 0.02);
  // and agrees with the raw closed form, not divided by n
  CHECK(mono.points[0].exact_value == expectation_s3(2000, 3, P("213"), P("321")));

  auto sep = asymptotic_constants(AsymptoticKind::separable, 2, {6, 10});
  CHECK_FALSE(sep.constant.exact.has_value());
  CHECK(std::abs(sep.constant.value - 0.171573) < 1e-6);
  CHECK(sep.points[1].relative_gap < sep.points[0].relative_gap);

  auto mt = asymptotic_constants(AsymptoticKind::mon_total, 3, {50, 100});
  REQUIRE(mt.two_term.size() == 2);
  CHECK(mt.two_term[0].linear == doctest::Approx(50.0 / 16.0));
  CHECK(mt.two_term[1].linear == doctest::Approx(100.0 / 16.0));
  CHECK(mt.two_term[0].offset == doctest::Approx(4.0 / (std::sqrt(M_PI) * std::pow(3.0, 1.5))));

  auto sw = asymptotic_constants(AsymptoticKind::sw_general, 2, {8, 10},
                                 AvoidanceClass::parse("3142"));
  CHECK_FALSE(sw.constant.exact.has_value());
  CHECK(sw.constant.value > 0.0);
  CHECK(sw.points.size() == 2);
}
