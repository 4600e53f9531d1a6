#include "permclust/formulas.hpp"

#include <cmath>

#include "permclust/enumerate.hpp"

namespace permclust {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidInput(msg);
}

enum class S3 { p123, p132, p213, p231, p312, p321 };

S3 classify(const Permutation& eta) {
  require(eta.size() == 3, "eta must have length 3");
  const auto& w = eta.word();
  if (w == std::vector<int>{1, 2, 3}) return S3::p123;
  if (w == std::vector<int>{1, 3, 2}) return S3::p132;
  if (w == std::vector<int>{2, 1, 3}) return S3::p213;
  if (w == std::vector<int>{2, 3, 1}) return S3::p231;
  if (w == std::vector<int>{3, 1, 2}) return S3::p312;
  return S3::p321;
}

// Carry (eta, tau) to the representative eta in {231, 321} by the symmetry
// that maps the avoidance class onto the representative's class; cluster
// windows are preserved by reverse and complement, with tau transported the
// same way.
Permutation transport_tau(const Permutation& tau, S3 eta) {
  switch (eta) {
    case S3::p231: case S3::p321: return tau;
    case S3::p132: return reverse(tau);        // reverse(132) = 231
    case S3::p213: return complement(tau);     // complement(213) = 231
    case S3::p312: return reverse_complement(tau);
    case S3::p123: return reverse(tau);        // reverse(123) = 321
  }
  throw InvalidInput("unreachable");
}

bool is_monotone_class(S3 eta) { return eta == S3::p123 || eta == S3::p321; }

BigRational nonmon_nonstar(int n, int k) {
  return make_rational(BigInt(n - k + 2) * catalan(n - k + 1), 2 * catalan(n));
}

BigRational nonmon_star(int n, int k) {
  return make_rational(BigInt(n - k + 3) * catalan(n - k + 2), 2 * catalan(n)) -
         make_rational(BigInt(n - k + 2) * catalan(n - k + 1), catalan(n));
}

BigRational mon_nonstar(int n, int k) { return make_rational(catalan(n - k + 1), catalan(n)); }

BigRational mon_star(int n, int k) {
  return make_rational(BigInt(n - k + 1) * catalan(n - k + 1), catalan(n));
}

const AvoidanceClass& separable_class() {
  static const AvoidanceClass cls({Permutation({2, 4, 1, 3}), Permutation({3, 1, 4, 2})});
  return cls;
}

}  // namespace

Permutation tau_star(const Permutation& eta, int k) {
  require(k >= 2, "need k >= 2");
  switch (classify(eta)) {
    case S3::p231: case S3::p312: case S3::p123: return Permutation::decreasing(k);
    case S3::p132: case S3::p213: case S3::p321: return Permutation::identity(k);
  }
  throw InvalidInput("unreachable");
}

UniformBaseline uniform_baseline(int n, int k) {
  require(2 <= k && k <= n, "need 2 <= k <= n");
  const BigRational per_l = make_rational(
      BigInt(n - k + 1) * factorial(static_cast<unsigned long>(k)) *
          factorial(static_cast<unsigned long>(n - k)),
      factorial(static_cast<unsigned long>(n)));
  return {per_l, BigInt(n - k + 1) * per_l};
}

BigRational expectation_s3(int n, int k, const Permutation& tau, const Permutation& eta) {
  require(2 <= k && k <= n, "need 2 <= k <= n");
  require(tau.size() == k, "tau must have length k");
  const S3 family = classify(eta);
  if (contains(tau, eta)) return BigRational(0);
  const Permutation t = transport_tau(tau, family);
  if (is_monotone_class(family)) {
    // representative class av(321); the linear branch belongs to tau = 1..k
    return t == Permutation::identity(k) ? mon_star(n, k) : mon_nonstar(n, k);
  }
  // representative class av(231); the linear branch belongs to tau = k..1
  return t == Permutation::decreasing(k) ? nonmon_star(n, k) : nonmon_nonstar(n, k);
}

BigRational expectation_s3_total(int n, int k, const Permutation& eta) {
  require(2 <= k && k <= n, "need 2 <= k <= n");
  const S3 family = classify(eta);
  if (is_monotone_class(family))
    return make_rational(catalan(n - k + 1) * (BigInt(n - k) + catalan(k)), catalan(n));
  return make_rational(catalan(n - k + 1) * (BigInt(n - k + 2) * catalan(k) + BigInt(n - k)),
                       2 * catalan(n));
}

BigRational cluster_event_probability_321(int n, int k, int l, const Permutation& tau) {
  require(2 <= k && k <= n, "need 2 <= k <= n");
  require(tau.size() == k, "tau must have length k");
  require(1 <= l && l <= n - k + 1, "need 1 <= l <= n-k+1");
  static const Permutation eta321({3, 2, 1});
  if (contains(tau, eta321)) return BigRational(0);
  if (tau == Permutation::identity(k))
    return make_rational(catalan(n - k + 1), catalan(n));
  return make_rational(catalan(l - 1) * catalan(n - k - l + 1), catalan(n));
}

BigRational expectation_simple_multi(int n, int k, const Permutation& tau,
                                     const AvoidanceClass& cls) {
  require(2 <= k && k <= n, "need 2 <= k <= n");
  require(tau.size() == k, "tau must have length k");
  for (const auto& p : cls.patterns()) {
    require(p.size() >= 4, "pattern " + to_string(p) + " is shorter than 4");
    require(is_simple(p), "pattern " + to_string(p) + " is not simple");
  }
  if (!avoids_all(tau, cls)) return BigRational(0);
  return make_rational(BigInt(n - k + 1) * count_class(n - k + 1, cls), count_class(n, cls));
}

BigRational expectation_simple_multi_total(int n, int k, const AvoidanceClass& cls) {
  require(2 <= k && k <= n, "need 2 <= k <= n");
  for (const auto& p : cls.patterns()) {
    require(p.size() >= 4, "pattern " + to_string(p) + " is shorter than 4");
    require(is_simple(p), "pattern " + to_string(p) + " is not simple");
  }
  return make_rational(BigInt(n - k + 1) * count_class(n - k + 1, cls) * count_class(k, cls),
                       count_class(n, cls));
}

AsymptoticKind parse_asymptotic_kind(const std::string& name) {
  if (name == "nonmon_nonstar") return AsymptoticKind::nonmon_nonstar;
  if (name == "nonmon_star") return AsymptoticKind::nonmon_star;
  if (name == "nonmon_total") return AsymptoticKind::nonmon_total;
  if (name == "mon_nonstar") return AsymptoticKind::mon_nonstar;
  if (name == "mon_star") return AsymptoticKind::mon_star;
  if (name == "mon_total") return AsymptoticKind::mon_total;
  if (name == "separable") return AsymptoticKind::separable;
  if (name == "separable_total") return AsymptoticKind::separable_total;
  if (name == "sw_general") return AsymptoticKind::sw_general;
  throw InvalidInput("unknown asymptotic kind \"" + name + "\"");
}

std::string to_string(AsymptoticKind kind) {
  switch (kind) {
    case AsymptoticKind::nonmon_nonstar: return "nonmon_nonstar";
    case AsymptoticKind::nonmon_star: return "nonmon_star";
    case AsymptoticKind::nonmon_total: return "nonmon_total";
    case AsymptoticKind::mon_nonstar: return "mon_nonstar";
    case AsymptoticKind::mon_star: return "mon_star";
    case AsymptoticKind::mon_total: return "mon_total";
    case AsymptoticKind::separable: return "separable";
    case AsymptoticKind::separable_total: return "separable_total";
    case AsymptoticKind::sw_general: return "sw_general";
  }
  return "?";
}

AsymptoticReport asymptotic_constants(AsymptoticKind kind, int k, const std::vector<int>& ns,
                                      const std::optional<AvoidanceClass>& cls) {
  require(k >= 2, "need k >= 2");
  AsymptoticReport report{kind, k, {}, {}, {}};

  const BigInt four_pow = BigInt(1) << (2 * (k - 1));
  const double root2 = std::sqrt(2.0);
  const double sep_base = 3.0 - 2.0 * root2;

  const AvoidanceClass multi_cls = [&] {
    if (cls) return *cls;
    require(kind != AsymptoticKind::sw_general, "sw_general needs an explicit class");
    return separable_class();
  }();

  // Normalized finite-n quantity whose limit is the reported constant.
  const auto finite_value = [&](int n) -> BigRational {
    require(n >= k, "need n >= k");
    switch (kind) {
      case AsymptoticKind::nonmon_nonstar:
        return nonmon_nonstar(n, k) / BigRational(n);
      case AsymptoticKind::nonmon_star:
        return nonmon_star(n, k) / BigRational(n);
      case AsymptoticKind::nonmon_total:
        return expectation_s3_total(n, k, Permutation({2, 3, 1})) / BigRational(n);
      case AsymptoticKind::mon_nonstar:
        return mon_nonstar(n, k);
      case AsymptoticKind::mon_star:
        return mon_star(n, k) / BigRational(n);
      case AsymptoticKind::mon_total:
        return expectation_s3_total(n, k, Permutation({3, 2, 1})) / BigRational(n);
      case AsymptoticKind::separable: {
        const Permutation tau = Permutation::identity(k);
        return expectation_simple_multi(n, k, tau, multi_cls) / BigRational(n);
      }
      case AsymptoticKind::separable_total:
        return expectation_simple_multi_total(n, k, multi_cls) / BigRational(n);
      case AsymptoticKind::sw_general: {
        const Permutation tau = Permutation::identity(k);
        return expectation_simple_multi(n, k, tau, multi_cls) / BigRational(n);
      }
    }
    throw InvalidInput("unreachable");
  };

  switch (kind) {
    case AsymptoticKind::nonmon_nonstar:
      report.constant = {"1/(2*4^(k-1))", make_rational(BigInt(1), 2 * four_pow), 0.0};
      break;
    case AsymptoticKind::nonmon_star:
    case AsymptoticKind::mon_nonstar:
    case AsymptoticKind::mon_star:
    case AsymptoticKind::mon_total:
      report.constant = {"1/4^(k-1)", make_rational(BigInt(1), four_pow), 0.0};
      break;
    case AsymptoticKind::nonmon_total:
      report.constant = {"(C_k+1)/(2*4^(k-1))",
                         make_rational(catalan(k) + 1, 2 * four_pow), 0.0};
      break;
    case AsymptoticKind::separable:
      report.constant = {"(3-2*sqrt(2))^(k-1)", std::nullopt, std::pow(sep_base, k - 1)};
      break;
    case AsymptoticKind::separable_total: {
      const BigInt pats = count_class(k, multi_cls);
      report.constant = {"(3-2*sqrt(2))^(k-1) * " + pats.get_str(), std::nullopt,
                         std::pow(sep_base, k - 1) * pats.get_d()};
      break;
    }
    case AsymptoticKind::sw_general: {
      // Estimate the growth rate from the largest requested n.
      int n_star = k + 1;
      for (int n : ns) n_star = std::max(n_star, n);
      const BigRational ratio = sw_ratio(n_star, multi_cls);
      const double L = to_double(ratio);
      report.constant = {"1/L^(k-1), L ~ " + rational_string(ratio) + " (growth-rate estimate)",
                         std::nullopt, 1.0 / std::pow(L, k - 1)};
      break;
    }
  }
  if (report.constant.exact) report.constant.value = to_double(*report.constant.exact);

  for (int n : ns) {
    const BigRational v = finite_value(n);
    AsymptoticPoint pt;
    pt.n = n;
    pt.exact_value = v;
    pt.value = to_double(v);
    pt.relative_gap = std::abs(pt.value - report.constant.value) / report.constant.value;
    report.points.push_back(pt);
    if (kind == AsymptoticKind::mon_total) {
      AsymptoticReport::TwoTerm terms;
      terms.linear = static_cast<double>(n) / four_pow.get_d();
      terms.offset = 4.0 / (std::sqrt(std::acos(-1.0)) * std::pow(k, 1.5));
      report.two_term.push_back(terms);
    }
  }
  return report;
}

}  // namespace permclust
