#include "permclust/series.hpp"

#include <algorithm>

#include "permclust/cluster.hpp"
#include "permclust/enumerate.hpp"

namespace permclust {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidInput(msg);
}

}  // namespace

TruncatedSeries::TruncatedSeries(int order) {
  require(order >= 0, "truncation order must be nonnegative");
  coeff_.assign(static_cast<size_t>(order) + 1, BigRational(0));
}

TruncatedSeries TruncatedSeries::one(int order) {
  TruncatedSeries s(order);
  s.coeff_[0] = 1;
  return s;
}

TruncatedSeries TruncatedSeries::t_power(int m, int order) {
  TruncatedSeries s(order);
  require(m >= 0, "exponent must be nonnegative");
  if (m <= order) s.coeff_[static_cast<size_t>(m)] = 1;
  return s;
}

const BigRational& TruncatedSeries::coeff(int i) const {
  require(i >= 0 && i <= order(), "coefficient index out of range");
  return coeff_[static_cast<size_t>(i)];
}

void TruncatedSeries::set_coeff(int i, const BigRational& v) {
  require(i >= 0 && i <= order(), "coefficient index out of range");
  coeff_[static_cast<size_t>(i)] = v;
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& rhs) const {
  const int T = std::min(order(), rhs.order());
  TruncatedSeries out(T);
  for (int i = 0; i <= T; ++i) out.coeff_[static_cast<size_t>(i)] = coeff(i) + rhs.coeff(i);
  return out;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& rhs) const {
  const int T = std::min(order(), rhs.order());
  TruncatedSeries out(T);
  for (int i = 0; i <= T; ++i) out.coeff_[static_cast<size_t>(i)] = coeff(i) - rhs.coeff(i);
  return out;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& rhs) const {
  const int T = std::min(order(), rhs.order());
  TruncatedSeries out(T);
  for (int i = 0; i <= T; ++i) {
    if (coeff(i) == 0) continue;
    for (int j = 0; i + j <= T; ++j) {
      if (rhs.coeff(j) == 0) continue;
      out.coeff_[static_cast<size_t>(i + j)] += coeff(i) * rhs.coeff(j);
    }
  }
  return out;
}

TruncatedSeries TruncatedSeries::scaled(const BigRational& factor) const {
  TruncatedSeries out(order());
  for (int i = 0; i <= order(); ++i) out.coeff_[static_cast<size_t>(i)] = coeff(i) * factor;
  return out;
}

TruncatedSeries TruncatedSeries::shifted_up(int m) const {
  require(m >= 0, "shift must be nonnegative");
  TruncatedSeries out(order());
  for (int i = m; i <= order(); ++i) out.coeff_[static_cast<size_t>(i)] = coeff(i - m);
  return out;
}

TruncatedSeries TruncatedSeries::reciprocal() const {
  require(coeff(0) != 0, "reciprocal needs a nonzero constant term");
  const int T = order();
  TruncatedSeries out(T);
  const BigRational inv0 = BigRational(1) / coeff(0);
  out.coeff_[0] = inv0;
  for (int n = 1; n <= T; ++n) {
    BigRational acc(0);
    for (int i = 1; i <= n; ++i) acc += coeff(i) * out.coeff_[static_cast<size_t>(n - i)];
    out.coeff_[static_cast<size_t>(n)] = -inv0 * acc;
  }
  return out;
}

TruncatedSeries TruncatedSeries::derivative() const {
  require(order() >= 1, "cannot differentiate an order-0 truncation");
  TruncatedSeries out(order() - 1);
  for (int i = 0; i < order(); ++i)
    out.coeff_[static_cast<size_t>(i)] = BigRational(i + 1) * coeff(i + 1);
  return out;
}

std::optional<int> first_mismatch(const TruncatedSeries& a, const TruncatedSeries& b) {
  const int T = std::min(a.order(), b.order());
  for (int i = 0; i <= T; ++i)
    if (a.coeff(i) != b.coeff(i)) return i;
  return std::nullopt;
}

TruncatedSeries catalan_gf(int order) {
  const auto cats = catalan_values(order);
  TruncatedSeries s(order);
  for (int i = 0; i <= order; ++i) s.set_coeff(i, BigRational(cats[static_cast<size_t>(i)]));
  return s;
}

TruncatedSeries binomial_series(BinomialExponent e, int order) {
  const auto cats = catalan_values(order + 1);
  TruncatedSeries s(order);
  switch (e) {
    case BinomialExponent::half:
      s.set_coeff(0, BigRational(1));
      for (int n = 1; n <= order; ++n)
        s.set_coeff(n, make_rational(BigInt(-2) * binomial(2ul * static_cast<unsigned long>(n) - 1,
                                                           static_cast<unsigned long>(n)),
                                     BigInt(2 * n - 1)));
      break;
    case BinomialExponent::minus_half:
      for (int n = 0; n <= order; ++n)
        s.set_coeff(n, BigRational(BigInt(n + 1) * cats[static_cast<size_t>(n)]));
      break;
    case BinomialExponent::minus_three_half:
      for (int n = 0; n <= order; ++n)
        s.set_coeff(n, make_rational(BigInt(n + 1) * BigInt(n + 2) * cats[static_cast<size_t>(n + 1)],
                                     BigInt(2)));
      break;
    case BinomialExponent::minus_one: {
      BigInt pow = 1;
      for (int n = 0; n <= order; ++n) {
        s.set_coeff(n, BigRational(pow));
        pow *= 4;
      }
      break;
    }
  }
  return s;
}

namespace {

// 1/(1-2tC), shared by the closed forms below.
TruncatedSeries resolvent(const TruncatedSeries& c_gf, int order) {
  TruncatedSeries denom = TruncatedSeries::one(order) - c_gf.shifted_up(1).scaled(BigRational(2));
  return denom.reciprocal();
}

}  // namespace

TruncatedSeries g_closed(int k, bool star, int order) {
  require(k >= 2, "need k >= 2");
  require(order >= k, "order too small for the requested k");
  const TruncatedSeries c_gf = catalan_gf(order);
  const TruncatedSeries res = resolvent(c_gf, order);
  if (!star) return (c_gf * res).shifted_up(k);
  const TruncatedSeries c_minus_one = c_gf - TruncatedSeries::one(order);
  return (c_minus_one * res).shifted_up(k - 1);
}

TruncatedSeries g_from_recursion(int k, bool star, int order) {
  require(k >= 2, "need k >= 2");
  require(order >= k, "order too small for the requested k");
  const auto cats = catalan_values(order);
  std::vector<BigRational> s(static_cast<size_t>(order) + 1, BigRational(0));
  for (int n = k; n <= order; ++n) {
    BigRational acc(0);
    for (int j = k + 1; j <= n; ++j)  // s_{j-1} vanishes below k
      acc += make_rational(cats[static_cast<size_t>(j - 1)] * cats[static_cast<size_t>(n - j)],
                           cats[static_cast<size_t>(n)]) *
             s[static_cast<size_t>(j - 1)];
    const BigInt boundary = star ? cats[static_cast<size_t>(n - k + 1)] : cats[static_cast<size_t>(n - k)];
    s[static_cast<size_t>(n)] =
        BigRational(2) * acc + make_rational(boundary, cats[static_cast<size_t>(n)]);
  }
  TruncatedSeries out(order);
  for (int n = 0; n <= order; ++n)
    out.set_coeff(n, s[static_cast<size_t>(n)] * BigRational(cats[static_cast<size_t>(n)]));
  return out;
}

namespace {

SeriesIdentity equality_report(const std::string& name, const TruncatedSeries& lhs,
                               const TruncatedSeries& rhs) {
  SeriesIdentity id;
  id.name = name;
  id.truncation = std::min(lhs.order(), rhs.order());
  id.first_mismatch = first_mismatch(lhs, rhs);
  id.holds = !id.first_mismatch.has_value();
  return id;
}

}  // namespace

SeriesIdentity cross_term_domination(int k, const Permutation& tau, int order) {
  require(k >= 2 && tau.size() == k, "tau must have length k >= 2");
  const TruncatedSeries c_gf = catalan_gf(order);
  const TruncatedSeries res = resolvent(c_gf, order);
  const int i = [&] {
    const auto& w = tau.word();
    return static_cast<int>(std::max_element(w.begin(), w.end()) - w.begin()) + 1;
  }();

  // Enumerated cross-term coefficients, then both sides multiplied by the
  // shared resolvent factor.
  TruncatedSeries w_series(order);
  for (int n = k; n <= order; ++n)
    w_series.set_coeff(n, BigRational(cross_term_coefficient(n, k, tau)));
  const TruncatedSeries lhs = (w_series * res).shifted_up(k - i + 1);
  const TruncatedSeries g = g_closed(k, false, order);
  const TruncatedSeries rhs = (g * res).shifted_up(k - i + 1);

  SeriesIdentity id;
  id.name = "cross-term-domination k=" + std::to_string(k) + " tau=" + to_string(tau);
  id.truncation = order;
  id.holds = true;
  for (int n = 0; n <= order; ++n) {
    if (lhs.coeff(n) > rhs.coeff(n)) {
      id.holds = false;
      id.first_mismatch = n;
      break;
    }
  }
  return id;
}

std::vector<SeriesIdentity> verify_identities(int order) {
  require(order >= 12, "order too small for the k-dependent identities");
  std::vector<SeriesIdentity> out;
  const auto cats = catalan_values(order + 1);
  const TruncatedSeries c_gf = catalan_gf(order);
  const TruncatedSeries res = resolvent(c_gf, order);
  const TruncatedSeries inv_sqrt = binomial_series(BinomialExponent::minus_half, order);
  const TruncatedSeries inv_three_half = binomial_series(BinomialExponent::minus_three_half, order);
  const TruncatedSeries geometric = binomial_series(BinomialExponent::minus_one, order);

  {  // t*C/(1-2tC) has coefficients (n+1)C_n/2
    const TruncatedSeries lhs = (c_gf * res).shifted_up(1);
    TruncatedSeries rhs(order);
    for (int n = 1; n <= order; ++n)
      rhs.set_coeff(n, make_rational(BigInt(n + 1) * cats[static_cast<size_t>(n)], BigInt(2)));
    out.push_back(equality_report("mean-series", lhs, rhs));
  }

  out.push_back(equality_report("resolvent-inverse-sqrt", res, inv_sqrt));

  for (int k = 2; k <= 6; ++k) {  // t^(k-1)/(1-2tC) = sum (n+1)C_n t^(n+k-1)
    const TruncatedSeries lhs = res.shifted_up(k - 1);
    const TruncatedSeries rhs = inv_sqrt.shifted_up(k - 1);
    out.push_back(equality_report("shifted-resolvent k=" + std::to_string(k), lhs, rhs));
  }

  for (int k = 2; k <= 6; ++k) {  // lead term of the second-moment series
    require(order >= 2 * k, "order too small for k-dependent identities");
    const TruncatedSeries g = g_closed(k, false, order);
    const TruncatedSeries lhs = (g * g * res).shifted_up(1).scaled(BigRational(2));
    const TruncatedSeries rhs =
        (inv_three_half.shifted_up(2 * k - 1) - inv_three_half.shifted_up(2 * k).scaled(BigRational(2))) -
        geometric.shifted_up(2 * k - 1);
    out.push_back(equality_report("second-moment-lead k=" + std::to_string(k), lhs, rhs));
  }

  for (int k = 2; k <= 6; ++k) {  // cross-term closed form, all anchor offsets
    const TruncatedSeries g = g_closed(k, false, order);
    for (int i = 1; i <= k; ++i) {
      const TruncatedSeries lhs = (g * res).shifted_up(k - i + 1);
      const TruncatedSeries rhs =
          (geometric - inv_sqrt).shifted_up(2 * k - i).scaled(make_rational(1, 2));
      out.push_back(equality_report(
          "cross-term-closed k=" + std::to_string(k) + " i=" + std::to_string(i), lhs, rhs));
    }
  }

  {  // domination bound, restricted to orders where enumeration is feasible
    const struct {
      int k;
      Permutation tau;
    } cases[] = {{2, Permutation({1, 2})}, {3, Permutation({1, 3, 2})}, {3, Permutation({3, 1, 2})}};
    for (const auto& c : cases) {
      const auto& w = c.tau.word();
      const int i = static_cast<int>(std::max_element(w.begin(), w.end()) - w.begin()) + 1;
      const int feasible = std::min(order, 11 + c.k - i + 1);
      out.push_back(cross_term_domination(c.k, c.tau, feasible));
    }
  }
  return out;
}

}  // namespace permclust
