#pragma once

#include <optional>
#include <string>
#include <vector>

#include "permclust/permutation.hpp"
#include "permclust/rational.hpp"

namespace permclust {

/// Formal power series over the rationals, truncated at a fixed order:
/// coefficients of t^0..t^T are stored exactly. Arithmetic never extends the
/// truncation order; binary operations carry the smaller of the two orders.
class TruncatedSeries {
public:
  explicit TruncatedSeries(int order);  // zero series
  static TruncatedSeries one(int order);
  static TruncatedSeries t_power(int m, int order);

  int order() const { return static_cast<int>(coeff_.size()) - 1; }
  const BigRational& coeff(int i) const;
  void set_coeff(int i, const BigRational& v);

  TruncatedSeries operator+(const TruncatedSeries& rhs) const;
  TruncatedSeries operator-(const TruncatedSeries& rhs) const;
  TruncatedSeries operator*(const TruncatedSeries& rhs) const;
  TruncatedSeries scaled(const BigRational& factor) const;
  /// Multiplication by t^m at unchanged truncation order.
  TruncatedSeries shifted_up(int m) const;
  /// 1/this; requires a nonzero constant term.
  TruncatedSeries reciprocal() const;
  /// Termwise derivative, one order lower.
  TruncatedSeries derivative() const;

  bool operator==(const TruncatedSeries&) const = default;

private:
  std::vector<BigRational> coeff_;
};

/// First index (up to the common order) where the two series differ.
std::optional<int> first_mismatch(const TruncatedSeries& a, const TruncatedSeries& b);

/// Catalan generating function, coefficients taken from exact Catalan numbers.
TruncatedSeries catalan_gf(int order);

enum class BinomialExponent { half, minus_half, minus_three_half, minus_one };

/// (1-4t)^e from the explicit coefficient formulas (no floating point):
///   e = +1/2 : 1, then -(2/(2n-1))*binom(2n-1,n)
///   e = -1/2 : (n+1)*C_n
///   e = -3/2 : (n+1)*(n+2)*C_{n+1}/2
///   e = -1   : 4^n
TruncatedSeries binomial_series(BinomialExponent e, int order);

/// Generating function of C_n*s_n in closed form: t^k*C/(1-2tC) for the
/// generic branch, t^(k-1)*(C-1)/(1-2tC) for the linear-growth branch.
TruncatedSeries g_closed(int k, bool star, int order);

/// Same object built from the probabilistic recursion
///   s_n = 2*sum_j (C_{j-1}C_{n-j}/C_n) s_{j-1} + boundary_n,  s_{<k} = 0.
TruncatedSeries g_from_recursion(int k, bool star, int order);

struct SeriesIdentity {
  std::string name;
  int truncation = 0;
  bool holds = false;
  std::optional<int> first_mismatch;  // index of the first offending coefficient
};

/// The identity battery behind the moment generating functions: the
/// mean-series closed form, the resolvent/inverse-sqrt identities, the
/// second-moment lead term, the cross-term closed form, and the brute-force
/// domination bound for the cross term (checked at a reduced order).
std::vector<SeriesIdentity> verify_identities(int order);

/// Coefficientwise comparison of the enumerated cross-term series against its
/// closed-form upper bound, for a specific cluster pattern.
SeriesIdentity cross_term_domination(int k, const Permutation& tau, int order);

}  // namespace permclust
