#pragma once

#include <gmpxx.h>

#include <string>

namespace permclust {

// Exact arithmetic backbone. All counts are BigInt, all probabilities and
// moments are BigRational; doubles appear only in reporting layers.
using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigRational make_rational(const BigInt& num, const BigInt& den) {
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

inline BigRational make_rational(long num, long den) {
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

// "p/q" in lowest terms, denominator always explicit ("3/1", "-5/7").
inline std::string rational_string(const BigRational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline double to_double(const BigRational& q) { return q.get_d(); }

BigInt factorial(unsigned long n);
BigInt binomial(unsigned long n, unsigned long k);

}  // namespace permclust
