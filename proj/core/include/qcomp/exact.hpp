// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qcomp {

using Integer = mpz_class;
using Rational = mpq_class;  // every arithmetic result is kept canonical by GMP
using Weights = std::vector<std::int64_t>;

// Builds n/d in lowest terms. Throws on d == 0.
Rational make_rational(const Integer& n, const Integer& d);
// Accepts "n" or "n/d" with optional sign.
Rational parse_rational(std::string_view text);
// Always "n/d", also for integers ("2/1").
std::string to_string(const Rational& x);
std::string to_string(const Integer& x);

Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);
Rational pow(const Rational& base, unsigned long e);
Integer pow(const Integer& base, unsigned long e);

// Ultimately periodic integer sequence head . loop^omega.
struct LassoWeights {
  Weights head;
  Weights loop;

  std::int64_t max_abs() const;
  std::int64_t at(std::size_t i) const;  // i-th element of the infinite unrolling
};

Rational ds_finite(const Weights& w, const Rational& d);
Rational ds_lasso(const LassoWeights& l, const Rational& d);
Rational gap(const Weights& w, const Rational& d);
std::int64_t sum_finite(const Weights& w);

std::int64_t limsup_lasso(const LassoWeights& l);
std::int64_t liminf_lasso(const LassoWeights& l);

struct RationalRecovery {
  std::optional<Rational> value;
  bool ambiguous = false;
};

// Smallest-denominator rational in [lo, hi] provided its denominator is at
// most denom_bound; `ambiguous` is set when another such rational also lies
// in the interval.
RationalRecovery best_rational_in_interval(const Rational& lo, const Rational& hi,
                                           const Integer& denom_bound);

// mantissa / 2^exponent, normalized so the mantissa is odd or the value zero
// with exponent 0.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long v) : mant_(v) {}  // NOLINT(google-explicit-constructor)
  Dyadic(Integer mant, unsigned long exp);

  static Dyadic from_rational(const Rational& x);  // throws unless dyadic
  static bool is_dyadic(const Rational& x);

  const Integer& mantissa() const { return mant_; }
  unsigned long exponent() const { return exp_; }
  Rational to_rational() const;

  // floor / ceil of value * 2^bits
  Integer scaled_floor(unsigned long bits) const;
  Integer scaled_ceil(unsigned long bits) const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.mant_ == b.mant_ && a.exp_ == b.exp_;
  }
  friend bool operator<(const Dyadic& a, const Dyadic& b);
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return !(b < a); }

 private:
  void normalize();

  Integer mant_ = 0;
  unsigned long exp_ = 0;
};

std::string to_string(const Dyadic& x);

}  // namespace qcomp
