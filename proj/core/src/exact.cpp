// SPDX-License-Identifier: Apache-2.0
#include "qcomp/exact.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace qcomp {

namespace {

void require_discount(const Rational& d) {
  if (d <= 1) throw std::invalid_argument("discount factor must be > 1");
}

void require_loop(const LassoWeights& l) {
  if (l.loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
}

bool valid_integer_text(std::string_view s) {
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Integer parse_integer(std::string_view s) {
  if (!valid_integer_text(s)) throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  if (s[0] == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

// Simplest rational in [lo, hi] for 0 < lo <= hi.
Rational simplest_positive(const Rational& lo, const Rational& hi) {
  Integer c = ceil_of(lo);
  if (c <= hi) return Rational(c);
  Integer n = floor_of(lo);
  Rational inner = simplest_positive(1 / (hi - n), 1 / (lo - n));
  return Rational(n) + 1 / inner;
}

Rational simplest(const Rational& lo, const Rational& hi) {
  if (lo <= 0 && hi >= 0) return 0;
  if (hi < 0) return -simplest_positive(-hi, -lo);
  return simplest_positive(lo, hi);
}

// x^-1 mod m, with the convention 0 for m == 1.
Integer inverse_mod(const Integer& x, const Integer& m) {
  if (m == 1) return 0;
  Integer r;
  Integer xm = x % m;
  if (xm < 0) xm += m;
  if (mpz_invert(r.get_mpz_t(), xm.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw std::logic_error("non-invertible residue");
  }
  return r;
}

// Largest d <= bound with d == residue (mod m).
Integer largest_congruent(const Integer& residue, const Integer& m, const Integer& bound) {
  Integer r = bound % m;
  if (r < 0) r += m;
  Integer diff = (r - residue) % m;
  if (diff < 0) diff += m;
  return bound - diff;
}

}  // namespace

Rational make_rational(const Integer& n, const Integer& d) {
  if (d == 0) throw std::invalid_argument("zero denominator");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  Integer n = parse_integer(text.substr(0, slash));
  std::string_view den = text.substr(slash + 1);
  if (!den.empty() && (den[0] == '-' || den[0] == '+')) {
    throw std::invalid_argument("signed denominator in '" + std::string(text) + "'");
  }
  return make_rational(n, parse_integer(den));
}

std::string to_string(const Rational& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string to_string(const Integer& x) { return x.get_str(); }

Integer floor_of(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& x) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

Integer pow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rational pow(const Rational& base, unsigned long e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
  return r;
}

std::int64_t LassoWeights::max_abs() const {
  std::int64_t m = 0;
  for (auto x : head) m = std::max<std::int64_t>(m, x < 0 ? -x : x);
  for (auto x : loop) m = std::max<std::int64_t>(m, x < 0 ? -x : x);
  return m;
}

std::int64_t LassoWeights::at(std::size_t i) const {
  if (i < head.size()) return head[i];
  return loop.at((i - head.size()) % loop.size());
}

Rational ds_finite(const Weights& w, const Rational& d) {
  require_discount(d);
  Rational acc = 0;
  for (auto it = w.rbegin(); it != w.rend(); ++it) acc = Rational(*it) + acc / d;
  return acc;
}

Rational ds_lasso(const LassoWeights& l, const Rational& d) {
  require_discount(d);
  require_loop(l);
  Rational dl = pow(d, l.loop.size());
  Rational loop_part = dl / (dl - 1) * ds_finite(l.loop, d);
  return ds_finite(l.head, d) + loop_part / pow(d, l.head.size());
}

Rational gap(const Weights& w, const Rational& d) {
  require_discount(d);
  Rational acc = 0;
  for (auto v : w) acc = d * acc + v;
  return acc;
}

std::int64_t sum_finite(const Weights& w) {
  std::int64_t s = 0;
  for (auto v : w) s += v;
  return s;
}

std::int64_t limsup_lasso(const LassoWeights& l) {
  require_loop(l);
  return *std::max_element(l.loop.begin(), l.loop.end());
}

std::int64_t liminf_lasso(const LassoWeights& l) {
  require_loop(l);
  return *std::min_element(l.loop.begin(), l.loop.end());
}

RationalRecovery best_rational_in_interval(const Rational& lo, const Rational& hi,
                                           const Integer& denom_bound) {
  if (lo > hi) throw std::invalid_argument("empty interval");
  if (denom_bound < 1) throw std::invalid_argument("denominator bound must be positive");
  RationalRecovery out;
  Rational r = simplest(lo, hi);
  if (r.get_den() > denom_bound) return out;
  out.value = r;

  // Neighbours of a/b in the Farey sequence of order denom_bound.
  const Integer a = r.get_num(), b = r.get_den();
  Integer inv = inverse_mod(a, b);
  Integer dr = largest_congruent((b - inv) % b, b, denom_bound);  // b*c - a*dr == 1
  Rational right = make_rational((1 + a * dr) / b, dr);
  Integer dl = largest_congruent(inv, b, denom_bound);  // a*dl - b*c == 1
  Rational left = make_rational((a * dl - 1) / b, dl);
  out.ambiguous = (right <= hi) || (left >= lo);
  return out;
}

Dyadic::Dyadic(Integer mant, unsigned long exp) : mant_(std::move(mant)), exp_(exp) { normalize(); }

void Dyadic::normalize() {
  if (mant_ == 0) {
    exp_ = 0;
    return;
  }
  unsigned long tz = mpz_scan1(mant_.get_mpz_t(), 0);
  unsigned long shift = std::min(tz, exp_);
  if (shift > 0) {
    mpz_fdiv_q_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(), shift);
    exp_ -= shift;
  }
}

bool Dyadic::is_dyadic(const Rational& x) {
  const Integer& den = x.get_den();
  return mpz_popcount(den.get_mpz_t()) == 1;
}

Dyadic Dyadic::from_rational(const Rational& x) {
  if (!is_dyadic(x)) throw std::invalid_argument("not a dyadic rational: " + to_string(x));
  unsigned long e = mpz_scan1(x.get_den_mpz_t(), 0);
  return Dyadic(x.get_num(), e);
}

Rational Dyadic::to_rational() const {
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, exp_);
  return make_rational(mant_, den);
}

Integer Dyadic::scaled_floor(unsigned long bits) const {
  Integer r;
  if (bits >= exp_) {
    mpz_mul_2exp(r.get_mpz_t(), mant_.get_mpz_t(), bits - exp_);
  } else {
    mpz_fdiv_q_2exp(r.get_mpz_t(), mant_.get_mpz_t(), exp_ - bits);
  }
  return r;
}

Integer Dyadic::scaled_ceil(unsigned long bits) const {
  Integer r;
  if (bits >= exp_) {
    mpz_mul_2exp(r.get_mpz_t(), mant_.get_mpz_t(), bits - exp_);
  } else {
    mpz_cdiv_q_2exp(r.get_mpz_t(), mant_.get_mpz_t(), exp_ - bits);
  }
  return r;
}

namespace {

Integer lift(const Integer& m, unsigned long by) {
  Integer r;
  mpz_mul_2exp(r.get_mpz_t(), m.get_mpz_t(), by);
  return r;
}

}  // namespace

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  unsigned long e = std::max(a.exp_, b.exp_);
  return Dyadic(lift(a.mant_, e - a.exp_) + lift(b.mant_, e - b.exp_), e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
  unsigned long e = std::max(a.exp_, b.exp_);
  return Dyadic(lift(a.mant_, e - a.exp_) - lift(b.mant_, e - b.exp_), e);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  return Dyadic(a.mant_ * b.mant_, a.exp_ + b.exp_);
}

bool operator<(const Dyadic& a, const Dyadic& b) {
  unsigned long e = std::max(a.exp_, b.exp_);
  return lift(a.mant_, e - a.exp_) < lift(b.mant_, e - b.exp_);
}

std::string to_string(const Dyadic& x) { return to_string(x.to_rational()); }

}  // namespace qcomp
