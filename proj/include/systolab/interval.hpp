#pragma once

// Multiprecision reals (MPFR) and outward-rounded interval arithmetic on top
// of them. Every Interval operation returns an enclosure of the exact result.

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace systolab {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 128);
  BigFloat(double v, mpfr_prec_t prec);
  BigFloat(const mpq_class& q, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(value_, MPFR_RNDN); }
  // Exact conversion; the value is always a dyadic rational.
  mpq_class to_rational() const;
  std::string to_string(int digits = 20) const;

  int sign() const { return mpfr_sgn(value_); }

 private:
  mpfr_t value_;
};

BigFloat operator+(const BigFloat& a, const BigFloat& b);
BigFloat operator-(const BigFloat& a, const BigFloat& b);
BigFloat operator*(const BigFloat& a, const BigFloat& b);
BigFloat operator/(const BigFloat& a, const BigFloat& b);
BigFloat operator-(const BigFloat& a);
bool operator<(const BigFloat& a, const BigFloat& b);
bool operator>(const BigFloat& a, const BigFloat& b);
bool operator<=(const BigFloat& a, const BigFloat& b);
bool operator>=(const BigFloat& a, const BigFloat& b);
BigFloat abs(const BigFloat& a);
BigFloat sqrt(const BigFloat& a);
BigFloat log(const BigFloat& a);
BigFloat exp(const BigFloat& a);
BigFloat round_to_integer(const BigFloat& a);
mpz_class to_integer(const BigFloat& a);  // nearest integer

/// Closed interval [lo, hi] with endpoints at a common working precision.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = 128);
  Interval(BigFloat lo, BigFloat hi);

  static Interval point(double v, mpfr_prec_t prec);
  static Interval from_rational(const mpq_class& q, mpfr_prec_t prec);
  static Interval from_rationals(const mpq_class& lo, const mpq_class& hi,
                                 mpfr_prec_t prec);
  static Interval from_integer(const mpz_class& z, mpfr_prec_t prec);

  const BigFloat& lo() const { return lo_; }
  const BigFloat& hi() const { return hi_; }
  mpfr_prec_t precision() const { return lo_.precision(); }

  BigFloat mid() const;
  BigFloat width() const;  // rounded up
  double mid_double() const { return mid().to_double(); }

  bool contains_zero() const;
  bool contains(const BigFloat& x) const;
  bool contains(double x) const;
  bool positive() const { return lo_.sign() > 0; }
  bool negative() const { return hi_.sign() < 0; }
  // True when the two intervals share no point.
  bool disjoint(const Interval& other) const;
  // Upper bound on |x - y| / |y| over the interval, using the midpoint as y.
  double relative_width() const;

 private:
  BigFloat lo_;
  BigFloat hi_;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval abs(const Interval& a);
Interval sqr(const Interval& a);
Interval sqrt(const Interval& a);
Interval log(const Interval& a);  // requires a > 0
Interval hull(const Interval& a, const Interval& b);

}  // namespace systolab
