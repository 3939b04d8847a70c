#include "systolab/interval.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "systolab/error.hpp"

namespace systolab {

BigFloat::BigFloat(mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(double v, mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_d(value_, v, MPFR_RNDN);
}

BigFloat::BigFloat(const mpq_class& q, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  mpfr_init2(value_, prec);
  mpfr_set_q(value_, q.get_mpq_t(), rnd);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  // mpfr_t is an array type; swap the limb storage instead of copying.
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

mpq_class BigFloat::to_rational() const {
  if (!mpfr_number_p(value_)) throw DomainError("non-finite value has no rational form");
  mpz_class mant;
  mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), value_);
  mpq_class q(mant);
  if (e >= 0) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(e));
    q *= scale;
  } else {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    q /= scale;
  }
  q.canonicalize();
  return q;
}

std::string BigFloat::to_string(int digits) const {
  std::vector<char> buf(static_cast<size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return std::string(buf.data());
}

namespace {

mpfr_prec_t join_prec(const BigFloat& a, const BigFloat& b) {
  return std::max(a.precision(), b.precision());
}

template <typename Fn>
BigFloat binary(const BigFloat& a, const BigFloat& b, Fn fn, mpfr_rnd_t rnd = MPFR_RNDN) {
  BigFloat r(join_prec(a, b));
  fn(r.get(), a.get(), b.get(), rnd);
  return r;
}

}  // namespace

BigFloat operator+(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_add); }
BigFloat operator-(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_sub); }
BigFloat operator*(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_mul); }
BigFloat operator/(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_div); }

BigFloat operator-(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_neg(r.get(), a.get(), MPFR_RNDN);
  return r;
}

bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.get(), b.get()); }
bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.get(), b.get()); }
bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.get(), b.get()); }
bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.get(), b.get()); }

BigFloat abs(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_abs(r.get(), a.get(), MPFR_RNDN);
  return r;
}

BigFloat sqrt(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
  return r;
}

BigFloat log(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_log(r.get(), a.get(), MPFR_RNDN);
  return r;
}

BigFloat exp(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_exp(r.get(), a.get(), MPFR_RNDN);
  return r;
}

BigFloat round_to_integer(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_round(r.get(), a.get());
  return r;
}

mpz_class to_integer(const BigFloat& a) {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), a.get(), MPFR_RNDN);
  return z;
}

// ---------------------------------------------------------------------------

Interval::Interval(mpfr_prec_t prec) : lo_(prec), hi_(prec) {}

Interval::Interval(BigFloat lo, BigFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ > hi_) throw InvalidArgument("interval with lo > hi");
}

Interval Interval::point(double v, mpfr_prec_t prec) {
  return Interval(BigFloat(v, prec), BigFloat(v, prec));
}

Interval Interval::from_rational(const mpq_class& q, mpfr_prec_t prec) {
  return Interval(BigFloat(q, prec, MPFR_RNDD), BigFloat(q, prec, MPFR_RNDU));
}

Interval Interval::from_rationals(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec) {
  return Interval(BigFloat(lo, prec, MPFR_RNDD), BigFloat(hi, prec, MPFR_RNDU));
}

Interval Interval::from_integer(const mpz_class& z, mpfr_prec_t prec) {
  BigFloat lo(prec), hi(prec);
  mpfr_set_z(lo.get(), z.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi.get(), z.get_mpz_t(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

BigFloat Interval::mid() const {
  BigFloat m(precision() + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m;
}

BigFloat Interval::width() const {
  BigFloat w(precision());
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w;
}

bool Interval::contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }

bool Interval::contains(const BigFloat& x) const { return lo_ <= x && x <= hi_; }

bool Interval::contains(double x) const {
  return mpfr_cmp_d(lo_.get(), x) <= 0 && mpfr_cmp_d(hi_.get(), x) >= 0;
}

bool Interval::disjoint(const Interval& other) const {
  return hi_ < other.lo_ || other.hi_ < lo_;
}

double Interval::relative_width() const {
  BigFloat m = abs(mid());
  if (m.sign() == 0) return width().sign() == 0 ? 0.0 : INFINITY;
  return (width() / m).to_double();
}

namespace {

mpfr_prec_t join_prec(const Interval& a, const Interval& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

Interval operator+(const Interval& a, const Interval& b) {
  mpfr_prec_t p = join_prec(a, b);
  BigFloat lo(p), hi(p);
  mpfr_add(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
  mpfr_add(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator-(const Interval& a, const Interval& b) {
  mpfr_prec_t p = join_prec(a, b);
  BigFloat lo(p), hi(p);
  mpfr_sub(lo.get(), a.lo().get(), b.hi().get(), MPFR_RNDD);
  mpfr_sub(hi.get(), a.hi().get(), b.lo().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator-(const Interval& a) {
  BigFloat lo(a.precision()), hi(a.precision());
  mpfr_neg(lo.get(), a.hi().get(), MPFR_RNDD);
  mpfr_neg(hi.get(), a.lo().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator*(const Interval& a, const Interval& b) {
  mpfr_prec_t p = join_prec(a, b);
  const mpfr_srcptr xs[2] = {a.lo().get(), a.hi().get()};
  const mpfr_srcptr ys[2] = {b.lo().get(), b.hi().get()};
  BigFloat lo(p), hi(p), t(p);
  bool first = true;
  for (auto x : xs) {
    for (auto y : ys) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      if (first || t < lo) lo = t;
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      if (first || t > hi) hi = t;
      first = false;
    }
  }
  return Interval(std::move(lo), std::move(hi));
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw DomainError("interval division by an interval containing zero");
  mpfr_prec_t p = join_prec(a, b);
  const mpfr_srcptr xs[2] = {a.lo().get(), a.hi().get()};
  const mpfr_srcptr ys[2] = {b.lo().get(), b.hi().get()};
  BigFloat lo(p), hi(p), t(p);
  bool first = true;
  for (auto x : xs) {
    for (auto y : ys) {
      mpfr_div(t.get(), x, y, MPFR_RNDD);
      if (first || t < lo) lo = t;
      mpfr_div(t.get(), x, y, MPFR_RNDU);
      if (first || t > hi) hi = t;
      first = false;
    }
  }
  return Interval(std::move(lo), std::move(hi));
}

Interval abs(const Interval& a) {
  if (a.lo().sign() >= 0) return a;
  if (a.hi().sign() <= 0) return -a;
  BigFloat hi = -a.lo() > a.hi() ? -a.lo() : a.hi();
  return Interval(BigFloat(a.precision()), std::move(hi));
}

Interval sqr(const Interval& a) {
  Interval m = abs(a);
  BigFloat lo(a.precision()), hi(a.precision());
  mpfr_sqr(lo.get(), m.lo().get(), MPFR_RNDD);
  mpfr_sqr(hi.get(), m.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval sqrt(const Interval& a) {
  if (a.lo().sign() < 0) throw DomainError("sqrt of an interval with negative part");
  BigFloat lo(a.precision()), hi(a.precision());
  mpfr_sqrt(lo.get(), a.lo().get(), MPFR_RNDD);
  mpfr_sqrt(hi.get(), a.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval log(const Interval& a) {
  if (a.lo().sign() <= 0) throw DomainError("log of an interval that is not strictly positive");
  BigFloat lo(a.precision()), hi(a.precision());
  mpfr_log(lo.get(), a.lo().get(), MPFR_RNDD);
  mpfr_log(hi.get(), a.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(a.lo() < b.lo() ? a.lo() : b.lo(), a.hi() > b.hi() ? a.hi() : b.hi());
}

}  // namespace systolab
