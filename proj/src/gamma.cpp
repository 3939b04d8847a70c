#include "systolab/gamma.hpp"

#include <algorithm>

#include "systolab/error.hpp"
#include "systolab/factor.hpp"
#include "systolab/realroots.hpp"

namespace systolab::gamma {

using numfield::IntPoly;

mpz_class determinant(const Matrix3& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

namespace {

mpz_class trace_of(const Matrix3& a) { return a[0][0] + a[1][1] + a[2][2]; }

mpz_class minor_sum_of(const Matrix3& a) {
  return (a[0][0] * a[1][1] - a[0][1] * a[1][0]) + (a[0][0] * a[2][2] - a[0][2] * a[2][0]) +
         (a[1][1] * a[2][2] - a[1][2] * a[2][1]);
}

IntPoly reversed_sign_poly(const IntPoly& f) {
  // f(-x) up to the sign making it monic again.
  std::vector<mpz_class> c = f.coeffs();
  for (size_t k = 0; k < c.size(); ++k)
    if (k % 2 == 1) c[k] = -c[k];
  if (c.back() < 0)
    for (auto& x : c) x = -x;
  return IntPoly(c);
}

IntPoly reciprocal_poly(const IntPoly& f) {
  std::vector<mpz_class> c(f.coeffs().rbegin(), f.coeffs().rend());
  while (!c.empty() && c.back() == 0) c.pop_back();
  return IntPoly(c);
}

bool shares_root(const IntPoly& f, const IntPoly& g) {
  if (g.degree() < 1) return false;
  return numfield::gcd(f.to_rational(), g.to_rational()).degree() > 0;
}

}  // namespace

IntPoly char_poly(const Matrix3& a) {
  return IntPoly(std::vector<mpz_class>{-determinant(a), minor_sum_of(a), -trace_of(a), mpz_class(1)});
}

IntPoly printed_char_poly(const mpz_class& p) {
  mpz_class p2 = p * p;
  mpz_class p4 = p2 * p2;
  return IntPoly(std::vector<mpz_class>{mpz_class(-1), 3 + 5 * p2 + 4 * p4, -(3 + 5 * p2), mpz_class(1)});
}

IntPoly centralizer_poly(const mpz_class& p) {
  return IntPoly(std::vector<mpz_class>{p, p * p - 2, -2 * p, mpz_class(1)});
}

CongruenceElement gamma_matrix(const mpz_class& p) {
  if (!is_probable_prime(p)) throw NonPrime(p.get_str() + " is not prime");
  const mpz_class p2 = p * p;
  CongruenceElement e;
  e.matrix = {{{1 + p2, p, p2}, {p, mpz_class(1), p}, {mpz_class(0), p, 1 + p2}}};
  e.level = p;
  if (determinant(e.matrix) != 1) throw Error("gamma_p has determinant != 1");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      mpz_class d = e.matrix[i][j] - (i == j ? 1 : 0);
      if (!mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) throw Error("gamma_p is not congruent to I");
    }
  e.charpoly = char_poly(e.matrix);
  e.trace = trace_of(e.matrix);
  e.minor_sum = minor_sum_of(e.matrix);
  e.printed_form = printed_char_poly(p);
  e.printed_form_agrees = e.printed_form == e.charpoly;
  return e;
}

RegularityReport check_R_regular(const IntPoly& f, int precision_bits) {
  if (!numfield::is_squarefree(f)) throw NotSquarefree(f.to_string() + " has a repeated root");
  RegularityReport rep;
  rep.degree = f.degree();
  rep.excludes_plus_minus_one = f.eval(mpz_class(1)) != 0 && f.eval(mpz_class(-1)) != 0;
  // Roots on the unit circle are shared with the reciprocal polynomial.
  rep.excludes_modulus_one = rep.excludes_plus_minus_one && !shares_root(f, reciprocal_poly(f));
  const bool opposite_pair = shares_root(f, reversed_sign_poly(f));

  numfield::PrecisionConfig cfg;
  for (int bits = std::max(precision_bits, 32); bits <= cfg.max_bits; bits *= 2) {
    numfield::RealRootIsolation iso = numfield::sturm_real_roots(f, bits, cfg);
    rep.real_root_count = static_cast<int>(iso.count());
    rep.real_roots.clear();
    for (size_t i = 0; i < iso.count(); ++i) rep.real_roots.push_back(iso.enclosure(i, bits + 32));
    rep.precision_bits = bits;

    bool all_real = rep.real_root_count == rep.degree;
    rep.all_positive = std::all_of(rep.real_roots.begin(), rep.real_roots.end(),
                                   [](const Interval& r) { return r.positive(); });
    rep.r_regular = all_real && rep.excludes_modulus_one;
    if (all_real) {
      Interval prod = Interval::from_integer(1, bits + 32);
      for (const auto& r : rep.real_roots) prod = prod * r;
      rep.product_contains_one = prod.contains(1.0);
    }
    if (!all_real || opposite_pair) {
      rep.hyper_regular = false;
      return rep;
    }
    // Distinct moduli must be certified by disjoint enclosures of |root|.
    bool separated = true;
    for (size_t i = 0; i < rep.real_roots.size() && separated; ++i)
      for (size_t j = i + 1; j < rep.real_roots.size(); ++j)
        if (!abs(rep.real_roots[i]).disjoint(abs(rep.real_roots[j]))) {
          separated = false;
          break;
        }
    if (separated) {
      rep.hyper_regular = true;
      return rep;
    }
  }
  throw PrecisionExhausted("root moduli not separated at maximum precision");
}

RegularityReport check_R_regular(const CongruenceElement& elt, int precision_bits) {
  return check_R_regular(elt.charpoly, precision_bits);
}

}  // namespace systolab::gamma
