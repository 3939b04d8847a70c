#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace systolab::numfield {

class QPoly;

/// Integer polynomial, coefficients stored low-to-high, degree >= 1.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs);
  IntPoly(std::initializer_list<long> coeffs);

  /// Parses e.g. "x^3 + x^2 - 2x - 1" or "-2*x^2+3". Whitespace is ignored.
  static IntPoly parse(std::string_view text);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  mpz_class coeff(int k) const;
  const mpz_class& leading() const { return coeffs_.back(); }
  bool is_monic() const { return coeffs_.back() == 1; }

  mpz_class eval(const mpz_class& x) const;
  mpq_class eval(const mpq_class& x) const;
  QPoly to_rational() const;
  std::string to_string() const;

  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  std::vector<mpz_class> coeffs_;
};

/// Rational polynomial; the zero polynomial has degree -1.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<mpq_class> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<mpq_class>& coeffs() const { return coeffs_; }
  mpq_class coeff(int k) const;
  const mpq_class& leading() const { return coeffs_.back(); }

  mpq_class eval(const mpq_class& x) const;
  int sign_at(const mpq_class& x) const;
  QPoly derivative() const;
  QPoly monic() const;

  friend QPoly operator+(const QPoly& a, const QPoly& b);
  friend QPoly operator-(const QPoly& a, const QPoly& b);
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  friend QPoly operator-(const QPoly& a);
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<mpq_class> coeffs_;
};

struct QDivision {
  QPoly quotient;
  QPoly remainder;
};

QDivision divmod(const QPoly& a, const QPoly& b);
QPoly gcd(const QPoly& a, const QPoly& b);  // monic, or zero

IntPoly derivative(const IntPoly& f);
bool is_squarefree(const IntPoly& f);

/// Resultant via the Sylvester determinant (fraction-free elimination).
mpz_class resultant(const IntPoly& f, const IntPoly& g);

/// Polynomial discriminant (-1)^{n(n-1)/2} Res(f, f') / lc(f). Requires deg f >= 2.
mpz_class poly_discriminant(const IntPoly& f);

/// Exact determinant of a square integer matrix (Bareiss).
mpz_class determinant(std::vector<std::vector<mpz_class>> m);

}  // namespace systolab::numfield
