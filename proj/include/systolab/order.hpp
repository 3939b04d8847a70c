#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "systolab/factor.hpp"
#include "systolab/linalg.hpp"
#include "systolab/poly.hpp"

namespace systolab::numfield {

/// An order of Q[x]/(f) for monic irreducible f, given by a Z-basis whose
/// rows are power-basis coordinates. Elements are integer coordinate
/// vectors in that basis.
class NumberFieldOrder {
 public:
  NumberFieldOrder(IntPoly poly, QMatrix basis);

  const IntPoly& poly() const { return poly_; }
  int degree() const { return poly_.degree(); }
  const QMatrix& basis() const { return basis_; }

  /// [this : Z[theta]].
  const mpz_class& index() const { return index_; }
  const mpz_class& disc_poly() const { return disc_poly_; }
  /// Discriminant of this order; the field discriminant once maximal.
  const mpz_class& disc_field() const { return disc_; }

  /// True once maximal_order examined every prime whose square divides
  /// disc_poly. Orders built any other way report false.
  bool maximality_certified() const { return certified_; }
  const std::vector<mpz_class>& unfactored() const { return unfactored_; }
  void set_certification(bool certified, std::vector<mpz_class> unfactored);

  ZVec one() const;
  ZVec multiply(const ZVec& a, const ZVec& b) const;
  ZVec multiply_mod(const ZVec& a, const ZVec& b, const mpz_class& m) const;
  ZVec power(const ZVec& a, long exponent) const;  // negative exponent needs a unit
  ZMatrix multiplication_matrix(const ZVec& a) const;
  mpz_class norm(const ZVec& a) const;
  mpz_class trace(const ZVec& a) const;
  bool is_unit(const ZVec& a) const;
  ZVec inverse_unit(const ZVec& u) const;

  QVec to_power_basis(const ZVec& a) const;
  /// Coordinates of a power-basis element; nullopt when it is not in the order.
  std::optional<ZVec> from_power_basis(const QVec& a) const;

  /// Structure constant: coefficient of basis k in basis_i * basis_j.
  const mpz_class& structure(int i, int j, int k) const {
    return table_[static_cast<size_t>((i * degree() + j) * degree() + k)];
  }

 private:
  IntPoly poly_;
  QMatrix basis_;
  QMatrix basis_inverse_;
  std::vector<mpz_class> table_;
  mpz_class index_;
  mpz_class disc_poly_;
  mpz_class disc_;
  bool certified_ = false;
  std::vector<mpz_class> unfactored_;
};

/// Product of power-basis elements reduced modulo the monic `f`.
QVec multiply_mod_poly(const QVec& a, const QVec& b, const IntPoly& f);

/// Z[theta] for monic f.
NumberFieldOrder equation_order(const IntPoly& f);

/// Dedekind's criterion: true iff p does not divide [O_K : Z[theta]].
bool dedekind_p_maximal(const IntPoly& f, const mpz_class& p);

/// One step of the Round 2 enlargement at p: the ring of multipliers of the
/// p-radical. Returns nullopt when `order` is already p-maximal.
std::optional<NumberFieldOrder> enlarge_at(const NumberFieldOrder& order, const mpz_class& p);

/// Irreducibility over Q for monic f of degree <= 4 (rational roots, then
/// quadratic factors for quartics).
bool is_irreducible(const IntPoly& f);

struct MaximalOrderOptions {
  FactorBudget factor;
};

/// Maximal order via Dedekind's criterion and Round 2 at every prime whose
/// square divides disc_poly. If the discriminant cannot be fully factored
/// within budget, the result is the largest p-maximal order found and
/// carries maximality_certified() == false.
NumberFieldOrder maximal_order(const IntPoly& f, const MaximalOrderOptions& options = {});

}  // namespace systolab::numfield
