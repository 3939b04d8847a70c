#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <vector>

#include "systolab/interval.hpp"
#include "systolab/poly.hpp"

namespace systolab::gamma {

using Matrix3 = std::array<std::array<mpz_class, 3>, 3>;

struct RegularityReport {
  int degree = 0;
  int real_root_count = 0;
  bool excludes_plus_minus_one = false;  // exact: f(1) != 0 and f(-1) != 0
  bool excludes_modulus_one = false;     // certified: no root on the unit circle
  bool r_regular = false;                // all roots real, distinct, none of modulus 1
  bool hyper_regular = false;            // all roots real with pairwise distinct moduli
  bool all_positive = false;
  bool product_contains_one = false;     // enclosure of the root product holds 1
  std::vector<Interval> real_roots;      // increasing
  int precision_bits = 0;
};

/// gamma_p together with its characteristic polynomial and the comparison
/// against the closed form 1 - (3+5p^2+4p^4)x + (3+5p^2)x^2 - x^3.
struct CongruenceElement {
  Matrix3 matrix;
  mpz_class level;
  numfield::IntPoly charpoly;      // det(xI - A)
  numfield::IntPoly printed_form;  // closed form above, negated to be monic
  bool printed_form_agrees = false;
  mpz_class trace;
  mpz_class minor_sum;  // sum of principal 2x2 minors
  std::optional<RegularityReport> regularity;
};

mpz_class determinant(const Matrix3& a);
numfield::IntPoly char_poly(const Matrix3& a);

/// Rows (1+p^2, p, p^2), (p, 1, p), (0, p, 1+p^2). Throws NonPrime unless p is prime.
CongruenceElement gamma_matrix(const mpz_class& p);

/// The closed form 1 - (3+5p^2+4p^4)x + (3+5p^2)x^2 - x^3 in det(xI - A) sign.
numfield::IntPoly printed_char_poly(const mpz_class& p);

/// Characteristic polynomial of (gamma_p - I)/p, which generates the same
/// field and whose order Z[mu] contains Z[gamma_p] with index p^3.
numfield::IntPoly centralizer_poly(const mpz_class& p);

/// Certified root-structure report. Throws NotSquarefree for repeated roots
/// and PrecisionExhausted if real roots cannot be separated in modulus.
RegularityReport check_R_regular(const numfield::IntPoly& charpoly, int precision_bits);
RegularityReport check_R_regular(const CongruenceElement& elt, int precision_bits);

}  // namespace systolab::gamma
