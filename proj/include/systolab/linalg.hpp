#pragma once

// Small dense exact linear algebra over Z, Q and Z/pZ. Matrices are
// row-major vectors of rows; sizes here never exceed a few dozen.

#include <gmpxx.h>

#include <vector>

namespace systolab {

using ZVec = std::vector<mpz_class>;
using QVec = std::vector<mpq_class>;
using ZMatrix = std::vector<ZVec>;
using QMatrix = std::vector<QVec>;

QMatrix to_rational(const ZMatrix& m);
QMatrix multiply(const QMatrix& a, const QMatrix& b);
QVec multiply(const QVec& row, const QMatrix& m);  // row * m
QMatrix inverse(const QMatrix& m);                  // throws SingularMatrix
mpq_class determinant(const QMatrix& m);

/// Lower-triangular Hermite normal form of the lattice spanned by the rows
/// of `m` (rank must equal the column count). Row i has its positive pivot
/// in column i, zeros to the right, and entries left of each pivot reduced
/// into [0, pivot).
ZMatrix hnf_lower(ZMatrix m);

/// Basis of {x : x * a == 0 (mod p)} for an r x c matrix `a`, p prime.
/// Returned vectors have entries in [0, p).
std::vector<ZVec> left_kernel_mod(const ZMatrix& a, const mpz_class& p);

/// Common denominator of all entries and the scaled integer matrix.
struct ScaledMatrix {
  ZMatrix numerators;
  mpz_class denominator;
};
ScaledMatrix clear_denominators(const QMatrix& m);

}  // namespace systolab
