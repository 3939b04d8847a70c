#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "systolab/error.hpp"
#include "systolab/factor.hpp"
#include "systolab/gamma.hpp"
#include "systolab/order.hpp"

using namespace systolab;
using namespace systolab::gamma;

TEST(GammaMatrix, PrimeTwoEntries) {
  auto e = gamma_matrix(2);
  Matrix3 want = {{{5, 2, 4}, {2, 1, 2}, {0, 2, 5}}};
  EXPECT_EQ(e.matrix, want);
  EXPECT_EQ(e.level, 2);
  EXPECT_EQ(e.charpoly, numfield::IntPoly({-1, 27, -11, 1}));
}

TEST(GammaMatrix, RejectsComposites) {
  EXPECT_THROW(gamma_matrix(4), NonPrime);
  EXPECT_THROW(gamma_matrix(1), NonPrime);
  EXPECT_THROW(gamma_matrix(0), NonPrime);
}

TEST(GammaMatrix, InvariantsForManyPrimes) {
  for (auto p64 : first_primes(1000)) {
    mpz_class p(static_cast<unsigned long>(p64));
    auto e = gamma_matrix(p);
    ASSERT_EQ(determinant(e.matrix), 1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) ASSERT_TRUE(mpz_divisible_p(mpz_class(e.matrix[i][j] - (i == j)).get_mpz_t(), p.get_mpz_t()));
    const long q = static_cast<long>(p64);
    ASSERT_EQ(e.trace, oracle::gamma_trace(q));
    ASSERT_EQ(e.minor_sum, oracle::gamma_minor_sum(q));
    ASSERT_EQ(e.charpoly.coeff(0), -1);
    // Monic with constant term -1: the only candidate rational roots are +-1.
    ASSERT_NE(e.charpoly.eval(mpz_class(1)), 0);
    ASSERT_NE(e.charpoly.eval(mpz_class(-1)), 0);
    ASSERT_FALSE(e.printed_form_agrees);
  }
}

TEST(GammaMatrix, ValueAtOneClosedForm) {
  // f(1) = 1 - trace + minor_sum - det.
  for (long p : {2, 3, 5, 7, 11}) {
    auto e = gamma_matrix(p);
    EXPECT_EQ(e.charpoly.eval(mpz_class(1)), mpz_class(-oracle::gamma_trace(p) + oracle::gamma_minor_sum(p)));
    EXPECT_EQ(e.charpoly.eval(mpz_class(1)), mpz_class(p * p * p * p));
  }
}

TEST(GammaMatrix, PrintedFormIsReportedNotTrusted) {
  auto e = gamma_matrix(2);
  EXPECT_EQ(e.printed_form, numfield::IntPoly({-1, 87, -23, 1}));
  EXPECT_FALSE(e.printed_form_agrees);
}

TEST(GammaMatrix, CentralizerPolynomialShift) {
  // charpoly(gamma_p)(x) = p^3 g((x - 1)/p) for g the centralizer polynomial.
  for (long p : {2, 3, 5, 7, 11, 13}) {
    auto g = centralizer_poly(p);
    auto e = gamma_matrix(p);
    for (long x = -5; x <= 5; ++x) {
      mpq_class y(mpz_class(x - 1), mpz_class(p));
      mpq_class lhs = e.charpoly.eval(mpq_class(x));
      mpq_class rhs = g.eval(y) * mpq_class(p * p * p);
      EXPECT_EQ(lhs, rhs);
    }
  }
}

TEST(Regularity, PrimeTwo) {
  auto r = check_R_regular(gamma_matrix(2), 128);
  EXPECT_EQ(r.real_root_count, 3);
  EXPECT_TRUE(r.r_regular);
  EXPECT_TRUE(r.hyper_regular);
  EXPECT_TRUE(r.all_positive);
  EXPECT_TRUE(r.product_contains_one);
}

TEST(Regularity, SmallPrimesAgainstNumericRoots) {
  for (long p : {3, 5, 7, 11, 13}) {
    auto e = gamma_matrix(p);
    auto r = check_R_regular(e, 128);
    std::vector<long long> c;
    for (const auto& z : e.charpoly.coeffs()) c.push_back(z.get_si());
    int real = 0;
    for (auto z : oracle::roots(c)) real += z.imag() == 0 && z.real() > 0;
    EXPECT_EQ(real, 3);
    EXPECT_EQ(r.real_root_count, 3);
    EXPECT_TRUE(r.r_regular);
    EXPECT_TRUE(r.hyper_regular);
  }
}

TEST(Regularity, UnitCircleRoots) {
  auto r = check_R_regular(numfield::IntPoly({-1, 0, 0, 1}), 128);
  EXPECT_FALSE(r.r_regular);
  EXPECT_FALSE(r.excludes_plus_minus_one);
  EXPECT_FALSE(r.excludes_modulus_one);
  // x^2 + x + 1: roots on the unit circle, not at +-1.
  auto s = check_R_regular(numfield::IntPoly({1, 1, 1}), 128);
  EXPECT_TRUE(s.excludes_plus_minus_one);
  EXPECT_FALSE(s.excludes_modulus_one);
  EXPECT_FALSE(s.r_regular);
}

TEST(Regularity, OppositeRootsAreNotHyperRegular) {
  // (x^2 - 2)(x - 3): +-sqrt2 share a modulus.
  auto r = check_R_regular(numfield::IntPoly({6, -2, -3, 1}), 128);
  EXPECT_TRUE(r.r_regular);
  EXPECT_FALSE(r.hyper_regular);
}

TEST(Regularity, RepeatedRootRejected) {
  EXPECT_THROW(check_R_regular(numfield::IntPoly({2, -3, 0, 1}), 128), NotSquarefree);
}
