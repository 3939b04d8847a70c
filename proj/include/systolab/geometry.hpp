#pragma once

#include <gmpxx.h>

#include <vector>

#include "systolab/interval.hpp"

namespace systolab::geometry {

/// Positive eigenvalue moduli of an element of SL_n, as certified intervals.
struct EigenvalueData {
  std::vector<Interval> values;

  /// Point intervals from doubles at precision `prec`.
  static EigenvalueData from_doubles(const std::vector<double>& values, mpfr_prec_t prec = 128);
  /// Throws DomainError for n < 2 or a nonpositive value and InvalidArgument
  /// when |log(product)| exceeds `tolerance` (beyond the enclosure).
  void validate(double tolerance = 1e-9) const;
};

/// (sum over ordered pairs i != j of log^2(lambda_i / lambda_j))^(1/2).
Interval geodesic_length(const EigenvalueData& eigs);

/// c * adjusted_regulator; DomainError on nonpositive inputs.
double torus_volume_lower(double adjusted_regulator, double c);

struct EnvelopeParams {
  int degree_n = 3;
  double c1 = 1.0;
  double c2 = 1.0;
  double gamma_n = 1.0;
  int unit_rank_r = 2;
  int subfield_rank_rho = 0;

  void validate() const;
};

/// c1 * sqrt(D) * log(D)^(n-1); DomainError for D <= 1.
double landau_envelope(const mpz_class& D, const EnvelopeParams& params);
/// c2 * log(gamma_n * D)^(r - rho); DomainError when gamma_n * D <= 1.
double silverman_envelope(const mpz_class& D, const EnvelopeParams& params);

/// Dirichlet rank r1 + r2 - 1. With degree >= 0, checks r1 + 2 r2 == degree.
int unit_rank(int r1, int r2, int degree = -1);

}  // namespace systolab::geometry
