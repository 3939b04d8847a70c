#include "systolab/geometry.hpp"

#include <cmath>
#include <string>

#include "systolab/error.hpp"

namespace systolab::geometry {

EigenvalueData EigenvalueData::from_doubles(const std::vector<double>& values, mpfr_prec_t prec) {
  EigenvalueData d;
  for (double v : values) d.values.push_back(Interval::point(v, prec));
  return d;
}

void EigenvalueData::validate(double tolerance) const {
  if (values.size() < 2) throw DomainError("eigenvalue data needs at least two values");
  for (const auto& v : values)
    if (!v.positive()) throw DomainError("eigenvalue moduli must be positive");
  Interval s = Interval::from_integer(0, values[0].precision());
  for (const auto& v : values) s = s + log(v);
  // |log prod| must reach within tolerance of 0 somewhere in the enclosure.
  if (s.lo().to_double() > tolerance || s.hi().to_double() < -tolerance)
    throw InvalidArgument("eigenvalue product is not +-1");
}

Interval geodesic_length(const EigenvalueData& eigs) {
  eigs.validate();
  std::vector<Interval> logs;
  for (const auto& v : eigs.values) logs.push_back(log(v));
  Interval sum = Interval::from_integer(0, logs[0].precision());
  for (size_t i = 0; i < logs.size(); ++i)
    for (size_t j = 0; j < logs.size(); ++j)
      if (i != j) sum = sum + sqr(logs[i] - logs[j]);
  return sqrt(sum);
}

double torus_volume_lower(double adjusted_regulator, double c) {
  if (!(adjusted_regulator > 0)) throw DomainError("adjusted regulator must be positive");
  if (!(c > 0)) throw DomainError("metric constant must be positive");
  return c * adjusted_regulator;
}

void EnvelopeParams::validate() const {
  if (degree_n < 1) throw DomainError("degree must be positive");
  if (!(c1 > 0) || !(c2 > 0) || !(gamma_n > 0)) throw DomainError("envelope constants must be positive");
  if (unit_rank_r < 0 || subfield_rank_rho < 0 || subfield_rank_rho > unit_rank_r)
    throw DomainError("need 0 <= rho <= r");
}

namespace {

double log_of(const mpz_class& d) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, d.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace

double landau_envelope(const mpz_class& D, const EnvelopeParams& params) {
  params.validate();
  if (D <= 1) throw DomainError("Landau envelope needs D > 1");
  double l = log_of(D);
  return params.c1 * std::exp(0.5 * l) * std::pow(l, params.degree_n - 1);
}

double silverman_envelope(const mpz_class& D, const EnvelopeParams& params) {
  params.validate();
  if (D <= 1) throw DomainError("Silverman envelope needs D > 1");
  double arg = std::log(params.gamma_n) + log_of(D);
  if (!(arg > 0)) throw DomainError("Silverman envelope needs gamma_n * D > 1");
  return params.c2 * std::pow(arg, params.unit_rank_r - params.subfield_rank_rho);
}

int unit_rank(int r1, int r2, int degree) {
  if (r1 < 0 || r2 < 0 || r1 + r2 < 1) throw InvalidArgument("inconsistent signature");
  if (degree >= 0 && r1 + 2 * r2 != degree)
    throw InvalidArgument("signature (" + std::to_string(r1) + "," + std::to_string(r2) + ") does not match degree " +
                          std::to_string(degree));
  return r1 + r2 - 1;
}

}  // namespace systolab::geometry
