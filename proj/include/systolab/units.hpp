#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "systolab/interval.hpp"
#include "systolab/order.hpp"
#include "systolab/realroots.hpp"

namespace systolab::numfield {

struct UnitSearchOptions {
  int max_rounds = 14;                   // T2 bound is multiplied by 4 per round
  std::uint64_t max_points = 4000000;    // lattice points visited per round
  int max_saturation_prime = 400;        // index bounds above this are inconclusive
  int heuristic_saturation_prime = 7;    // used when no index bound is available
  PrecisionConfig precision;
};

/// Independent units of an order with their certified log embedding.
///
/// log_matrix has one row per archimedean place (real places first, complex
/// places carry multiplicity 2) and one column per unit. Units are integer
/// coordinate vectors in the order basis, normalized to norm +1 in odd
/// degree and to a positive first real embedding otherwise.
struct UnitSystem {
  NumberFieldOrder order;
  Signature signature;
  std::vector<ZVec> units;
  std::vector<std::vector<Interval>> log_matrix;
  Interval regulator;
  bool certified = false;
  int precision_bits = 0;

  int rank() const { return signature.r1 + signature.r2 - 1; }
};

enum class CertificationStatus { Certified, NotSaturated, Inconclusive };

struct CertificationReport {
  CertificationStatus status = CertificationStatus::Inconclusive;
  double lower_bound = 0.0;         // R_lower at the field discriminant
  std::uint64_t index_bound = 0;    // m with [U : <units>] <= m
  std::vector<int> primes_tested;
  std::optional<int> failing_prime;  // a q at which a q-th root exists
  std::string reason;

  bool certified() const { return status == CertificationStatus::Certified; }
};

/// Default lower-bound constant c for R_lower = c * shape(D):
/// (3,0): shape log^2(D/4), c = 1/16; (1,1): shape log((|D|-24)/4), c = 1/3;
/// (2,0): shape log((sqrt(D-4)+sqrt(D))/2), c = 1.
double default_lower_bound_constant(const Signature& sig);
/// c * shape(D); values <= 0 mean the bound is unusable.
double regulator_lower_bound(const Signature& sig, const mpz_class& disc_field, double c);

/// Certified log|sigma_i(u)| table, multiplicity folded in for complex places.
std::vector<std::vector<Interval>> log_embedding(const NumberFieldOrder& order,
                                                 const std::vector<ZVec>& units,
                                                 mpfr_prec_t prec);

/// |det| of the log matrix with row `deleted_row` removed (-1: last row).
/// Throws SingularMatrix when the enclosure contains zero and RankDeficient
/// when the unit count is not the Dirichlet rank.
Interval regulator(const NumberFieldOrder& order, const std::vector<ZVec>& units,
                   int deleted_row = -1, const PrecisionConfig& config = {});
Interval regulator(const UnitSystem& us, int deleted_row = -1);

/// Searches, reduces and saturates a unit system. Supported signatures are
/// (3,0), (1,1), (2,0) and the rank-0 cases.
UnitSystem unit_group(const NumberFieldOrder& order, int precision_bits,
                      const UnitSearchOptions& options = {});

/// If some +-prod u_i^{a_i} with a != 0 mod q is a q-th power in the order,
/// returns the position to replace and the root; the replacement lowers the
/// regulator by the factor q.
std::optional<std::pair<size_t, ZVec>> find_qth_root(const NumberFieldOrder& order,
                                                     const std::vector<ZVec>& units, int q,
                                                     mpfr_prec_t prec = 256);

/// Index-bound test with R_lower = c * shape(disc_field); requires an order
/// certified maximal, otherwise Inconclusive.
CertificationReport certify_fundamental(const UnitSystem& us, double lower_bound_constant,
                                        int max_saturation_prime = 400);

/// [Z^rank : {v : prod u_i^{v_i} = 1 in (O/pO)^x}]. Requires p prime, p < 2^31
/// and p not dividing order.index(); throws BadPrime otherwise.
mpz_class unit_index_mod_p(const NumberFieldOrder& order, const std::vector<ZVec>& units,
                           const mpz_class& p);
mpz_class unit_index_mod_p(const UnitSystem& us, const mpz_class& p);

/// [<units> : <units> intersected with the suborder], units given in `big`
/// coordinates and `small` a suborder of `big` over the same polynomial.
/// Throws BudgetExhausted when the index exceeds `cap`.
std::uint64_t suborder_unit_index(const NumberFieldOrder& big, const NumberFieldOrder& small,
                                  const std::vector<ZVec>& units, std::uint64_t cap = 1000000);

}  // namespace systolab::numfield
