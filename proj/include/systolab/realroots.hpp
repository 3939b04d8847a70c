#pragma once

#include <gmpxx.h>

#include <vector>

#include "systolab/interval.hpp"
#include "systolab/poly.hpp"

namespace systolab::numfield {

/// Shared read-only precision policy. Adaptive callers start at
/// `default_bits` and double up to `max_bits`.
struct PrecisionConfig {
  int default_bits = 128;
  int max_bits = 8192;
};

/// Exact rational interval [lo, hi]; lo == hi means the root is rational.
struct RationalInterval {
  mpq_class lo;
  mpq_class hi;

  bool is_exact() const { return lo == hi; }
  mpq_class width() const { return hi - lo; }
};

struct RealRootIsolation {
  std::vector<RationalInterval> intervals;  // sorted, pairwise disjoint
  int precision_bits = 0;                   // each width <= 2^-precision_bits

  size_t count() const { return intervals.size(); }
  /// Enclosure of root `i` at MPFR precision `prec`.
  Interval enclosure(size_t i, mpfr_prec_t prec) const;
};

/// Number of distinct real roots in the half-open interval (a, b].
int sturm_count(const std::vector<QPoly>& sequence, const mpq_class& a, const mpq_class& b);
std::vector<QPoly> sturm_sequence(const IntPoly& f);

/// Certified isolation of every real root of a squarefree `f`, each interval
/// refined to width <= 2^-precision_bits.
RealRootIsolation sturm_real_roots(const IntPoly& f, int precision_bits,
                                   const PrecisionConfig& config = {});

/// Refines an existing isolation of `f` to a finer width.
RealRootIsolation refine(const IntPoly& f, const RealRootIsolation& iso, int precision_bits,
                         const PrecisionConfig& config = {});

/// Signature (r1 real embeddings, r2 complex pairs) of a squarefree polynomial.
struct Signature {
  int r1 = 0;
  int r2 = 0;
  int degree() const { return r1 + 2 * r2; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature signature_of(const IntPoly& f);

}  // namespace systolab::numfield
