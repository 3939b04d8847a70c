#include "systolab/realroots.hpp"

#include <algorithm>
#include <utility>

#include "systolab/error.hpp"

namespace systolab::numfield {

namespace {

int variations(const std::vector<QPoly>& seq, const mpq_class& x) {
  int count = 0;
  int last = 0;
  for (const auto& p : seq) {
    int s = p.sign_at(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

// Cauchy bound: every root satisfies |x| < 1 + max |a_k / a_n|.
mpq_class root_bound(const IntPoly& f) {
  mpq_class best = 0;
  for (int k = 0; k < f.degree(); ++k) {
    mpq_class r(abs(f.coeff(k)), abs(f.leading()));
    if (r > best) best = r;
  }
  return best + 1;
}

mpq_class pow2_neg(int bits) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  return mpq_class(mpz_class(1), den);
}

void isolate(const std::vector<QPoly>& seq, const QPoly& f, const mpq_class& a, const mpq_class& b,
             int roots, std::vector<RationalInterval>& out) {
  if (roots == 0) return;
  if (roots == 1) {
    out.push_back({a, b});
    return;
  }
  mpq_class mid = (a + b) / 2;
  int left = sturm_count(seq, a, mid);
  isolate(seq, f, a, mid, left, out);
  isolate(seq, f, mid, b, roots - left, out);
}

// Shrinks (lo, hi] containing exactly one simple root to width <= target.
RationalInterval shrink(const QPoly& f, RationalInterval iv, const mpq_class& target) {
  if (iv.is_exact()) return iv;
  if (f.sign_at(iv.hi) == 0) return {iv.hi, iv.hi};
  int s_hi = f.sign_at(iv.hi);
  while (iv.width() > target) {
    mpq_class mid = (iv.lo + iv.hi) / 2;
    int s = f.sign_at(mid);
    if (s == 0) return {mid, mid};
    if (s == s_hi) {
      iv.hi = mid;
    } else {
      iv.lo = mid;
    }
  }
  return iv;
}

void check_precision(int precision_bits, const PrecisionConfig& config) {
  if (precision_bits < 32) throw InvalidArgument("precision_bits must be >= 32");
  if (precision_bits > config.max_bits)
    throw PrecisionExhausted("requested " + std::to_string(precision_bits) +
                             " bits exceeds configured maximum " + std::to_string(config.max_bits));
}

}  // namespace

Interval RealRootIsolation::enclosure(size_t i, mpfr_prec_t prec) const {
  const auto& iv = intervals.at(i);
  return Interval::from_rationals(iv.lo, iv.hi, prec);
}

std::vector<QPoly> sturm_sequence(const IntPoly& f) {
  std::vector<QPoly> seq;
  seq.push_back(f.to_rational());
  seq.push_back(seq.back().derivative());
  while (!seq.back().is_zero() && seq.back().degree() > 0) {
    QPoly r = divmod(seq[seq.size() - 2], seq.back()).remainder;
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  return seq;
}

int sturm_count(const std::vector<QPoly>& sequence, const mpq_class& a, const mpq_class& b) {
  return variations(sequence, a) - variations(sequence, b);
}

RealRootIsolation sturm_real_roots(const IntPoly& f, int precision_bits,
                                   const PrecisionConfig& config) {
  check_precision(precision_bits, config);
  if (!is_squarefree(f)) throw NotSquarefree("polynomial " + f.to_string() + " is not squarefree");

  auto seq = sturm_sequence(f);
  mpq_class bound = root_bound(f);
  int total = sturm_count(seq, -bound, bound);

  std::vector<RationalInterval> raw;
  isolate(seq, seq.front(), -bound, bound, total, raw);

  RealRootIsolation iso;
  iso.precision_bits = precision_bits;
  mpq_class target = pow2_neg(precision_bits);
  for (auto& iv : raw) iso.intervals.push_back(shrink(seq.front(), iv, target));
  return iso;
}

RealRootIsolation refine(const IntPoly& f, const RealRootIsolation& iso, int precision_bits,
                         const PrecisionConfig& config) {
  check_precision(precision_bits, config);
  if (precision_bits <= iso.precision_bits) return iso;
  QPoly q = f.to_rational();
  mpq_class target = pow2_neg(precision_bits);
  RealRootIsolation out;
  out.precision_bits = precision_bits;
  for (const auto& iv : iso.intervals) out.intervals.push_back(shrink(q, iv, target));
  return out;
}

Signature signature_of(const IntPoly& f) {
  auto seq = sturm_sequence(f);
  mpq_class bound = root_bound(f);
  int r1 = sturm_count(seq, -bound, bound);
  return {r1, (f.degree() - r1) / 2};
}

}  // namespace systolab::numfield
