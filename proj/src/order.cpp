#include "systolab/order.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>

#include "systolab/error.hpp"
#include "systolab/realroots.hpp"

namespace systolab::numfield {

QVec multiply_mod_poly(const QVec& a, const QVec& b, const IntPoly& f) {
  const size_t n = static_cast<size_t>(f.degree());
  QVec prod(2 * n, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) prod[i + j] += a[i] * b[j];
  }
  for (size_t k = prod.size(); k-- > n;) {
    if (prod[k] == 0) continue;
    mpq_class c = prod[k];
    for (size_t j = 0; j < n; ++j) prod[k - n + j] -= c * mpq_class(f.coeff(static_cast<int>(j)));
    prod[k] = 0;
  }
  prod.resize(n);
  return prod;
}

namespace {

QMatrix canonical_basis(const QMatrix& w) {
  ScaledMatrix s = clear_denominators(w);
  ZMatrix h = hnf_lower(std::move(s.numerators));
  QMatrix out;
  for (const auto& row : h) {
    QVec r;
    for (const auto& x : row) {
      mpq_class q(x, s.denominator);
      q.canonicalize();
      r.push_back(q);
    }
    out.push_back(std::move(r));
  }
  return out;
}

ZVec unit_vector(int n, int i) {
  ZVec e(static_cast<size_t>(n), 0);
  e[static_cast<size_t>(i)] = 1;
  return e;
}

ZVec power_mod(const NumberFieldOrder& order, const ZVec& a, const mpz_class& e, const mpz_class& m) {
  ZVec result = order.one();
  ZVec base = a;
  for (auto& x : base) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t b = bits; b-- > 0;) {
    result = order.multiply_mod(result, result, m);
    if (mpz_tstbit(e.get_mpz_t(), b)) result = order.multiply_mod(result, base, m);
  }
  return result;
}

// --- polynomials over F_p, coefficients low-to-high in [0, p) --------------

struct FpPoly {
  std::vector<mpz_class> c;
  const mpz_class* p;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool zero() const { return c.empty(); }
  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
};

FpPoly fp_make(std::vector<mpz_class> c, const mpz_class& p) {
  for (auto& x : c) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
  FpPoly r{std::move(c), &p};
  r.trim();
  return r;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b) {
  if (a.zero() || b.zero()) return {{}, a.p};
  std::vector<mpz_class> c(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
  return fp_make(std::move(c), *a.p);
}

std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b) {
  const mpz_class& p = *a.p;
  if (b.zero()) throw DomainError("F_p polynomial division by zero");
  if (a.degree() < b.degree()) return {{{}, a.p}, a};
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), b.c.back().get_mpz_t(), p.get_mpz_t());
  std::vector<mpz_class> rem = a.c;
  std::vector<mpz_class> quo(static_cast<size_t>(a.degree() - b.degree()) + 1, 0);
  for (int k = a.degree(); k >= b.degree(); --k) {
    mpz_class coef = rem[static_cast<size_t>(k)] * inv;
    mpz_mod(coef.get_mpz_t(), coef.get_mpz_t(), p.get_mpz_t());
    quo[static_cast<size_t>(k - b.degree())] = coef;
    for (int j = 0; j <= b.degree(); ++j) {
      auto& r = rem[static_cast<size_t>(k - b.degree() + j)];
      r -= coef * b.c[static_cast<size_t>(j)];
      mpz_mod(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
    }
  }
  rem.resize(static_cast<size_t>(b.degree()));
  return {fp_make(std::move(quo), p), fp_make(std::move(rem), p)};
}

FpPoly fp_monic(FpPoly a) {
  if (a.zero()) return a;
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), a.c.back().get_mpz_t(), a.p->get_mpz_t());
  for (auto& x : a.c) {
    x *= inv;
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), a.p->get_mpz_t());
  }
  return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b) {
  while (!b.zero()) {
    FpPoly r = fp_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(std::move(a));
}

FpPoly fp_derivative(const FpPoly& a) {
  std::vector<mpz_class> d;
  for (size_t k = 1; k < a.c.size(); ++k) d.push_back(a.c[k] * static_cast<unsigned long>(k));
  return fp_make(std::move(d), *a.p);
}

// Product of the distinct monic irreducible factors of a (a != 0).
FpPoly fp_radical(const FpPoly& a) {
  const mpz_class& p = *a.p;
  if (a.degree() <= 0) return {{mpz_class(1)}, a.p};
  FpPoly d = fp_derivative(a);
  if (d.zero()) {
    // a(x) = b(x^p) = b(x)^p over F_p.
    unsigned long step = mpz_get_ui(p.get_mpz_t());
    std::vector<mpz_class> root;
    for (size_t k = 0; k < a.c.size(); k += step) root.push_back(a.c[k]);
    return fp_radical(fp_make(std::move(root), p));
  }
  FpPoly g = fp_gcd(a, d);
  FpPoly w = fp_monic(fp_divmod(a, g).first);  // squarefree part with p-coprime multiplicities
  FpPoly rg = fp_radical(g);
  FpPoly common = fp_gcd(w, rg);
  return fp_monic(fp_divmod(fp_mul(w, rg), common).first);
}

}  // namespace

// ---------------------------------------------------------------------------

NumberFieldOrder::NumberFieldOrder(IntPoly poly, QMatrix basis)
    : poly_(std::move(poly)), basis_(std::move(basis)) {
  const int n = poly_.degree();
  if (!poly_.is_monic()) throw InvalidArgument("order construction requires a monic polynomial");
  if (n < 2) throw InvalidArgument("order construction requires degree >= 2");
  if (basis_.size() != static_cast<size_t>(n)) throw InvalidArgument("basis must be n x n");
  for (const auto& row : basis_)
    if (row.size() != static_cast<size_t>(n)) throw InvalidArgument("basis must be n x n");
  basis_inverse_ = inverse(basis_);

  table_.assign(static_cast<size_t>(n * n * n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      QVec prod = multiply_mod_poly(basis_[static_cast<size_t>(i)], basis_[static_cast<size_t>(j)], poly_);
      QVec coords = systolab::multiply(prod, basis_inverse_);
      for (int k = 0; k < n; ++k) {
        const mpq_class& c = coords[static_cast<size_t>(k)];
        if (c.get_den() != 1) throw InvalidArgument("basis does not span a ring");
        table_[static_cast<size_t>((i * n + j) * n + k)] = c.get_num();
        table_[static_cast<size_t>((j * n + i) * n + k)] = c.get_num();
      }
    }
  }

  mpq_class inv_index = abs(systolab::determinant(basis_));
  if (inv_index.get_num() != 1) throw InvalidArgument("basis does not contain Z[theta] with integral index");
  index_ = inv_index.get_den();
  disc_poly_ = poly_discriminant(poly_);
  mpz_class sq = index_ * index_;
  if (!mpz_divisible_p(disc_poly_.get_mpz_t(), sq.get_mpz_t()))
    throw InvalidArgument("index^2 does not divide the polynomial discriminant");
  disc_ = disc_poly_ / sq;
}

void NumberFieldOrder::set_certification(bool certified, std::vector<mpz_class> unfactored) {
  certified_ = certified;
  unfactored_ = std::move(unfactored);
}

ZVec NumberFieldOrder::one() const {
  QVec unit(static_cast<size_t>(degree()), 0);
  unit[0] = 1;
  auto coords = from_power_basis(unit);
  return *coords;
}

ZVec NumberFieldOrder::multiply(const ZVec& a, const ZVec& b) const {
  const int n = degree();
  ZVec c(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    if (a[static_cast<size_t>(i)] == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (b[static_cast<size_t>(j)] == 0) continue;
      mpz_class ab = a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
      for (int k = 0; k < n; ++k) {
        const mpz_class& t = structure(i, j, k);
        if (t != 0) c[static_cast<size_t>(k)] += ab * t;
      }
    }
  }
  return c;
}

ZVec NumberFieldOrder::multiply_mod(const ZVec& a, const ZVec& b, const mpz_class& m) const {
  ZVec c = multiply(a, b);
  for (auto& x : c) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return c;
}

ZVec NumberFieldOrder::power(const ZVec& a, long exponent) const {
  ZVec base = exponent < 0 ? inverse_unit(a) : a;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
  ZVec result = one();
  while (e) {
    if (e & 1) result = multiply(result, base);
    e >>= 1;
    if (e) base = multiply(base, base);
  }
  return result;
}

ZMatrix NumberFieldOrder::multiplication_matrix(const ZVec& a) const {
  const int n = degree();
  ZMatrix m(static_cast<size_t>(n), ZVec(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (a[static_cast<size_t>(j)] == 0) continue;
      for (int k = 0; k < n; ++k) m[static_cast<size_t>(i)][static_cast<size_t>(k)] += a[static_cast<size_t>(j)] * structure(j, i, k);
    }
  return m;
}

mpz_class NumberFieldOrder::norm(const ZVec& a) const { return determinant(multiplication_matrix(a)); }

mpz_class NumberFieldOrder::trace(const ZVec& a) const {
  ZMatrix m = multiplication_matrix(a);
  mpz_class t = 0;
  for (size_t i = 0; i < m.size(); ++i) t += m[i][i];
  return t;
}

bool NumberFieldOrder::is_unit(const ZVec& a) const { return abs(norm(a)) == 1; }

ZVec NumberFieldOrder::inverse_unit(const ZVec& u) const {
  if (!is_unit(u)) throw InvalidArgument("element is not a unit of the order");
  QMatrix inv = inverse(to_rational(multiplication_matrix(u)));
  QVec e(static_cast<size_t>(degree()), 0);
  ZVec o = one();
  for (size_t i = 0; i < o.size(); ++i) e[i] = o[i];
  QVec x = systolab::multiply(e, inv);
  ZVec out;
  for (const auto& v : x) out.push_back(v.get_num());
  return out;
}

QVec NumberFieldOrder::to_power_basis(const ZVec& a) const {
  QVec row(a.begin(), a.end());
  return systolab::multiply(row, basis_);
}

std::optional<ZVec> NumberFieldOrder::from_power_basis(const QVec& a) const {
  QVec c = systolab::multiply(a, basis_inverse_);
  ZVec out;
  for (const auto& x : c) {
    if (x.get_den() != 1) return std::nullopt;
    out.push_back(x.get_num());
  }
  return out;
}

// ---------------------------------------------------------------------------

NumberFieldOrder equation_order(const IntPoly& f) {
  const size_t n = static_cast<size_t>(f.degree());
  QMatrix id(n, QVec(n, 0));
  for (size_t i = 0; i < n; ++i) id[i][i] = 1;
  return NumberFieldOrder(f, std::move(id));
}

bool dedekind_p_maximal(const IntPoly& f, const mpz_class& p) {
  FpPoly fbar = fp_make(f.coeffs(), p);
  FpPoly g = fp_radical(fbar);
  FpPoly h = fp_divmod(fbar, g).first;
  // F = (f - g h) / p with g, h lifted to [0, p).
  FpPoly gh_int{{}, &p};
  std::vector<mpz_class> prod(g.c.size() + h.c.size() - 1, 0);
  for (size_t i = 0; i < g.c.size(); ++i)
    for (size_t j = 0; j < h.c.size(); ++j) prod[i + j] += g.c[i] * h.c[j];
  std::vector<mpz_class> big(std::max(prod.size(), f.coeffs().size()), 0);
  for (size_t k = 0; k < f.coeffs().size(); ++k) big[k] += f.coeffs()[k];
  for (size_t k = 0; k < prod.size(); ++k) big[k] -= prod[k];
  for (auto& x : big) {
    if (!mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t())) throw Error("Dedekind: f - gh not divisible by p");
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
  }
  FpPoly F = fp_make(std::move(big), p);
  FpPoly d = fp_gcd(fp_gcd(F, g), h);
  return d.degree() == 0;
}

std::optional<NumberFieldOrder> enlarge_at(const NumberFieldOrder& order, const mpz_class& p) {
  const int n = order.degree();
  mpz_class q = p;
  while (q < n) q *= p;

  // p-radical: kernel of Frobenius x -> x^q on O/pO, plus pO.
  ZMatrix frob;
  for (int i = 0; i < n; ++i) frob.push_back(power_mod(order, unit_vector(n, i), q, p));
  ZMatrix gens = left_kernel_mod(frob, p);
  for (int i = 0; i < n; ++i) {
    ZVec e = unit_vector(n, i);
    e[static_cast<size_t>(i)] = p;
    gens.push_back(std::move(e));
  }
  ZMatrix ideal = hnf_lower(std::move(gens));
  QMatrix ideal_inv = inverse(to_rational(ideal));

  // U/pO = kernel of x -> (x * ideal_k mod p * ideal)_k.
  ZMatrix action(static_cast<size_t>(n), ZVec(static_cast<size_t>(n * n), 0));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      ZVec prod = order.multiply(unit_vector(n, i), ideal[static_cast<size_t>(k)]);
      QVec coords = multiply(QVec(prod.begin(), prod.end()), ideal_inv);
      for (int l = 0; l < n; ++l) {
        const mpq_class& c = coords[static_cast<size_t>(l)];
        if (c.get_den() != 1) throw Error("p-radical is not an ideal");
        mpz_class r;
        mpz_mod(r.get_mpz_t(), c.get_num_mpz_t(), p.get_mpz_t());
        action[static_cast<size_t>(i)][static_cast<size_t>(k * n + l)] = r;
      }
    }
  }
  ZMatrix mult = left_kernel_mod(action, p);
  if (mult.empty()) return std::nullopt;
  for (int i = 0; i < n; ++i) {
    ZVec e = unit_vector(n, i);
    e[static_cast<size_t>(i)] = p;
    mult.push_back(std::move(e));
  }
  ZMatrix h = hnf_lower(std::move(mult));
  QMatrix scaled = to_rational(h);
  for (auto& row : scaled)
    for (auto& x : row) {
      x /= p;
      x.canonicalize();
    }
  QMatrix new_basis = canonical_basis(multiply(scaled, order.basis()));
  return NumberFieldOrder(order.poly(), std::move(new_basis));
}

bool is_irreducible(const IntPoly& f) {
  const int n = f.degree();
  if (n == 1) return true;
  if (n > 4) throw Unsupported("irreducibility test supports degree <= 4");
  if (f.coeff(0) == 0) return false;
  if (n == 2) {
    mpz_class d = f.coeff(1) * f.coeff(1) - 4 * f.coeff(2) * f.coeff(0);
    return d < 0 || !mpz_perfect_square_p(d.get_mpz_t());
  }
  if (!is_squarefree(f)) return false;
  // Rational roots of a monic integer polynomial are integers.
  RealRootIsolation iso = sturm_real_roots(f, 32);
  for (const auto& iv : iso.intervals) {
    mpz_class lo, hi;
    mpz_fdiv_q(lo.get_mpz_t(), iv.lo.get_num_mpz_t(), iv.lo.get_den_mpz_t());
    mpz_cdiv_q(hi.get_mpz_t(), iv.hi.get_num_mpz_t(), iv.hi.get_den_mpz_t());
    for (mpz_class x = lo; x <= hi; ++x)
      if (f.eval(x) == 0) return false;
  }
  if (n == 3) return true;

  // Quartic: look for a monic quadratic factor among pairs of numerical roots.
  using cld = std::complex<long double>;
  std::vector<long double> c(5);
  for (int k = 0; k <= 4; ++k) c[static_cast<size_t>(k)] = f.coeff(k).get_d();
  std::vector<cld> roots = {cld(0.4L, 0.9L), cld(-0.6L, 0.3L), cld(0.2L, -0.7L), cld(-0.5L, -0.5L)};
  auto eval = [&](cld x) {
    cld acc = 0;
    for (int k = 4; k >= 0; --k) acc = acc * x + c[static_cast<size_t>(k)];
    return acc;
  };
  for (int iter = 0; iter < 2000; ++iter) {
    for (size_t i = 0; i < 4; ++i) {
      cld den = 1;
      for (size_t j = 0; j < 4; ++j)
        if (j != i) den *= roots[i] - roots[j];
      roots[i] -= eval(roots[i]) / den;
    }
  }
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = i + 1; j < 4; ++j) {
      cld s = roots[i] + roots[j];
      cld t = roots[i] * roots[j];
      mpz_class sb(static_cast<double>(std::round(s.real())));
      mpz_class tb(static_cast<double>(std::round(t.real())));
      QPoly g(std::vector<mpq_class>{mpq_class(tb), mpq_class(-sb), mpq_class(1)});
      if (divmod(f.to_rational(), g).remainder.is_zero()) return false;
    }
  return true;
}

NumberFieldOrder maximal_order(const IntPoly& f, const MaximalOrderOptions& options) {
  if (!f.is_monic()) throw InvalidArgument("maximal_order requires a monic polynomial");
  if (f.degree() < 2 || f.degree() > 4) throw Unsupported("maximal_order supports degree 2..4");
  if (!is_irreducible(f)) throw NotIrreducible(f.to_string() + " is reducible over Q");

  NumberFieldOrder order = equation_order(f);
  Factorization fac = factorize(order.disc_poly(), options.factor);
  for (const auto& pp : fac.factors) {
    if (pp.exponent < 2) continue;
    if (dedekind_p_maximal(f, pp.prime)) continue;
    while (auto bigger = enlarge_at(order, pp.prime)) order = std::move(*bigger);
  }
  order.set_certification(fac.complete(), fac.unfactored);
  return order;
}

}  // namespace systolab::numfield
