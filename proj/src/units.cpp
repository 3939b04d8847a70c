#include "systolab/units.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>
#include <utility>

#include "systolab/error.hpp"
#include "systolab/factor.hpp"

namespace systolab::numfield {

namespace {

using ld = long double;

// ---------------------------------------------------------------------------
// Multiprecision places of the field.

struct Cx {
  BigFloat re;
  BigFloat im;
};

Cx cmul(const Cx& a, const Cx& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

Cx cpow(Cx base, unsigned long e, mpfr_prec_t prec) {
  Cx r{BigFloat(1.0, prec), BigFloat(0.0, prec)};
  while (e) {
    if (e & 1) r = cmul(r, base);
    e >>= 1;
    if (e) base = cmul(base, base);
  }
  return r;
}

BigFloat bf_pow(const BigFloat& a, unsigned long e) {
  BigFloat r(a.precision());
  mpfr_pow_ui(r.get(), a.get(), e, MPFR_RNDN);
  return r;
}

BigFloat bf_root(const BigFloat& a, unsigned long q) {
  BigFloat r(a.precision());
  mpfr_rootn_ui(r.get(), a.get(), q, MPFR_RNDN);
  return r;
}

struct Places {
  Signature sig;
  std::vector<BigFloat> real;  // one per real place, increasing
  std::vector<Cx> complex;     // one per complex place, im > 0
  mpfr_prec_t prec = 0;
};

void require_supported(const Signature& sig) {
  if (sig.r2 > 1 || sig.degree() > 3)
    throw Unsupported("unit computations support signatures (3,0), (1,1), (2,0), (0,1)");
}

Places numeric_places(const IntPoly& f, mpfr_prec_t prec) {
  Places pl;
  pl.prec = prec;
  RealRootIsolation iso = sturm_real_roots(f, static_cast<int>(prec) + 16);
  for (const auto& iv : iso.intervals) {
    mpq_class m = (iv.lo + iv.hi) / 2;
    pl.real.emplace_back(m, prec);
  }
  pl.sig = {static_cast<int>(iso.count()), (f.degree() - static_cast<int>(iso.count())) / 2};
  require_supported(pl.sig);
  if (pl.sig.r2 == 1) {
    // Deflate the real roots; the remaining monic quadratic holds the pair.
    std::vector<BigFloat> c;
    for (const auto& a : f.coeffs()) c.emplace_back(mpq_class(a), prec);
    for (const auto& r : pl.real) {
      std::vector<BigFloat> q(c.size() - 1, BigFloat(prec));
      BigFloat acc = c.back();
      for (size_t k = c.size() - 1; k-- > 0;) {
        q[k] = acc;
        acc = c[k] + acc * r;
      }
      c = std::move(q);
    }
    BigFloat half(0.5, prec);
    BigFloat re = -(c[1] * half);
    BigFloat im = sqrt(c[0] - re * re);
    pl.complex.push_back({re, im});
  }
  return pl;
}

BigFloat eval_real(const QVec& coeffs, const BigFloat& x) {
  BigFloat acc(0.0, x.precision());
  for (size_t k = coeffs.size(); k-- > 0;) acc = acc * x + BigFloat(coeffs[k], x.precision());
  return acc;
}

Cx eval_complex(const QVec& coeffs, const Cx& z) {
  mpfr_prec_t prec = z.re.precision();
  Cx acc{BigFloat(0.0, prec), BigFloat(0.0, prec)};
  for (size_t k = coeffs.size(); k-- > 0;) {
    acc = cmul(acc, z);
    acc.re = acc.re + BigFloat(coeffs[k], prec);
  }
  return acc;
}

// Place vector (real values, then re/im per complex place) of an element.
std::vector<BigFloat> place_vector(const NumberFieldOrder& order, const ZVec& x, const Places& pl) {
  QVec pb = order.to_power_basis(x);
  std::vector<BigFloat> out;
  for (const auto& r : pl.real) out.push_back(eval_real(pb, r));
  for (const auto& z : pl.complex) {
    Cx v = eval_complex(pb, z);
    out.push_back(v.re);
    out.push_back(v.im);
  }
  return out;
}

ZVec unit_vec(int n, int i) {
  ZVec e(static_cast<size_t>(n), 0);
  e[static_cast<size_t>(i)] = 1;
  return e;
}

// ---------------------------------------------------------------------------
// Lattice reduction and enumeration in the Minkowski embedding.

using RealMatrix = std::vector<std::vector<ld>>;
using IntMatrix = std::vector<std::vector<long long>>;

ld dot(const std::vector<ld>& a, const std::vector<ld>& b) {
  ld s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// LLL with delta = 0.99 on the rows of b; t tracks the unimodular transform.
void lll(RealMatrix& b, IntMatrix& t) {
  const size_t n = b.size();
  t.assign(n, std::vector<long long>(n, 0));
  for (size_t i = 0; i < n; ++i) t[i][i] = 1;
  auto gso = [&](RealMatrix& bs, RealMatrix& mu, std::vector<ld>& nrm) {
    bs = b;
    mu.assign(n, std::vector<ld>(n, 0));
    nrm.assign(n, 0);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < i; ++j) {
        mu[i][j] = dot(b[i], bs[j]) / nrm[j];
        for (size_t k = 0; k < bs[i].size(); ++k) bs[i][k] -= mu[i][j] * bs[j][k];
      }
      nrm[i] = dot(bs[i], bs[i]);
    }
  };
  RealMatrix bs, mu;
  std::vector<ld> nrm;
  gso(bs, mu, nrm);
  size_t k = 1;
  int guard = 0;
  while (k < n && guard++ < 100000) {
    for (size_t j = k; j-- > 0;) {
      ld q = std::round(mu[k][j]);
      if (q == 0) continue;
      auto qi = static_cast<long long>(q);
      for (size_t c = 0; c < b[k].size(); ++c) b[k][c] -= q * b[j][c];
      for (size_t c = 0; c < n; ++c) t[k][c] -= qi * t[j][c];
      gso(bs, mu, nrm);
    }
    if (nrm[k] >= (0.99L - mu[k][k - 1] * mu[k][k - 1]) * nrm[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      std::swap(t[k], t[k - 1]);
      gso(bs, mu, nrm);
      k = std::max<size_t>(k - 1, 1);
    }
  }
}

struct Candidate {
  ZVec coords;
  std::vector<ld> logs;  // per place, multiplicity folded in
  ld t2 = 0;
};

ld log_norm(const Candidate& c) { return std::sqrt(dot(c.logs, c.logs)); }

// Enumerates lattice points with T2 <= bound and keeps the units.
std::vector<Candidate> enumerate_units(const NumberFieldOrder& order, const Places& pl, ld bound,
                                       std::uint64_t max_points, bool& exhausted) {
  const int n = order.degree();
  const int r1 = pl.sig.r1;
  RealMatrix b;
  for (int i = 0; i < n; ++i) {
    auto v = place_vector(order, unit_vec(n, i), pl);
    std::vector<ld> row;
    for (int j = 0; j < r1; ++j) row.push_back(v[static_cast<size_t>(j)].to_long_double());
    for (size_t j = static_cast<size_t>(r1); j < v.size(); ++j)
      row.push_back(v[j].to_long_double() * std::sqrt(2.0L));
    b.push_back(std::move(row));
  }
  IntMatrix t;
  lll(b, t);

  // Gram matrix and its quadratic-completion form.
  RealMatrix q(static_cast<size_t>(n), std::vector<ld>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q[i][j] = dot(b[static_cast<size_t>(i)], b[static_cast<size_t>(j)]);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (int k = i + 1; k < n; ++k)
      for (int l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
  }

  std::vector<Candidate> found;
  std::vector<long long> x(static_cast<size_t>(n), 0);
  std::uint64_t visited = 0;
  exhausted = false;

  std::function<void(int, ld)> rec = [&](int i, ld remaining) {
    if (exhausted) return;
    ld center = 0;
    for (int j = i + 1; j < n; ++j) center -= q[i][j] * static_cast<ld>(x[static_cast<size_t>(j)]);
    ld radius = std::sqrt(std::max<ld>(remaining, 0) / q[i][i]);
    auto lo = static_cast<long long>(std::ceil(center - radius - 1e-9L));
    auto hi = static_cast<long long>(std::floor(center + radius + 1e-9L));
    for (long long v = lo; v <= hi; ++v) {
      if (++visited > max_points) {
        exhausted = true;
        return;
      }
      ld d = static_cast<ld>(v) - center;
      ld rem = remaining - q[i][i] * d * d;
      if (rem < -1e-9L * bound) continue;
      x[static_cast<size_t>(i)] = v;
      if (i > 0) {
        rec(i - 1, rem);
        continue;
      }
      // Keep one of each +-x pair: the highest nonzero coordinate positive.
      int top = n - 1;
      while (top >= 0 && x[static_cast<size_t>(top)] == 0) --top;
      if (top < 0 || x[static_cast<size_t>(top)] < 0) continue;
      std::vector<ld> emb(b[0].size(), 0);
      for (int k = 0; k < n; ++k)
        for (size_t c = 0; c < emb.size(); ++c) emb[c] += static_cast<ld>(x[static_cast<size_t>(k)]) * b[static_cast<size_t>(k)][c];
      ld norm = 1;
      std::vector<ld> logs;
      for (int j = 0; j < r1; ++j) {
        norm *= emb[static_cast<size_t>(j)];
        logs.push_back(std::log(std::fabs(emb[static_cast<size_t>(j)])));
      }
      for (size_t j = static_cast<size_t>(r1); j + 1 < emb.size(); j += 2) {
        ld m2 = (emb[j] * emb[j] + emb[j + 1] * emb[j + 1]) / 2;
        norm *= m2;
        logs.push_back(std::log(m2));
      }
      if (std::fabs(std::fabs(norm) - 1) > 0.25L) continue;
      ZVec coords(static_cast<size_t>(n), 0);
      for (int k = 0; k < n; ++k)
        for (int c = 0; c < n; ++c)
          coords[static_cast<size_t>(c)] += mpz_class(static_cast<long>(x[static_cast<size_t>(k)] * t[static_cast<size_t>(k)][static_cast<size_t>(c)]));
      if (!order.is_unit(coords)) continue;
      found.push_back({std::move(coords), std::move(logs), dot(emb, emb)});
    }
    x[static_cast<size_t>(i)] = 0;
  };
  rec(n - 1, bound);
  return found;
}

// ---------------------------------------------------------------------------
// Reduction of a set of units to a basis of the group they generate.

class UnitLattice {
 public:
  UnitLattice(const NumberFieldOrder& order, int rank) : order_(order), rank_(rank) {}

  Candidate product(const Candidate& a, const Candidate& b) const {
    Candidate c{order_.multiply(a.coords, b.coords), a.logs, 0};
    for (size_t i = 0; i < c.logs.size(); ++i) c.logs[i] += b.logs[i];
    return c;
  }

  Candidate power(const Candidate& a, long k) const {
    Candidate c{order_.power(a.coords, k), a.logs, 0};
    for (auto& l : c.logs) l *= static_cast<ld>(k);
    return c;
  }

  // Coordinates of u in the first `basis.size()` basis vectors, using the
  // truncated log vector; nullopt when u is independent of them.
  std::optional<std::vector<ld>> coordinates(const Candidate& u) const {
    if (basis_.size() == 1) {
      const auto& b = basis_[0].logs;
      ld bb = dot(b, b);
      ld x = dot(u.logs, b) / bb;
      std::vector<ld> resid = u.logs;
      for (size_t i = 0; i < resid.size(); ++i) resid[i] -= x * b[i];
      if (std::sqrt(dot(resid, resid)) > 1e-7L * (1 + log_norm(u))) return std::nullopt;
      return std::vector<ld>{x};
    }
    const auto& a = basis_[0].logs;
    const auto& b = basis_[1].logs;
    ld det = a[0] * b[1] - a[1] * b[0];
    ld x = (u.logs[0] * b[1] - u.logs[1] * b[0]) / det;
    ld y = (a[0] * u.logs[1] - a[1] * u.logs[0]) / det;
    return std::vector<ld>{x, y};
  }

  void insert_all(std::vector<Candidate> items) {
    std::deque<Candidate> pending(items.begin(), items.end());
    int guard = 0;
    while (!pending.empty()) {
      if (++guard > 100000) throw Error("unit lattice reduction did not terminate");
      Candidate u = std::move(pending.front());
      pending.pop_front();
      if (log_norm(u) < 1e-8L) continue;  // torsion
      if (basis_.empty()) {
        basis_.push_back(std::move(u));
        continue;
      }
      auto xs = coordinates(u);
      if (!xs) {
        basis_.push_back(std::move(u));
        continue;
      }
      std::vector<long> fl(xs->size());
      std::vector<ld> frac(xs->size());
      bool integral = true;
      for (size_t i = 0; i < xs->size(); ++i) {
        ld r = std::round((*xs)[i]);
        if (std::fabs((*xs)[i] - r) < 1e-6L) {
          fl[i] = static_cast<long>(r);
          frac[i] = 0;
        } else {
          fl[i] = static_cast<long>(std::floor((*xs)[i]));
          frac[i] = (*xs)[i] - static_cast<ld>(fl[i]);
          integral = false;
        }
      }
      if (integral) continue;
      Candidate v = u;
      for (size_t i = 0; i < fl.size(); ++i)
        if (fl[i] != 0) v = product(v, power(basis_[i], -fl[i]));
      size_t pos = 0;
      while (frac[pos] == 0) ++pos;
      pending.push_back(std::move(basis_[pos]));
      basis_[pos] = std::move(v);
    }
  }

  bool full() const { return static_cast<int>(basis_.size()) == rank_; }

  std::vector<Candidate> reduced() const {
    std::vector<Candidate> b = basis_;
    if (b.size() == 2) {
      // Lagrange reduction of the log vectors.
      for (int iter = 0; iter < 1000; ++iter) {
        if (dot(b[1].logs, b[1].logs) < dot(b[0].logs, b[0].logs)) std::swap(b[0], b[1]);
        ld k = std::round(dot(b[0].logs, b[1].logs) / dot(b[0].logs, b[0].logs));
        if (k == 0) break;
        b[1] = product(b[1], power(b[0], -static_cast<long>(k)));
      }
    }
    return b;
  }

 private:
  const NumberFieldOrder& order_;
  int rank_;
  std::vector<Candidate> basis_;
};

// ---------------------------------------------------------------------------
// Certified log matrix and regulator.

struct LogData {
  std::vector<std::vector<Interval>> matrix;
  Interval det;
  int bits = 0;
};

Interval eval_interval(const QVec& coeffs, const Interval& x) {
  mpfr_prec_t prec = x.precision();
  Interval acc = Interval::from_rational(coeffs.back(), prec);
  for (size_t k = coeffs.size() - 1; k-- > 0;) acc = acc * x + Interval::from_rational(coeffs[k], prec);
  return acc;
}

std::optional<std::vector<std::vector<Interval>>> try_log_matrix(const NumberFieldOrder& order,
                                                                 const std::vector<ZVec>& units,
                                                                 const Signature& sig,
                                                                 mpfr_prec_t prec) {
  RealRootIsolation iso = sturm_real_roots(order.poly(), static_cast<int>(prec));
  const size_t places = static_cast<size_t>(sig.r1 + sig.r2);
  std::vector<std::vector<Interval>> m(places);
  for (const auto& u : units) {
    QVec pb = order.to_power_basis(u);
    Interval sum = Interval::from_integer(0, prec);
    for (size_t i = 0; i < static_cast<size_t>(sig.r1); ++i) {
      Interval v = abs(eval_interval(pb, iso.enclosure(i, prec)));
      if (v.contains_zero()) return std::nullopt;
      Interval l = log(v);
      sum = sum + l;
      m[i].push_back(std::move(l));
    }
    // |N(u)| = 1 fixes the complex place: 2 log|sigma_c(u)| = -sum of real logs.
    if (sig.r2 == 1) m[places - 1].push_back(-sum);
  }
  return m;
}

Interval abs_det(const std::vector<std::vector<Interval>>& a) {
  const size_t r = a.size();
  if (r == 1) return abs(a[0][0]);
  if (r == 2) return abs(a[0][0] * a[1][1] - a[0][1] * a[1][0]);
  if (r == 3) {
    Interval d = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                 a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                 a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    return abs(d);
  }
  throw Unsupported("regulators of unit rank above 3");
}

void check_units(const NumberFieldOrder& order, const std::vector<ZVec>& units) {
  for (const auto& u : units) {
    if (u.size() != static_cast<size_t>(order.degree())) throw InvalidArgument("unit has wrong dimension");
    if (!order.is_unit(u)) throw InvalidArgument("element is not a unit of the order");
  }
}

LogData regulator_data(const NumberFieldOrder& order, const std::vector<ZVec>& units, int deleted_row,
                       const PrecisionConfig& config) {
  Signature sig = signature_of(order.poly());
  require_supported(sig);
  const int rank = sig.r1 + sig.r2 - 1;
  if (static_cast<int>(units.size()) != rank)
    throw RankDeficient("unit count " + std::to_string(units.size()) + " differs from the Dirichlet rank " +
                        std::to_string(rank));
  check_units(order, units);
  const int places = sig.r1 + sig.r2;
  if (deleted_row < 0) deleted_row = places - 1;
  if (deleted_row >= places) throw InvalidArgument("deleted row out of range");
  if (rank == 0) {
    return {std::vector<std::vector<Interval>>(static_cast<size_t>(places)),
            Interval::from_integer(1, config.default_bits), config.default_bits};
  }
  const double target = std::ldexp(1.0, -config.default_bits / 2);
  for (int bits = config.default_bits; bits <= config.max_bits; bits *= 2) {
    auto m = try_log_matrix(order, units, sig, bits);
    if (!m) continue;
    // Column sums over places must enclose zero.
    bool sums_ok = true;
    for (size_t j = 0; j < units.size(); ++j) {
      Interval s = Interval::from_integer(0, bits);
      for (const auto& row : *m) s = s + row[j];
      if (!s.contains_zero()) sums_ok = false;
    }
    std::vector<std::vector<Interval>> minor;
    for (int i = 0; i < places; ++i)
      if (i != deleted_row) minor.push_back((*m)[static_cast<size_t>(i)]);
    Interval det = abs_det(minor);
    if (det.contains_zero()) {
      if (det.hi().to_double() < std::ldexp(1.0, -bits / 2)) throw SingularMatrix("log matrix is singular: units are dependent");
      continue;
    }
    if (sums_ok && det.relative_width() <= target) return {std::move(*m), std::move(det), bits};
  }
  throw PrecisionExhausted("regulator not certified at " + std::to_string(config.max_bits) + " bits");
}

// ---------------------------------------------------------------------------

ZVec normalize_unit(const NumberFieldOrder& order, const ZVec& u, const Places& pl) {
  bool flip;
  if (order.degree() % 2 == 1) {
    flip = order.norm(u) < 0;
  } else {
    auto v = place_vector(order, u, pl);
    flip = v[0].sign() < 0;
  }
  if (!flip) return u;
  ZVec out = u;
  for (auto& x : out) x = -x;
  return out;
}

std::vector<std::vector<BigFloat>> invert(std::vector<std::vector<BigFloat>> a) {
  const size_t n = a.size();
  mpfr_prec_t prec = a[0][0].precision();
  std::vector<std::vector<BigFloat>> inv(n, std::vector<BigFloat>(n, BigFloat(0.0, prec)));
  for (size_t i = 0; i < n; ++i) inv[i][i] = BigFloat(1.0, prec);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t i = col + 1; i < n; ++i)
      if (abs(a[i][col]) > abs(a[piv][col])) piv = i;
    if (a[piv][col].sign() == 0) throw SingularMatrix("embedding matrix is singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    BigFloat d = a[col][col];
    for (size_t j = 0; j < n; ++j) {
      a[col][j] = a[col][j] / d;
      inv[col][j] = inv[col][j] / d;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      BigFloat f = a[i][col];
      for (size_t j = 0; j < n; ++j) {
        a[i][j] = a[i][j] - f * a[col][j];
        inv[i][j] = inv[i][j] - f * inv[col][j];
      }
    }
  }
  return inv;
}

}  // namespace

// ---------------------------------------------------------------------------

double default_lower_bound_constant(const Signature& sig) {
  if (sig == Signature{3, 0}) return 1.0 / 16.0;
  if (sig == Signature{1, 1}) return 1.0 / 3.0;
  if (sig == Signature{2, 0}) return 1.0;
  return 0.0;
}

double regulator_lower_bound(const Signature& sig, const mpz_class& disc_field, double c) {
  const double d = std::fabs(disc_field.get_d());
  double shape = 0.0;
  if (sig == Signature{3, 0}) {
    if (d <= 4) return 0.0;
    double l = std::log(d / 4);
    shape = l * l;
  } else if (sig == Signature{1, 1}) {
    if (d <= 28) return 0.0;
    shape = std::log((d - 24) / 4);
  } else if (sig == Signature{2, 0}) {
    if (d <= 4) return 0.0;
    shape = std::log((std::sqrt(d - 4) + std::sqrt(d)) / 2);
  } else {
    return 0.0;
  }
  return c * shape;
}

std::vector<std::vector<Interval>> log_embedding(const NumberFieldOrder& order, const std::vector<ZVec>& units,
                                                 mpfr_prec_t prec) {
  Signature sig = signature_of(order.poly());
  require_supported(sig);
  check_units(order, units);
  auto m = try_log_matrix(order, units, sig, prec);
  if (!m) throw PrecisionExhausted("unit embedding not separated from zero at " + std::to_string(prec) + " bits");
  return *m;
}

Interval regulator(const NumberFieldOrder& order, const std::vector<ZVec>& units, int deleted_row,
                   const PrecisionConfig& config) {
  return regulator_data(order, units, deleted_row, config).det;
}

Interval regulator(const UnitSystem& us, int deleted_row) {
  PrecisionConfig cfg;
  cfg.default_bits = std::max(us.precision_bits, 64);
  return regulator(us.order, us.units, deleted_row, cfg);
}

std::optional<std::pair<size_t, ZVec>> find_qth_root(const NumberFieldOrder& order, const std::vector<ZVec>& units,
                                                     int q, mpfr_prec_t prec) {
  if (q < 2 || !is_prime(static_cast<std::uint64_t>(q))) throw InvalidArgument("saturation needs a prime q");
  if (units.empty()) return std::nullopt;
  check_units(order, units);
  const int n = order.degree();
  const size_t r = units.size();
  Places pl = numeric_places(order.poly(), prec);
  const auto uq = static_cast<unsigned long>(q);

  std::vector<std::vector<BigFloat>> emb;
  for (int k = 0; k < n; ++k) emb.push_back(place_vector(order, unit_vec(n, k), pl));
  // e[row][k]: row-th place coordinate of basis element k.
  std::vector<std::vector<BigFloat>> e(static_cast<size_t>(n), std::vector<BigFloat>(static_cast<size_t>(n), BigFloat(prec)));
  for (int row = 0; row < n; ++row)
    for (int k = 0; k < n; ++k) e[static_cast<size_t>(row)][static_cast<size_t>(k)] = emb[static_cast<size_t>(k)][static_cast<size_t>(row)];
  auto einv = invert(e);

  std::vector<std::vector<BigFloat>> real_vals;  // [unit][real place]
  std::vector<std::vector<Cx>> cx_vals;
  for (const auto& u : units) {
    auto v = place_vector(order, u, pl);
    std::vector<BigFloat> rv(v.begin(), v.begin() + pl.sig.r1);
    std::vector<Cx> cv;
    for (size_t j = static_cast<size_t>(pl.sig.r1); j + 1 < v.size(); j += 2) cv.push_back({v[j], v[j + 1]});
    real_vals.push_back(std::move(rv));
    cx_vals.push_back(std::move(cv));
  }

  BigFloat pi(prec);
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  const BigFloat tol(1e-8, prec);

  // Projective exponent vectors over F_q.
  std::vector<long> a(r, 0);
  for (size_t lead = 0; lead < r; ++lead) {
    const size_t free_count = r - lead - 1;
    std::uint64_t combos = 1;
    for (size_t i = 0; i < free_count; ++i) combos *= uq;
    for (std::uint64_t idx = 0; idx < combos; ++idx) {
      std::fill(a.begin(), a.end(), 0);
      a[lead] = 1;
      std::uint64_t t = idx;
      for (size_t i = lead + 1; i < r; ++i) {
        a[i] = static_cast<long>(t % uq);
        t /= uq;
      }
      // Place values of prod u_i^{a_i}.
      std::vector<BigFloat> rv(static_cast<size_t>(pl.sig.r1), BigFloat(1.0, prec));
      std::vector<Cx> cv(static_cast<size_t>(pl.sig.r2), Cx{BigFloat(1.0, prec), BigFloat(0.0, prec)});
      for (size_t i = 0; i < r; ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < rv.size(); ++j) rv[j] = rv[j] * bf_pow(real_vals[i][j], static_cast<unsigned long>(a[i]));
        for (size_t j = 0; j < cv.size(); ++j) cv[j] = cmul(cv[j], cpow(cx_vals[i][j], static_cast<unsigned long>(a[i]), prec));
      }
      // Sign making eta a candidate q-th power.
      int sign = 1;
      if (q == 2 && !rv.empty() && rv[0].sign() < 0) sign = -1;
      if (sign < 0) {
        for (auto& v : rv) v = -v;
        for (auto& z : cv) z = {-z.re, -z.im};
      }
      bool possible = true;
      if (q == 2)
        for (const auto& v : rv)
          if (v.sign() < 0) possible = false;
      if (!possible) continue;

      // Root choices: real places (signs when q = 2, first fixed), complex arguments.
      std::vector<BigFloat> real_roots;
      for (const auto& v : rv) {
        BigFloat m = bf_root(abs(v), uq);
        real_roots.push_back(v.sign() < 0 ? -m : m);
      }
      std::vector<std::vector<Cx>> cx_choices;
      for (const auto& z : cv) {
        BigFloat mod = bf_root(sqrt(z.re * z.re + z.im * z.im), uq);
        BigFloat arg(prec);
        mpfr_atan2(arg.get(), z.im.get(), z.re.get(), MPFR_RNDN);
        std::vector<Cx> opts;
        for (int k = 0; k < q; ++k) {
          BigFloat th = (arg + BigFloat(2.0 * k, prec) * pi) / BigFloat(static_cast<double>(q), prec);
          BigFloat s(prec), c(prec);
          mpfr_sin_cos(s.get(), c.get(), th.get(), MPFR_RNDN);
          opts.push_back({mod * c, mod * s});
        }
        cx_choices.push_back(std::move(opts));
      }
      const size_t sign_choices = (q == 2 && real_roots.size() > 1) ? (size_t{1} << (real_roots.size() - 1)) : 1;
      const size_t cx_count = cx_choices.empty() ? 1 : cx_choices[0].size();

      std::optional<ZVec> eta;
      for (size_t sc = 0; sc < sign_choices; ++sc) {
        for (size_t cc = 0; cc < cx_count; ++cc) {
          std::vector<BigFloat> target;
          for (size_t j = 0; j < real_roots.size(); ++j) {
            bool neg = j > 0 && ((sc >> (j - 1)) & 1);
            target.push_back(neg ? -real_roots[j] : real_roots[j]);
          }
          for (const auto& opts : cx_choices) {
            target.push_back(opts[cc].re);
            target.push_back(opts[cc].im);
          }
          ZVec y;
          bool near = true;
          for (int k = 0; k < n && near; ++k) {
            BigFloat s(0.0, prec);
            for (int j = 0; j < n; ++j) s = s + einv[static_cast<size_t>(k)][static_cast<size_t>(j)] * target[static_cast<size_t>(j)];
            BigFloat rnd = round_to_integer(s);
            if (abs(s - rnd) > tol) near = false;
            y.push_back(to_integer(rnd));
          }
          if (!near) continue;
          if (!eta) {
            ZVec acc = order.one();
            for (size_t i = 0; i < r; ++i)
              if (a[i] != 0) acc = order.multiply(acc, order.power(units[i], a[i]));
            if (sign < 0)
              for (auto& x : acc) x = -x;
            eta = std::move(acc);
          }
          if (order.power(y, q) == *eta) return std::make_pair(lead, y);
        }
      }
    }
  }
  return std::nullopt;
}

CertificationReport certify_fundamental(const UnitSystem& us, double c, int max_saturation_prime) {
  CertificationReport rep;
  if (us.rank() == 0) {
    rep.status = CertificationStatus::Certified;
    rep.index_bound = 1;
    rep.reason = "unit rank 0";
    return rep;
  }
  if (!us.order.maximality_certified()) {
    rep.reason = "order is not certified maximal";
    return rep;
  }
  rep.lower_bound = regulator_lower_bound(us.signature, us.order.disc_field(), c);
  if (!(rep.lower_bound > 0)) {
    rep.reason = "regulator lower bound is not positive";
    return rep;
  }
  const double ratio = us.regulator.hi().to_double() / rep.lower_bound * (1 + 1e-12);
  if (ratio > static_cast<double>(max_saturation_prime)) {
    rep.index_bound = static_cast<std::uint64_t>(std::min(ratio, 1e18));
    rep.reason = "index bound exceeds the saturation limit";
    return rep;
  }
  rep.index_bound = static_cast<std::uint64_t>(std::floor(ratio));
  if (rep.index_bound < 1) rep.index_bound = 1;
  mpfr_prec_t prec = std::max<mpfr_prec_t>(256, us.precision_bits);
  for (std::uint32_t q : primes_up_to(static_cast<std::uint32_t>(rep.index_bound))) {
    rep.primes_tested.push_back(static_cast<int>(q));
    if (find_qth_root(us.order, us.units, static_cast<int>(q), prec)) {
      rep.status = CertificationStatus::NotSaturated;
      rep.failing_prime = static_cast<int>(q);
      rep.reason = "a " + std::to_string(q) + "-th root exists";
      return rep;
    }
  }
  rep.status = CertificationStatus::Certified;
  rep.reason = rep.index_bound < 2 ? "index bound below 2" : "saturated at every prime up to the index bound";
  return rep;
}

UnitSystem unit_group(const NumberFieldOrder& order, int precision_bits, const UnitSearchOptions& options) {
  if (precision_bits < 32) throw InvalidArgument("precision below 32 bits");
  Signature sig = signature_of(order.poly());
  require_supported(sig);
  const int rank = sig.r1 + sig.r2 - 1;
  PrecisionConfig cfg = options.precision;
  cfg.default_bits = precision_bits;
  cfg.max_bits = std::max(cfg.max_bits, precision_bits);

  UnitSystem us{order, sig, {}, {}, Interval::from_integer(1, precision_bits), false, precision_bits};
  if (rank == 0) {
    us.log_matrix.assign(static_cast<size_t>(sig.r1 + sig.r2), {});
    us.certified = true;
    return us;
  }

  Places pl = numeric_places(order.poly(), 128);
  UnitLattice lattice(order, rank);
  ld bound = 2.0L * order.degree();
  for (int round = 0; round < options.max_rounds && !lattice.full(); ++round, bound *= 4) {
    bool exhausted = false;
    auto found = enumerate_units(order, pl, bound, options.max_points, exhausted);
    std::sort(found.begin(), found.end(), [](const Candidate& x, const Candidate& y) {
      if (x.t2 != y.t2) return x.t2 < y.t2;
      return x.coords < y.coords;
    });
    lattice.insert_all(std::move(found));
    if (exhausted) break;
  }
  if (!lattice.full())
    throw RankDeficient("unit search found fewer than " + std::to_string(rank) + " independent units");

  auto refresh = [&](std::vector<Candidate> basis) {
    us.units.clear();
    for (auto& c : basis) us.units.push_back(normalize_unit(order, c.coords, pl));
    LogData d = regulator_data(order, us.units, -1, cfg);
    us.log_matrix = std::move(d.matrix);
    us.regulator = std::move(d.det);
    us.precision_bits = d.bits;
  };
  auto reduce_again = [&]() {
    UnitLattice l2(order, rank);
    std::vector<Candidate> cs;
    for (const auto& u : us.units) {
      auto v = place_vector(order, u, pl);
      std::vector<ld> logs;
      for (int j = 0; j < sig.r1; ++j) logs.push_back(std::log(std::fabs(v[static_cast<size_t>(j)].to_long_double())));
      for (size_t j = static_cast<size_t>(sig.r1); j + 1 < v.size(); j += 2) {
        ld re = v[j].to_long_double(), im = v[j + 1].to_long_double();
        logs.push_back(std::log(re * re + im * im));
      }
      cs.push_back({u, logs, 0});
    }
    l2.insert_all(std::move(cs));
    refresh(l2.reduced());
  };
  refresh(lattice.reduced());

  const double c = default_lower_bound_constant(sig);
  for (int iter = 0; iter < 64; ++iter) {
    CertificationReport rep = certify_fundamental(us, c, options.max_saturation_prime);
    if (rep.status == CertificationStatus::Certified) {
      us.certified = true;
      return us;
    }
    if (rep.status == CertificationStatus::NotSaturated) {
      auto root = find_qth_root(order, us.units, *rep.failing_prime, std::max(256, us.precision_bits));
      us.units[root->first] = root->second;
      reduce_again();
      continue;
    }
    // No usable index bound: saturate heuristically at small primes.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint32_t q : primes_up_to(static_cast<std::uint32_t>(options.heuristic_saturation_prime))) {
        if (auto root = find_qth_root(order, us.units, static_cast<int>(q), std::max(256, us.precision_bits))) {
          us.units[root->first] = root->second;
          reduce_again();
          changed = true;
        }
      }
    }
    us.certified = false;
    return us;
  }
  throw Error("unit saturation did not converge");
}

// ---------------------------------------------------------------------------
// Unit images in (O/pO)^x.

namespace {

using Elt = std::array<std::uint64_t, 4>;

struct EltHash {
  size_t operator()(const Elt& e) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : e) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<size_t>(h);
  }
};

class FpAlgebra {
 public:
  FpAlgebra(const NumberFieldOrder& order, std::uint64_t p) : n_(order.degree()), p_(p) {
    if (n_ > 4) throw Unsupported("residue rings of degree above 4");
    table_.resize(static_cast<size_t>(n_ * n_ * n_));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
          mpz_class t;
          mpz_mod(t.get_mpz_t(), order.structure(i, j, k).get_mpz_t(), mpz_class(static_cast<unsigned long>(p)).get_mpz_t());
          table_[static_cast<size_t>((i * n_ + j) * n_ + k)] = t.get_ui();
        }
    one_ = reduce(order.one());
  }

  Elt reduce(const ZVec& x) const {
    Elt e{0, 0, 0, 0};
    mpz_class pp(static_cast<unsigned long>(p_)), t;
    for (int i = 0; i < n_; ++i) {
      mpz_mod(t.get_mpz_t(), x[static_cast<size_t>(i)].get_mpz_t(), pp.get_mpz_t());
      e[static_cast<size_t>(i)] = t.get_ui();
    }
    return e;
  }

  Elt mul(const Elt& a, const Elt& b) const {
    unsigned __int128 acc[4] = {0, 0, 0, 0};
    for (int i = 0; i < n_; ++i) {
      if (a[static_cast<size_t>(i)] == 0) continue;
      for (int j = 0; j < n_; ++j) {
        if (b[static_cast<size_t>(j)] == 0) continue;
        std::uint64_t ab = static_cast<std::uint64_t>(static_cast<unsigned __int128>(a[static_cast<size_t>(i)]) * b[static_cast<size_t>(j)] % p_);
        const std::uint64_t* t = &table_[static_cast<size_t>((i * n_ + j) * n_)];
        for (int k = 0; k < n_; ++k) acc[k] += static_cast<unsigned __int128>(ab) * t[k];
      }
    }
    Elt c{0, 0, 0, 0};
    for (int k = 0; k < n_; ++k) c[static_cast<size_t>(k)] = static_cast<std::uint64_t>(acc[k] % p_);
    return c;
  }

  Elt pow(const Elt& a, const mpz_class& e) const {
    Elt r = one_;
    const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t b = bits; b-- > 0;) {
      r = mul(r, r);
      if (mpz_tstbit(e.get_mpz_t(), b)) r = mul(r, a);
    }
    return r;
  }

  const Elt& one() const { return one_; }

 private:
  int n_;
  std::uint64_t p_;
  std::vector<std::uint64_t> table_;
  Elt one_;
};

struct GroupExponent {
  mpz_class value;
  std::vector<PrimePower> factors;
};

GroupExponent residue_exponent(std::uint64_t p, int n) {
  std::map<mpz_class, unsigned> primes;
  mpz_class pj = p;
  unsigned j = 1;
  while (pj < n) {
    pj *= p;
    ++j;
  }
  primes[mpz_class(static_cast<unsigned long>(p))] = j;
  mpz_class pf = 1;
  for (int f = 1; f <= n; ++f) {
    pf *= static_cast<unsigned long>(p);
    Factorization fac = factorize(pf - 1);
    if (!fac.complete()) throw FactorizationFailure("cannot factor p^f - 1");
    for (const auto& pp : fac.factors) primes[pp.prime] = std::max(primes[pp.prime], pp.exponent);
  }
  GroupExponent g{1, {}};
  for (const auto& [q, e] : primes) {
    g.factors.push_back({q, e});
    mpz_class qe;
    mpz_pow_ui(qe.get_mpz_t(), q.get_mpz_t(), e);
    g.value *= qe;
  }
  return g;
}

mpz_class element_order(const FpAlgebra& alg, const Elt& g, const GroupExponent& ex) {
  if (alg.pow(g, ex.value) != alg.one()) throw Error("residue-ring exponent bound violated");
  mpz_class t = ex.value;
  for (const auto& pp : ex.factors) {
    for (unsigned i = 0; i < pp.exponent; ++i) {
      mpz_class s = t / pp.prime;
      if (alg.pow(g, s) == alg.one())
        t = s;
      else
        break;
    }
  }
  return t;
}

}  // namespace

mpz_class unit_index_mod_p(const NumberFieldOrder& order, const std::vector<ZVec>& units, const mpz_class& p) {
  if (!is_probable_prime(p)) throw NonPrime(p.get_str() + " is not prime");
  if (p >= mpz_class(1UL << 31)) throw Unsupported("unit index modulo p needs p < 2^31");
  if (mpz_divisible_p(order.index().get_mpz_t(), p.get_mpz_t()))
    throw BadPrime(p.get_str() + " divides the order index");
  check_units(order, units);
  if (units.empty()) return 1;
  if (units.size() > 2) throw Unsupported("unit index modulo p for rank above 2");

  const std::uint64_t pp = p.get_ui();
  FpAlgebra alg(order, pp);
  GroupExponent ex = residue_exponent(pp, order.degree());
  Elt g1 = alg.reduce(units[0]);
  mpz_class k1 = element_order(alg, g1, ex);
  if (units.size() == 1) return k1;

  Elt g2 = alg.reduce(units[1]);
  mpz_class d = element_order(alg, g2, ex);

  // Baby-step giant-step membership in <g1>.
  mpz_class msz;
  mpz_sqrt(msz.get_mpz_t(), k1.get_mpz_t());
  msz += 1;
  if (msz > mpz_class(1UL << 24)) throw BudgetExhausted("cyclic subgroup too large for baby-step giant-step");
  const std::uint64_t m = msz.get_ui();
  std::unordered_map<Elt, std::uint64_t, EltHash> baby;
  baby.reserve(static_cast<size_t>(m) * 2);
  Elt cur = alg.one();
  for (std::uint64_t j = 0; j < m; ++j) {
    baby.emplace(cur, j);
    cur = alg.mul(cur, g1);
  }
  Elt giant = alg.pow(g1, k1 - 1);  // g1^-1
  giant = alg.pow(giant, mpz_class(static_cast<unsigned long>(m)));
  auto member = [&](Elt h) {
    for (std::uint64_t t = 0; t <= m; ++t) {
      if (baby.count(h)) return true;
      h = alg.mul(h, giant);
    }
    return false;
  };

  // Smallest k with g2^k in <g1> divides ord(g2).
  Factorization fd = factorize(d);
  for (const auto& pf : fd.factors) {
    for (unsigned i = 0; i < pf.exponent; ++i) {
      mpz_class s = d / pf.prime;
      if (member(alg.pow(g2, s)))
        d = s;
      else
        break;
    }
  }
  return k1 * d;
}

mpz_class unit_index_mod_p(const UnitSystem& us, const mpz_class& p) { return unit_index_mod_p(us.order, us.units, p); }

std::uint64_t suborder_unit_index(const NumberFieldOrder& big, const NumberFieldOrder& small,
                                  const std::vector<ZVec>& units, std::uint64_t cap) {
  if (!(big.poly() == small.poly())) throw InvalidArgument("orders over different polynomials");
  // index() is measured against Z[theta], so the larger order has the larger index.
  if (!mpz_divisible_p(big.index().get_mpz_t(), small.index().get_mpz_t()))
    throw InvalidArgument("second order is not contained in the first");
  check_units(big, units);
  const mpz_class m = big.index() / small.index();
  if (m == 1 || units.empty()) return 1;
  if (units.size() > 2) throw Unsupported("suborder unit index for rank above 2");

  auto reduce = [&](ZVec x) {
    for (auto& v : x) mpz_mod(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return x;
  };
  auto inside = [&](const ZVec& x) {
    ZVec check = x;
    return small.from_power_basis(big.to_power_basis(check)).has_value();
  };
  const ZVec g1 = reduce(units[0]);
  std::vector<ZVec> powers{reduce(big.one())};
  std::uint64_t k1 = 0;
  for (std::uint64_t k = 1; k <= cap; ++k) {
    powers.push_back(big.multiply_mod(powers.back(), g1, m));
    if (inside(powers.back())) {
      k1 = k;
      break;
    }
  }
  if (k1 == 0) throw BudgetExhausted("suborder unit index exceeds the cap");
  powers.pop_back();
  if (units.size() == 1) return k1;

  const ZVec g2 = reduce(units[1]);
  ZVec h = reduce(big.one());
  for (std::uint64_t k = 1; k * k1 <= cap; ++k) {
    h = big.multiply_mod(h, g2, m);
    for (const auto& gj : powers)
      if (inside(big.multiply_mod(h, gj, m))) return k1 * k;
  }
  throw BudgetExhausted("suborder unit index exceeds the cap");
}

}  // namespace systolab::numfield
