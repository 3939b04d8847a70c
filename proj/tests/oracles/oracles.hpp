#pragma once
// Reference computations for the tests. Everything here is deliberately
// naive and shares no code with the library: fixed-width integer norms,
// Durand-Kerner roots in long double, box enumeration, BFS over finite rings.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using i128 = __int128;
using cld = std::complex<long double>;

// Discriminant of x^3 + b x^2 + c x + d by the textbook formula.
inline long long cubic_disc(long long b, long long c, long long d) {
  return b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d + 18 * b * c * d;
}

// All complex roots of a monic polynomial, coefficients low to high.
inline std::vector<cld> roots(const std::vector<long long>& f) {
  const int n = static_cast<int>(f.size()) - 1;
  auto eval = [&](cld z) {
    cld v = 0;
    for (int k = n; k >= 0; --k) v = v * z + static_cast<long double>(f[k]);
    return v;
  };
  std::vector<cld> z(n);
  for (int i = 0; i < n; ++i) z[i] = std::pow(cld(0.4L, 0.9L), i);
  for (int it = 0; it < 2000; ++it) {
    for (int i = 0; i < n; ++i) {
      cld den = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      z[i] -= eval(z[i]) / den;
    }
  }
  for (auto& w : z)
    if (std::fabs(w.imag()) < 1e-15L) w = cld(w.real(), 0);
  return z;
}

// A cubic field with integral basis rows (power-basis numerators over denom).
struct CubicField {
  std::array<long long, 4> f;  // monic, low to high
  long long denom = 1;
  std::array<std::array<long long, 3>, 3> basis{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
};

// Power-basis numerators of sum a_i * basis_i.
inline std::array<i128, 3> numerators(const CubicField& K, const std::array<long long, 3>& a) {
  std::array<i128, 3> v{0, 0, 0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v[j] += static_cast<i128>(a[i]) * K.basis[i][j];
  return v;
}

// Norm of (v0 + v1 x + v2 x^2) in Z[x]/(f) as det of its multiplication matrix.
inline i128 power_norm(const CubicField& K, const std::array<i128, 3>& v) {
  // Rows: v, x v, x^2 v reduced with x^3 = -(f0 + f1 x + f2 x^2).
  auto times_x = [&](const std::array<i128, 3>& w) {
    std::array<i128, 3> r{0, w[0], w[1]};
    r[0] -= w[2] * K.f[0];
    r[1] -= w[2] * K.f[1];
    r[2] -= w[2] * K.f[2];
    return r;
  };
  auto r0 = v, r1 = times_x(r0), r2 = times_x(r1);
  return r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0]) +
         r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
}

// Regulator as the covolume of the log lattice spanned by every unit with
// integral-basis coordinates in [-box, box]^3.
inline long double brute_regulator(const CubicField& K, int box) {
  std::vector<long long> f(K.f.begin(), K.f.end());
  auto z = roots(f);
  std::vector<cld> places;
  for (auto w : z)
    if (w.imag() == 0) places.push_back(w);
  const bool totally_real = places.size() == 3;
  if (!totally_real)
    for (auto w : z)
      if (w.imag() > 0) places.push_back(w);

  const i128 d3 = static_cast<i128>(K.denom) * K.denom * K.denom;
  std::vector<std::array<long double, 2>> logs;
  for (long long a = -box; a <= box; ++a)
    for (long long b = -box; b <= box; ++b)
      for (long long c = -box; c <= box; ++c) {
        auto v = numerators(K, {a, b, c});
        i128 n = power_norm(K, v);
        if (n != d3 && n != -d3) continue;
        std::array<long double, 2> l{0, 0};
        for (int i = 0; i < 2; ++i) {
          cld x = places[i];
          cld val = (static_cast<long double>(v[0]) + static_cast<long double>(v[1]) * x +
                     static_cast<long double>(v[2]) * x * x) /
                    static_cast<long double>(K.denom);
          l[i] = std::log(std::abs(val));
        }
        if (std::fabs(l[0]) < 1e-9L && std::fabs(l[1]) < 1e-9L) continue;  // roots of unity
        logs.push_back(l);
      }
  long double best = INFINITY;
  if (totally_real) {
    for (size_t i = 0; i < logs.size(); ++i)
      for (size_t j = i + 1; j < logs.size(); ++j) {
        long double det = std::fabs(logs[i][0] * logs[j][1] - logs[i][1] * logs[j][0]);
        if (det > 1e-6L) best = std::min(best, det);
      }
  } else {
    for (const auto& l : logs)
      if (std::fabs(l[0]) > 1e-9L) best = std::min(best, std::fabs(l[0]));
  }
  return best;
}

// Size of the subgroup of (Z[x]/(f, p))^x generated by the given elements
// (power-basis coordinates), by breadth-first closure.
inline std::size_t generated_subgroup_size(const std::array<long long, 4>& f, long long p,
                                           const std::vector<std::array<long long, 3>>& gens) {
  using E = std::array<long long, 3>;
  auto mod = [&](long long v) { return ((v % p) + p) % p; };
  auto mul = [&](const E& a, const E& b) {
    long long c[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c[i + j] = mod(c[i + j] + a[i] * b[j]);
    for (int k = 4; k >= 3; --k) {
      for (int t = 0; t < 3; ++t) c[k - 3 + t] = mod(c[k - 3 + t] - c[k] * f[t]);
      c[k] = 0;
    }
    return E{c[0], c[1], c[2]};
  };
  std::vector<E> g;
  for (auto x : gens) g.push_back(E{mod(x[0]), mod(x[1]), mod(x[2])});
  std::set<E> seen{E{1, 0, 0}};
  std::vector<E> frontier{E{1, 0, 0}};
  while (!frontier.empty()) {
    std::vector<E> next;
    for (const auto& e : frontier)
      for (const auto& h : g) {
        E y = mul(e, h);
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier.swap(next);
  }
  return seen.size();
}

// Length formula written out directly: sqrt(sum_{i != j} log^2(l_i / l_j)).
inline long double geodesic_length(const std::vector<long double>& l) {
  long double s = 0;
  for (size_t i = 0; i < l.size(); ++i)
    for (size_t j = 0; j < l.size(); ++j)
      if (i != j) s += std::pow(std::log(l[i] / l[j]), 2);
  return std::sqrt(s);
}

// gamma_p trace and sum of principal 2x2 minors, expanded by hand.
inline long gamma_trace(long p) { return 3 + 2 * p * p; }
inline long gamma_minor_sum(long p) { return 3 + 2 * p * p + p * p * p * p; }

// Classical root counts.
inline int root_count(char family, int n) {
  switch (family) {
    case 'A': return n * (n + 1);
    case 'B':
    case 'C': return 2 * n * n;
    case 'D': return 2 * n * (n - 1);
    case 'G': return 12;
    case 'F': return 48;
    case 'E': return n == 6 ? 72 : n == 7 ? 126 : 240;
  }
  return -1;
}

// Maximal strongly orthogonal subset sizes.
inline int closed_form_N(char family, int n) {
  switch (family) {
    case 'A': return (n + 1) / 2;
    case 'B':
    case 'C': return n;
    case 'D': return 2 * (n / 2);
    case 'G': return 2;
    case 'F': return 4;
    case 'E': return n == 6 ? 4 : n;
  }
  return -1;
}

}  // namespace oracle
