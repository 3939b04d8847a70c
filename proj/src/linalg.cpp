#include "systolab/linalg.hpp"

#include <algorithm>
#include <utility>

#include "systolab/error.hpp"

namespace systolab {

QMatrix to_rational(const ZMatrix& m) {
  QMatrix out;
  out.reserve(m.size());
  for (const auto& row : m) out.emplace_back(row.begin(), row.end());
  return out;
}

QMatrix multiply(const QMatrix& a, const QMatrix& b) {
  const size_t r = a.size(), inner = b.size(), c = b.empty() ? 0 : b[0].size();
  QMatrix out(r, QVec(c, 0));
  for (size_t i = 0; i < r; ++i)
    for (size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (size_t j = 0; j < c; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

QVec multiply(const QVec& row, const QMatrix& m) {
  const size_t c = m.empty() ? 0 : m[0].size();
  QVec out(c, 0);
  for (size_t k = 0; k < row.size(); ++k) {
    if (row[k] == 0) continue;
    for (size_t j = 0; j < c; ++j) out[j] += row[k] * m[k][j];
  }
  return out;
}

QMatrix inverse(const QMatrix& m) {
  const size_t n = m.size();
  QMatrix a = m;
  QMatrix inv(n, QVec(n, 0));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw SingularMatrix("rational matrix is singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    mpq_class d = a[col][col];
    for (size_t j = 0; j < n; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      mpq_class f = a[i][col];
      for (size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

mpq_class determinant(const QMatrix& m) {
  const size_t n = m.size();
  QMatrix a = m;
  mpq_class det = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (size_t i = col + 1; i < n; ++i) {
      if (a[i][col] == 0) continue;
      mpq_class f = a[i][col] / a[col][col];
      for (size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  return det;
}

ZMatrix hnf_lower(ZMatrix rows) {
  if (rows.empty()) throw InvalidArgument("hnf of an empty matrix");
  const size_t n = rows[0].size();
  ZMatrix basis(n);
  for (size_t step = 0; step < n; ++step) {
    const size_t c = n - 1 - step;
    // Euclid across rows on column c until one nonzero entry remains.
    while (true) {
      size_t best = rows.size();
      size_t nonzero = 0;
      for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        ++nonzero;
        if (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c])) best = i;
      }
      if (nonzero == 0) throw SingularMatrix("hnf: lattice is not of full rank");
      if (nonzero == 1) {
        ZVec piv = std::move(rows[best]);
        rows.erase(rows.begin() + static_cast<long>(best));
        if (piv[c] < 0)
          for (auto& x : piv) x = -x;
        basis[c] = std::move(piv);
        break;
      }
      for (size_t i = 0; i < rows.size(); ++i) {
        if (i == best || rows[i][c] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[best][c].get_mpz_t());
        for (size_t j = 0; j <= c; ++j) rows[i][j] -= q * rows[best][j];
      }
    }
  }
  for (size_t r = 0; r < n; ++r) {
    for (size_t cc = r; cc-- > 0;) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), basis[r][cc].get_mpz_t(), basis[cc][cc].get_mpz_t());
      if (q == 0) continue;
      for (size_t j = 0; j <= cc; ++j) basis[r][j] -= q * basis[cc][j];
    }
  }
  return basis;
}

std::vector<ZVec> left_kernel_mod(const ZMatrix& a, const mpz_class& p) {
  const size_t r = a.size();
  const size_t c = r == 0 ? 0 : a[0].size();
  // Row-reduce [a | I]; rows whose a-part vanishes give kernel vectors.
  ZMatrix m(r, ZVec(c + r, 0));
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < c; ++j) mpz_mod(m[i][j].get_mpz_t(), a[i][j].get_mpz_t(), p.get_mpz_t());
    m[i][c + i] = 1;
  }
  size_t pivot_row = 0;
  for (size_t col = 0; col < c && pivot_row < r; ++col) {
    size_t piv = pivot_row;
    while (piv < r && m[piv][col] == 0) ++piv;
    if (piv == r) continue;
    std::swap(m[piv], m[pivot_row]);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), m[pivot_row][col].get_mpz_t(), p.get_mpz_t());
    for (auto& x : m[pivot_row]) {
      x *= inv;
      mpz_mod(x.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
    }
    for (size_t i = 0; i < r; ++i) {
      if (i == pivot_row || m[i][col] == 0) continue;
      mpz_class f = m[i][col];
      for (size_t j = 0; j < c + r; ++j) {
        m[i][j] -= f * m[pivot_row][j];
        mpz_mod(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), p.get_mpz_t());
      }
    }
    ++pivot_row;
  }
  std::vector<ZVec> kernel;
  for (size_t i = pivot_row; i < r; ++i) kernel.emplace_back(m[i].begin() + static_cast<long>(c), m[i].end());
  return kernel;
}

ScaledMatrix clear_denominators(const QMatrix& m) {
  mpz_class den = 1;
  for (const auto& row : m)
    for (const auto& x : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  ZMatrix num;
  for (const auto& row : m) {
    ZVec out;
    for (const auto& x : row) {
      mpq_class s = x * den;
      out.push_back(s.get_num());
    }
    num.push_back(std::move(out));
  }
  return {std::move(num), den};
}

}  // namespace systolab
