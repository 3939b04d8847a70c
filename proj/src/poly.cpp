#include "systolab/poly.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <utility>

#include "systolab/error.hpp"

namespace systolab::numfield {

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.size() < 2) throw InvalidArgument("polynomial must have degree >= 1");
}

IntPoly::IntPoly(std::initializer_list<long> coeffs)
    : IntPoly(std::vector<mpz_class>(coeffs.begin(), coeffs.end())) {}

mpz_class IntPoly::coeff(int k) const {
  if (k < 0 || k > degree()) return 0;
  return coeffs_[static_cast<size_t>(k)];
}

mpz_class IntPoly::eval(const mpz_class& x) const {
  mpz_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

mpq_class IntPoly::eval(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + mpq_class(*it);
  return acc;
}

QPoly IntPoly::to_rational() const {
  std::vector<mpq_class> c(coeffs_.begin(), coeffs_.end());
  return QPoly(std::move(c));
}

std::string IntPoly::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const mpz_class& c = coeffs_[static_cast<size_t>(k)];
    if (c == 0) continue;
    mpz_class mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1 || k == 0) os << mag.get_str();
    if (k >= 1) os << "x";
    if (k >= 2) os << "^" << k;
    first = false;
  }
  return os.str();
}

IntPoly IntPoly::parse(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw ParseError("empty polynomial");

  std::map<int, mpz_class> terms;
  size_t i = 0;
  auto digits = [&](size_t& pos) {
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    return s.substr(start, pos - start);
  };
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      throw ParseError("expected '+' or '-' at position " + std::to_string(i));
    }
    std::string num = digits(i);
    bool has_x = false;
    int power = 0;
    if (i < s.size() && s[i] == '*') {
      if (num.empty()) throw ParseError("'*' without coefficient");
      ++i;
      if (i >= s.size() || (s[i] != 'x' && s[i] != 'X')) throw ParseError("expected x after '*'");
    }
    if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
      has_x = true;
      power = 1;
      ++i;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string e = digits(i);
        if (e.empty()) throw ParseError("missing exponent after '^'");
        power = std::stoi(e);
      }
    }
    if (num.empty() && !has_x) throw ParseError("empty term in polynomial");
    mpz_class c = num.empty() ? mpz_class(1) : mpz_class(num);
    terms[power] += sign * c;
  }
  int deg = terms.rbegin()->first;
  std::vector<mpz_class> coeffs(static_cast<size_t>(deg) + 1, 0);
  for (auto& [k, c] : terms) coeffs[static_cast<size_t>(k)] = c;
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.size() < 2) throw ParseError("polynomial must have degree >= 1");
  return IntPoly(std::move(coeffs));
}

// ---------------------------------------------------------------------------

QPoly::QPoly(std::vector<mpq_class> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void QPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

mpq_class QPoly::coeff(int k) const {
  if (k < 0 || k > degree()) return 0;
  return coeffs_[static_cast<size_t>(k)];
}

mpq_class QPoly::eval(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int QPoly::sign_at(const mpq_class& x) const { return sgn(eval(x)); }

QPoly QPoly::derivative() const {
  std::vector<mpq_class> d;
  for (size_t k = 1; k < coeffs_.size(); ++k) d.push_back(coeffs_[k] * static_cast<long>(k));
  return QPoly(std::move(d));
}

QPoly QPoly::monic() const {
  if (is_zero()) return *this;
  std::vector<mpq_class> c = coeffs_;
  mpq_class lc = leading();
  for (auto& x : c) x /= lc;
  return QPoly(std::move(c));
}

QPoly operator+(const QPoly& a, const QPoly& b) {
  std::vector<mpq_class> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
  for (size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
  return QPoly(std::move(c));
}

QPoly operator-(const QPoly& a) {
  std::vector<mpq_class> c = a.coeffs_;
  for (auto& x : c) x = -x;
  return QPoly(std::move(c));
}

QPoly operator-(const QPoly& a, const QPoly& b) { return a + (-b); }

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return QPoly();
  std::vector<mpq_class> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return QPoly(std::move(c));
}

QDivision divmod(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<mpq_class> rem = a.coeffs();
  int db = b.degree();
  int da = a.degree();
  if (da < db) return {QPoly(), a};
  std::vector<mpq_class> quo(static_cast<size_t>(da - db) + 1, 0);
  for (int k = da; k >= db; --k) {
    mpq_class c = rem[static_cast<size_t>(k)] / b.leading();
    quo[static_cast<size_t>(k - db)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) rem[static_cast<size_t>(k - db + j)] -= c * b.coeff(j);
  }
  rem.resize(static_cast<size_t>(db));
  return {QPoly(std::move(quo)), QPoly(std::move(rem))};
}

QPoly gcd(const QPoly& a, const QPoly& b) {
  QPoly x = a, y = b;
  while (!y.is_zero()) {
    QPoly r = divmod(x, y).remainder;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

IntPoly derivative(const IntPoly& f) {
  std::vector<mpz_class> d;
  for (int k = 1; k <= f.degree(); ++k) d.push_back(f.coeff(k) * k);
  if (d.size() < 2) throw InvalidArgument("derivative of a linear polynomial is constant");
  return IntPoly(std::move(d));
}

bool is_squarefree(const IntPoly& f) {
  QPoly q = f.to_rational();
  return gcd(q, q.derivative()).degree() == 0;
}

mpz_class determinant(std::vector<std::vector<mpz_class>> m) {
  const size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]);
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

mpz_class resultant(const IntPoly& f, const IntPoly& g) {
  const int m = f.degree();
  const int n = g.degree();
  const size_t size = static_cast<size_t>(m + n);
  std::vector<std::vector<mpz_class>> s(size, std::vector<mpz_class>(size, 0));
  for (int row = 0; row < n; ++row)
    for (int k = 0; k <= m; ++k) s[row][static_cast<size_t>(row + m - k)] = f.coeff(k);
  for (int row = 0; row < m; ++row)
    for (int k = 0; k <= n; ++k) s[static_cast<size_t>(n + row)][static_cast<size_t>(row + n - k)] = g.coeff(k);
  return determinant(std::move(s));
}

mpz_class poly_discriminant(const IntPoly& f) {
  const int n = f.degree();
  if (n < 2) throw InvalidArgument("discriminant requires degree >= 2");
  mpz_class res = resultant(f, derivative(f));
  mpz_class d;
  mpz_divexact(d.get_mpz_t(), res.get_mpz_t(), f.leading().get_mpz_t());
  if ((n * (n - 1) / 2) % 2 == 1) d = -d;
  return d;
}

}  // namespace systolab::numfield
