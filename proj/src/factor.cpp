#include "systolab/factor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "systolab/error.hpp"

namespace systolab {

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(static_cast<size_t>(limit) + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<std::uint64_t> first_primes(std::size_t count) {
  if (count == 0) return {};
  // p_n < n (ln n + ln ln n) for n >= 6.
  double n = static_cast<double>(std::max<std::size_t>(count, 6));
  auto limit = static_cast<std::uint32_t>(n * (std::log(n) + std::log(std::log(n)))) + 16;
  auto small = primes_up_to(limit);
  small.resize(count);
  return {small.begin(), small.end()};
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

const std::vector<std::uint32_t>& trial_primes(std::uint64_t limit) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::vector<std::uint32_t>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(limit);
  if (it == cache.end()) {
    it = cache.emplace(limit, primes_up_to(static_cast<std::uint32_t>(std::min<std::uint64_t>(limit, 50000000))))
             .first;
  }
  return it->second;
}

// Brent's cycle-finding variant; returns a nontrivial factor or 0 on failure.
mpz_class rho(const mpz_class& n, unsigned long c, std::uint64_t max_iter) {
  mpz_class y = 2, x, q = 1, g = 1, ys, t;
  const std::uint64_t m = 128;
  std::uint64_t r = 1, iter = 0;
  auto f = [&](mpz_class& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  do {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) f(y);
    std::uint64_t k = 0;
    do {
      ys = y;
      for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
        f(y);
        t = x - y;
        q = q * abs(t);
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += m;
      iter += m;
      if (iter > max_iter) return 0;
    } while (k < r && g == 1);
    r *= 2;
  } while (g == 1);
  if (g == n) {
    do {
      f(ys);
      t = x - ys;
      mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  if (g == n) return 0;
  return g;
}

void split(const mpz_class& n, const FactorBudget& budget, std::map<mpz_class, unsigned>& out,
           std::vector<mpz_class>& unfactored) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out[n] += 1;
    return;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    split(r, budget, out, unfactored);
    split(r, budget, out, unfactored);
    return;
  }
  for (int attempt = 0; attempt < budget.rho_attempts; ++attempt) {
    mpz_class d = rho(n, 1 + static_cast<unsigned long>(attempt) * 2, budget.rho_iterations);
    if (d != 0) {
      mpz_class other = n / d;
      split(d, budget, out, unfactored);
      split(other, budget, out, unfactored);
      return;
    }
  }
  unfactored.push_back(n);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_probable_prime(const mpz_class& n) {
  if (n < 2) return false;
  if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime(mpz_get_ui(n.get_mpz_t()));
  // 2 means "definitely prime", 1 "probably prime"; rerun with more rounds on 1.
  int r = mpz_probab_prime_p(n.get_mpz_t(), 30);
  if (r == 1) r = mpz_probab_prime_p(n.get_mpz_t(), 60);
  return r > 0;
}

Factorization factorize(const mpz_class& value, const FactorBudget& budget) {
  if (value == 0) throw InvalidArgument("cannot factor zero");
  mpz_class n = abs(value);
  std::map<mpz_class, unsigned> found;
  for (std::uint32_t p : trial_primes(budget.trial_limit)) {
    if (n == 1) break;
    if (mpz_class(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      found[mpz_class(p)] += 1;
    }
  }
  Factorization out;
  split(n, budget, found, out.unfactored);
  for (auto& [p, e] : found) out.factors.push_back({p, e});
  return out;
}

}  // namespace systolab
