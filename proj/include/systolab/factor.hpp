#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace systolab {

/// Effort caps for integer factorization.
struct FactorBudget {
  std::uint64_t trial_limit = 1000000;
  std::uint64_t rho_iterations = 2000000;  // per Pollard-rho attempt
  int rho_attempts = 8;
};

struct PrimePower {
  mpz_class prime;
  unsigned exponent = 0;
};

struct Factorization {
  std::vector<PrimePower> factors;  // sorted by prime
  // Composite cofactors that survived the effort budget (empty when complete).
  std::vector<mpz_class> unfactored;
  bool complete() const { return unfactored.empty(); }
};

/// Factors |n| (n != 0): trial division to budget.trial_limit, then Brent's
/// variant of Pollard rho with an iteration cap.
Factorization factorize(const mpz_class& n, const FactorBudget& budget = {});

bool is_prime(std::uint64_t n);          // deterministic for 64-bit inputs
bool is_probable_prime(const mpz_class& n);

/// Primes <= limit (sieve of Eratosthenes).
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);
/// The first `count` primes.
std::vector<std::uint64_t> first_primes(std::size_t count);

}  // namespace systolab
