#pragma once

// Number-theoretic kernel: Moebius function, the Witt count of basic
// commutators, and the binomial divisibility check behind the hypotheses
// on torsion orders.

#include <cstdint>
#include <vector>

#include "nilmult/bigint.hpp"
#include "nilmult/errors.hpp"

namespace nilmult {

/// Primes p <= bound by the sieve of Eratosthenes.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
  std::vector<std::uint64_t> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t p = 2; p <= bound; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    for (std::uint64_t q = p * p; q <= bound; q += p) composite[q] = true;
  }
  return primes;
}

inline int moebius(std::uint64_t m) {
  if (m == 0) throw DomainError("moebius: argument must be positive");
  int result = 1;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    m /= p;
    if (m % p == 0) return 0;
    result = -result;
  }
  if (m > 1) result = -result;
  return result;
}

/// Number of basic commutators of weight n on d letters:
/// (1/n) * sum_{k | n} mu(k) d^(n/k).
inline BigInt witt_chi(unsigned n, const BigInt& d) {
  if (n == 0) throw DomainError("witt_chi: weight must be positive");
  if (d < 0) throw DomainError("witt_chi: letter count must be nonnegative");
  BigInt sum = 0;
  for (unsigned k = 1; k <= n; ++k) {
    if (n % k != 0) continue;
    int mu = moebius(k);
    if (mu == 0) continue;
    BigInt term;
    mpz_pow_ui(term.get_mpz_t(), d.get_mpz_t(), n / k);
    if (mu > 0)
      sum += term;
    else
      sum -= term;
  }
  if (!mpz_divisible_ui_p(sum.get_mpz_t(), n))
    throw InconsistencyError("witt_chi: divisor sum not divisible by the weight");
  BigInt result;
  mpz_divexact_ui(result.get_mpz_t(), sum.get_mpz_t(), n);
  return result;
}

inline BigInt witt_chi(unsigned n, unsigned long d) { return witt_chi(n, BigInt(d)); }

/// sum_{i=1..n} chi_{c+i}(d)
inline BigInt sum_chi(unsigned c, unsigned n, const BigInt& d) {
  if (n == 0) throw DomainError("sum_chi: n must be positive");
  BigInt total = 0;
  for (unsigned i = 1; i <= n; ++i) total += witt_chi(c + i, d);
  return total;
}

inline BigInt sum_chi(unsigned c, unsigned n, unsigned long d) { return sum_chi(c, n, BigInt(d)); }

struct DivisibilityReport {
  bool hypothesis_holds = false;  // gcd(p, r) = 1 for every prime p <= i
  bool divides = false;           // r | C(r, i)
};

inline DivisibilityReport binomial_divisibility(std::uint64_t r, std::uint64_t i) {
  if (i == 0 || i >= r) throw DomainError("binomial_divisibility: need 1 <= i < r");
  DivisibilityReport report;
  report.hypothesis_holds = true;
  for (auto p : primes_up_to(i)) {
    if (r % p == 0) {
      report.hypothesis_holds = false;
      break;
    }
  }
  BigInt binom;
  mpz_bin_uiui(binom.get_mpz_t(), r, i);
  report.divides = mpz_divisible_ui_p(binom.get_mpz_t(), r) != 0;
  return report;
}

}  // namespace nilmult
