#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "nilmult/abelian.hpp"

using nilmult::AbelianInvariants;
using nilmult::BigInt;
using nilmult::CyclicSummand;

namespace {

// Invariant factors by full prime factorization, for cross-checking the
// coprime-base route on small orders.
std::vector<BigInt> factors_by_primes(const std::vector<unsigned long>& orders) {
  std::map<unsigned long, std::vector<unsigned long>> by_prime;  // prime -> prime powers
  for (auto n : orders) {
    for (unsigned long p = 2; n > 1; ++p) {
      unsigned long q = 1;
      while (n % p == 0) {
        n /= p;
        q *= p;
      }
      if (q > 1) by_prime[p].push_back(q);
    }
  }
  std::size_t len = 0;
  for (auto& [p, qs] : by_prime) {
    std::sort(qs.begin(), qs.end(), std::greater<>());
    len = std::max(len, qs.size());
  }
  std::vector<BigInt> out(len, BigInt(1));
  for (auto& [p, qs] : by_prime)
    for (std::size_t i = 0; i < qs.size(); ++i) out[len - 1 - i] *= qs[i];
  return out;
}

std::vector<BigInt> expand(const std::vector<CyclicSummand>& runs) {
  std::vector<BigInt> out;
  for (const auto& r : runs)
    for (unsigned long i = 0; i < r.multiplicity.get_ui(); ++i) out.push_back(r.order);
  return out;
}

}  // namespace

TEST(InvariantFactors, MergesCoprimeOrders) {
  auto runs = nilmult::invariant_factor_runs({{BigInt(2), BigInt(1)}, {BigInt(3), BigInt(1)}});
  EXPECT_EQ(expand(runs), std::vector<BigInt>{BigInt(6)});
}

TEST(InvariantFactors, MixedChain) {
  // Z_3^5 + Z_5^5 = Z_15^5; Z_4 + Z_2 + Z_6 = Z_2 + Z_2 + Z_12.
  EXPECT_EQ(expand(nilmult::invariant_factor_runs({{BigInt(3), BigInt(5)}, {BigInt(5), BigInt(5)}})),
            std::vector<BigInt>(5, BigInt(15)));
  EXPECT_EQ(expand(nilmult::invariant_factor_runs({{BigInt(4), BigInt(1)}, {BigInt(2), BigInt(1)}, {BigInt(6), BigInt(1)}})),
            (std::vector<BigInt>{BigInt(2), BigInt(2), BigInt(12)}));
}

TEST(InvariantFactors, DropsTrivialAndRejectsInvalid) {
  EXPECT_TRUE(nilmult::invariant_factor_runs({{BigInt(1), BigInt(7)}, {BigInt(9), BigInt(0)}}).empty());
  EXPECT_THROW(nilmult::invariant_factor_runs({{BigInt(0), BigInt(1)}}), nilmult::DomainError);
  EXPECT_THROW(nilmult::invariant_factor_runs({{BigInt(3), BigInt(-1)}}), nilmult::DomainError);
}

TEST(InvariantFactors, HugeMultiplicitiesStayRunLength) {
  BigInt huge("1000000000000000000000000");
  auto runs = nilmult::invariant_factor_runs({{BigInt(9), huge}, {BigInt(3), huge + 5}});
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].order, 3);
  EXPECT_EQ(runs[0].multiplicity, huge + 5);
  EXPECT_EQ(runs[1].order, 9);
  EXPECT_EQ(runs[1].multiplicity, huge);
}

TEST(InvariantFactors, AgreesWithPrimeFactorization) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<unsigned long> order(2, 360);
  std::uniform_int_distribution<int> count(1, 6);
  for (int t = 0; t < 300; ++t) {
    std::vector<unsigned long> orders(count(rng));
    std::vector<CyclicSummand> summands;
    for (auto& o : orders) {
      o = order(rng);
      summands.push_back({BigInt(o), BigInt(1)});
    }
    EXPECT_EQ(expand(nilmult::invariant_factor_runs(summands)), factors_by_primes(orders));
  }
}

TEST(AbelianInvariants, EqualityIsIsomorphism) {
  AbelianInvariants a(BigInt(2), {{BigInt(6), BigInt(1)}});
  AbelianInvariants b(BigInt(2), {{BigInt(3), BigInt(1)}, {BigInt(2), BigInt(1)}});
  AbelianInvariants c(BigInt(1), {{BigInt(6), BigInt(1)}});
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
  EXPECT_EQ(a.multiplicity_of(BigInt(6)), 1);
  EXPECT_EQ(b.multiplicity_of(BigInt(6)), 0);
}

TEST(AbelianInvariants, Rendering) {
  EXPECT_EQ(AbelianInvariants::trivial().to_string(), "0");
  EXPECT_TRUE(AbelianInvariants::trivial().is_trivial());
  EXPECT_EQ(AbelianInvariants(BigInt(5), {}).to_string(), "Z^5");
  EXPECT_EQ(AbelianInvariants(BigInt(1), {{BigInt(3), BigInt(2)}, {BigInt(9), BigInt(1)}}).to_string(), "Z + Z_3^2 + Z_9");
  EXPECT_THROW(AbelianInvariants(BigInt(-1), {}), nilmult::DomainError);
}
