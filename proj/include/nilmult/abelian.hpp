#pragma once

// Finitely generated abelian groups Z^r + Z_{n_1}^{k_1} + ... with
// multiplicities kept as big integers (iterated Witt counts are far beyond
// native widths), and the ascending invariant-factor chain used as the
// isomorphism test.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nilmult/bigint.hpp"
#include "nilmult/errors.hpp"

namespace nilmult {

struct CyclicSummand {
  BigInt order;
  BigInt multiplicity;

  bool operator==(const CyclicSummand&) const = default;
};

namespace detail {

/// Pairwise coprime numbers q_1, q_2, ... such that every input is a
/// product of powers of them, with each q's prime exponents in a fixed
/// ratio across all inputs (factor refinement; no factoring needed).
inline std::vector<BigInt> coprime_base(const std::vector<BigInt>& numbers) {
  std::vector<BigInt> base;
  std::vector<BigInt> work;
  auto refine = [&]() {
    while (!work.empty()) {
      BigInt x = work.back();
      work.pop_back();
      if (x == 1) continue;
      bool merged = false;
      for (std::size_t i = 0; i < base.size(); ++i) {
        BigInt g = gcd(x, base[i]);
        if (g == 1) continue;
        BigInt b = base[i];
        base.erase(base.begin() + static_cast<std::ptrdiff_t>(i));
        work.push_back(g);
        work.push_back(b / g);
        work.push_back(x / g);
        merged = true;
        break;
      }
      if (!merged) base.push_back(x);
    }
  };
  for (const auto& n : numbers) {
    work.push_back(n);
    refine();
  }
  // Split base elements until each input is q-pure: n = q^e * rest, gcd(rest, q) = 1.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& n : numbers) {
      for (std::size_t i = 0; i < base.size() && !changed; ++i) {
        BigInt rest = n;
        while (mpz_divisible_p(rest.get_mpz_t(), base[i].get_mpz_t())) rest /= base[i];
        BigInt g = gcd(rest, base[i]);
        if (g == 1) continue;
        BigInt q = base[i];
        base.erase(base.begin() + static_cast<std::ptrdiff_t>(i));
        work.push_back(g);
        work.push_back(q / g);
        refine();
        changed = true;
      }
      if (changed) break;
    }
  }
  std::sort(base.begin(), base.end());
  return base;
}

}  // namespace detail

/// Ascending invariant factors f_1 | f_2 | ... of the torsion part, run-length
/// encoded as (factor, count). Orders <= 1 and zero multiplicities vanish.
inline std::vector<CyclicSummand> invariant_factor_runs(const std::vector<CyclicSummand>& summands) {
  std::vector<CyclicSummand> parts;
  for (const auto& s : summands) {
    if (sgn(s.multiplicity) < 0) throw DomainError("negative multiplicity in abelian group");
    if (s.order < 0) throw DomainError("negative cyclic order");
    if (s.order == 0) throw DomainError("order 0 is not a torsion summand; count it in the free rank");
    if (s.order == 1 || sgn(s.multiplicity) == 0) continue;
    parts.push_back(s);
  }
  if (parts.empty()) return {};

  std::vector<BigInt> orders;
  for (const auto& p : parts) orders.push_back(p.order);
  auto base = detail::coprime_base(orders);

  // For each base element: descending runs of (exponent, count).
  struct Run {
    unsigned long exponent;
    BigInt count;
  };
  std::vector<std::vector<Run>> runs(base.size());
  for (std::size_t q = 0; q < base.size(); ++q) {
    std::map<unsigned long, BigInt, std::greater<>> by_exp;
    for (const auto& p : parts) {
      BigInt n = p.order;
      unsigned long e = 0;
      while (mpz_divisible_p(n.get_mpz_t(), base[q].get_mpz_t())) {
        n /= base[q];
        ++e;
      }
      if (e > 0) by_exp[e] += p.multiplicity;
    }
    for (auto& [e, c] : by_exp) runs[q].push_back(Run{e, c});
  }

  // Walk all run lists from the top (largest factor) down together.
  std::vector<std::size_t> pos(base.size(), 0);
  std::vector<BigInt> left(base.size());
  for (std::size_t q = 0; q < base.size(); ++q) left[q] = runs[q].empty() ? BigInt(0) : runs[q][0].count;
  std::vector<CyclicSummand> descending;
  while (true) {
    BigInt step = 0;
    for (std::size_t q = 0; q < base.size(); ++q)
      if (pos[q] < runs[q].size() && (step == 0 || left[q] < step)) step = left[q];
    if (step == 0) break;
    BigInt factor = 1;
    for (std::size_t q = 0; q < base.size(); ++q) {
      if (pos[q] >= runs[q].size()) continue;
      BigInt pw;
      mpz_pow_ui(pw.get_mpz_t(), base[q].get_mpz_t(), runs[q][pos[q]].exponent);
      factor *= pw;
      left[q] -= step;
      if (left[q] == 0 && ++pos[q] < runs[q].size()) left[q] = runs[q][pos[q]].count;
    }
    if (!descending.empty() && descending.back().order == factor)
      descending.back().multiplicity += step;
    else
      descending.push_back(CyclicSummand{factor, step});
  }
  std::reverse(descending.begin(), descending.end());
  return descending;
}

/// Z^free_rank + torsion summands as presented. Equality is isomorphism:
/// same free rank and same canonical invariant-factor chain.
class AbelianInvariants {
 public:
  AbelianInvariants() = default;
  AbelianInvariants(BigInt free_rank, std::vector<CyclicSummand> torsion)
      : free_rank_(std::move(free_rank)), torsion_(std::move(torsion)) {
    if (sgn(free_rank_) < 0) throw DomainError("negative free rank");
    canonical_ = invariant_factor_runs(torsion_);
  }

  static AbelianInvariants trivial() { return AbelianInvariants(); }

  const BigInt& free_rank() const noexcept { return free_rank_; }
  const std::vector<CyclicSummand>& torsion() const noexcept { return torsion_; }
  const std::vector<CyclicSummand>& canonical() const noexcept { return canonical_; }

  bool is_trivial() const noexcept { return sgn(free_rank_) == 0 && canonical_.empty(); }

  /// Total number of invariant factors > 1.
  BigInt torsion_count() const {
    BigInt total = 0;
    for (const auto& r : canonical_) total += r.multiplicity;
    return total;
  }

  /// Multiplicity of Z_order among the presented summands.
  BigInt multiplicity_of(const BigInt& order) const {
    BigInt total = 0;
    for (const auto& s : torsion_)
      if (s.order == order) total += s.multiplicity;
    return total;
  }

  friend bool operator==(const AbelianInvariants& a, const AbelianInvariants& b) {
    return a.free_rank_ == b.free_rank_ && a.canonical_ == b.canonical_;
  }

  /// e.g. "Z^5 + Z_3^2 + Z_9"; the trivial group renders as "0".
  std::string to_string() const {
    std::string out;
    auto append = [&out](const std::string& item) {
      if (!out.empty()) out += " + ";
      out += item;
    };
    if (sgn(free_rank_) > 0) append(free_rank_ == 1 ? "Z" : "Z^" + to_decimal(free_rank_));
    for (const auto& r : canonical_) {
      std::string item = "Z_" + to_decimal(r.order);
      if (r.multiplicity != 1) item += "^" + to_decimal(r.multiplicity);
      append(item);
    }
    return out.empty() ? "0" : out;
  }

 private:
  BigInt free_rank_ = 0;
  std::vector<CyclicSummand> torsion_;
  std::vector<CyclicSummand> canonical_;
};

}  // namespace nilmult
