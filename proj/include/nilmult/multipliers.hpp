#pragma once

// Closed forms for the c-nilpotent and polynilpotent multipliers of
//   G = Z *n ... *n Z (m copies) *n Z_{r_1} *n ... *n Z_{r_t},
// r_{i+1} | r_i, gcd(p, r_1) = 1 for all primes p <= n, plus the
// three-factor formulas for arbitrary orders and an audit of the printed
// two-row expression.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilmult/abelian.hpp"
#include "nilmult/bigint.hpp"
#include "nilmult/errors.hpp"
#include "nilmult/witt.hpp"

namespace nilmult {

struct GroupSpec {
  unsigned free_rank = 0;      // m
  std::vector<BigInt> orders;  // r_1 .. r_t
  unsigned product_class = 1;  // n

  unsigned letters() const { return free_rank + static_cast<unsigned>(orders.size()); }
};

struct ClassRow {
  std::vector<unsigned> classes;  // c_1 .. c_s
};

enum class OrderMode {
  chain,      // r_{i+1} | r_i, coprimality checked on r_1
  arbitrary,  // any orders, coprimality checked on every order
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
  void require() const {
    if (!ok()) throw ValidationError(violations);
  }
};

inline ValidationReport validate_spec(const GroupSpec& spec, const ClassRow& row, OrderMode mode = OrderMode::chain) {
  ValidationReport report;
  auto& v = report.violations;
  if (spec.product_class == 0) v.push_back("product class n must be at least 1");
  if (row.classes.empty()) v.push_back("class row must be nonempty");
  for (std::size_t i = 0; i < row.classes.size(); ++i)
    if (row.classes[i] == 0) v.push_back("class c_" + std::to_string(i + 1) + " must be at least 1");
  if (!row.classes.empty() && spec.product_class > 0 && row.classes[0] < spec.product_class)
    v.push_back("c_1 = " + std::to_string(row.classes[0]) + " is less than the product class n = " +
                std::to_string(spec.product_class));
  for (std::size_t i = 0; i < spec.orders.size(); ++i)
    if (spec.orders[i] < 2) v.push_back("order r_" + std::to_string(i + 1) + " = " + to_decimal(spec.orders[i]) +
                                        " must be at least 2");
  if (mode == OrderMode::chain) {
    for (std::size_t i = 0; i + 1 < spec.orders.size(); ++i) {
      const auto& a = spec.orders[i];
      const auto& b = spec.orders[i + 1];
      if (a >= 2 && b >= 2 && !mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()))
        v.push_back("divisibility chain broken: r_" + std::to_string(i + 2) + " = " + to_decimal(b) +
                    " does not divide r_" + std::to_string(i + 1) + " = " + to_decimal(a));
    }
  }
  const std::size_t checked = (mode == OrderMode::chain) ? std::min<std::size_t>(1, spec.orders.size())
                                                         : spec.orders.size();
  for (auto p : primes_up_to(spec.product_class)) {
    for (std::size_t i = 0; i < checked; ++i) {
      if (spec.orders[i] >= 2 && mpz_divisible_ui_p(spec.orders[i].get_mpz_t(), p))
        v.push_back("coprimality hypothesis fails: gcd(" + std::to_string(p) + ", r_" + std::to_string(i + 1) +
                    " = " + to_decimal(spec.orders[i]) + ") != 1 for prime " + std::to_string(p) +
                    " <= n = " + std::to_string(spec.product_class));
    }
  }
  return report;
}

namespace detail {

// Z^{D(m)} + sum_j Z_{r_j}^{D(m+j) - D(m+j-1)} for a counting function D.
template <class Count>
AbelianInvariants assemble(const GroupSpec& spec, Count&& count) {
  BigInt prev = count(BigInt(spec.free_rank));
  BigInt free_rank = prev;
  std::vector<CyclicSummand> torsion;
  for (std::size_t j = 0; j < spec.orders.size(); ++j) {
    BigInt next = count(BigInt(spec.free_rank + static_cast<unsigned long>(j) + 1));
    BigInt mult = next - prev;
    if (sgn(mult) < 0) throw InconsistencyError("Witt counts decreased in the letter count");
    if (sgn(mult) > 0) torsion.push_back(CyclicSummand{spec.orders[j], mult});
    prev = std::move(next);
  }
  return AbelianInvariants(std::move(free_rank), std::move(torsion));
}

}  // namespace detail

/// c-nilpotent multiplier: d_k = sum_{i=1..n} chi_{c+i}(k).
inline AbelianInvariants nilpotent_multiplier(const GroupSpec& spec, unsigned c) {
  validate_spec(spec, ClassRow{{c}}).require();
  const unsigned n = spec.product_class;
  return detail::assemble(spec, [&](const BigInt& k) { return sum_chi(c, n, k); });
}

/// Iterated Witt count D(k) = chi_{c_s+1}( ... chi_{c_2+1}(sum_chi(c_1, n, k)) ... ).
inline BigInt polynilpotent_count(const ClassRow& row, unsigned n, const BigInt& k) {
  BigInt d = sum_chi(row.classes.at(0), n, k);
  for (std::size_t i = 1; i < row.classes.size(); ++i) d = witt_chi(row.classes[i] + 1, d);
  return d;
}

inline AbelianInvariants polynilpotent_multiplier(const GroupSpec& spec, const ClassRow& row) {
  validate_spec(spec, row).require();
  return detail::assemble(spec, [&](const BigInt& k) { return polynilpotent_count(row, spec.product_class, k); });
}

/// Polynilpotent multiplier obtained one class at a time: N_{c_1}M(G) first,
/// then each later class applies the n = 1 formula to the previous result,
/// read as a direct product of its cyclic summands in presented order.
inline AbelianInvariants polynilpotent_multiplier_stepwise(const GroupSpec& spec, const ClassRow& row) {
  validate_spec(spec, row).require();
  AbelianInvariants current = nilpotent_multiplier(spec, row.classes[0]);
  for (std::size_t s = 1; s < row.classes.size(); ++s) {
    const unsigned c = row.classes[s];
    // Runs of equal orders telescope: a run of length L starting after B
    // factors contributes chi(m + B + L) - chi(m + B).
    BigInt offset = current.free_rank();
    BigInt prev = witt_chi(c + 1, offset);
    BigInt free_rank = prev;
    std::vector<CyclicSummand> torsion;
    for (const auto& run : current.torsion()) {
      offset += run.multiplicity;
      BigInt next = witt_chi(c + 1, offset);
      if (next != prev) torsion.push_back(CyclicSummand{run.order, next - prev});
      prev = std::move(next);
    }
    current = AbelianInvariants(std::move(free_rank), std::move(torsion));
  }
  return current;
}

// ---------------------------------------------------------------------------
// Three cyclic factors of arbitrary orders s_1, s_2, s_3.

struct ThreeFactorSpec {
  std::array<BigInt, 3> orders;
  unsigned product_class = 1;
};

inline ValidationReport validate_three_factor(const ThreeFactorSpec& spec, const ClassRow& row) {
  GroupSpec g{0, {spec.orders[0], spec.orders[1], spec.orders[2]}, spec.product_class};
  return validate_spec(g, row, OrderMode::arbitrary);
}

namespace detail {

inline BigInt gcd3(const BigInt& a, const BigInt& b, const BigInt& c) { return gcd(gcd(a, b), c); }

inline void add_summand(std::vector<CyclicSummand>& out, const BigInt& order, const BigInt& mult) {
  if (order > 1 && sgn(mult) > 0) out.push_back(CyclicSummand{order, mult});
}

}  // namespace detail

/// Z_a^E2 + Z_b^E2 + Z_g^E2 + Z_d^(E3 - 3 E2) with a = (s1,s2), b = (s2,s3),
/// g = (s1,s3), d = (s1,s2,s3), E_k = sum_chi(c, n, k).
inline AbelianInvariants three_factor_multiplier(const ThreeFactorSpec& spec, unsigned c) {
  validate_three_factor(spec, ClassRow{{c}}).require();
  const auto& s = spec.orders;
  const unsigned n = spec.product_class;
  const BigInt e2 = sum_chi(c, n, 2UL);
  const BigInt e3 = sum_chi(c, n, 3UL);
  std::vector<CyclicSummand> torsion;
  detail::add_summand(torsion, gcd(s[0], s[1]), e2);
  detail::add_summand(torsion, gcd(s[1], s[2]), e2);
  detail::add_summand(torsion, gcd(s[0], s[2]), e2);
  detail::add_summand(torsion, detail::gcd3(s[0], s[1], s[2]), e3 - 3 * e2);
  return AbelianInvariants(BigInt(0), std::move(torsion));
}

struct PrintedSummand {
  std::string label;  // e.g. "(alpha,beta)"
  BigInt order;
  std::size_t exponent_index;  // 0-based index into e_1..e_6
};

struct TwoRowAudit {
  std::array<BigInt, 6> e;              // e_1 .. e_6 as printed
  std::vector<PrintedSummand> summands;  // the 13 printed summands
  BigInt printed_total;                  // sum of printed multiplicities
  BigInt iterated_total;                  // torsion count of the iterated-chi formula for equal orders
  bool equal_orders = false;             // s1 = s2 = s3, where the two must agree
  std::vector<std::string> findings;
  bool negative_exponent = false;

  bool passed() const noexcept { return findings.empty(); }
};

struct TwoRowResult {
  std::optional<AbelianInvariants> group;  // withheld when a used exponent is negative
  TwoRowAudit audit;
};

/// Evaluates the printed two-row expression term by term (every c inside
/// e_2, e_4, e_6 read as c_1) and audits it against the iterated-chi formula.
inline TwoRowResult three_factor_two_row(const ThreeFactorSpec& spec, unsigned c1, unsigned c2) {
  validate_three_factor(spec, ClassRow{{c1, c2}}).require();
  const auto& s = spec.orders;
  const unsigned n = spec.product_class;
  const BigInt s2 = sum_chi(c1, n, 2UL);
  const BigInt s3 = sum_chi(c1, n, 3UL);
  auto chi = [&](const BigInt& d) {
    if (sgn(d) < 0) throw InconsistencyError("printed formula evaluates chi at a negative letter count");
    return witt_chi(c2 + 1, d);
  };

  TwoRowResult result;
  auto& audit = result.audit;
  auto& e = audit.e;
  e[0] = chi(s2);
  e[1] = chi(s3 - 3 * s2);
  e[2] = chi(2 * s2) - 2 * e[0];
  e[3] = chi(s3 - 2 * s2) - e[0] - e[1];
  e[4] = chi(3 * s2) - 3 * chi(2 * s2);
  e[5] = chi(s3 - s2) - chi(2 * s2) - chi(s3 - 2 * s2);

  const BigInt a = gcd(s[0], s[1]);
  const BigInt b = gcd(s[1], s[2]);
  const BigInt g = gcd(s[0], s[2]);
  const BigInt d = detail::gcd3(s[0], s[1], s[2]);
  audit.summands = {
      {"alpha", a, 0},
      {"beta", b, 0},
      {"gamma", g, 0},
      {"delta", d, 1},
      {"(alpha,beta)", gcd(a, b), 2},
      {"(alpha,gamma)", gcd(a, g), 2},
      {"(beta,gamma)", gcd(b, g), 2},
      {"(alpha,delta)", gcd(a, d), 3},
      {"(beta,delta)", gcd(b, d), 3},
      {"(gamma,delta)", gcd(g, d), 3},
      {"(alpha,beta,gamma)", detail::gcd3(a, b, g), 4},
      {"(alpha,beta,delta)", detail::gcd3(a, b, d), 5},
      {"(beta,gamma,delta)", detail::gcd3(b, g, d), 5},
  };

  audit.printed_total = 0;
  std::array<bool, 6> flagged{};
  for (const auto& sm : audit.summands) {
    audit.printed_total += e[sm.exponent_index];
    if (sm.order > 1 && sgn(e[sm.exponent_index]) < 0) flagged[sm.exponent_index] = true;
  }
  for (std::size_t i = 0; i < 6; ++i) {
    if (!flagged[i]) continue;
    audit.negative_exponent = true;
    audit.findings.push_back("e_" + std::to_string(i + 1) + " = " + to_decimal(e[i]) +
                             " is negative on a nontrivial summand");
  }

  // Equal orders r collapse the group to m = 0, orders (r, r, r); the torsion
  // count there does not depend on r.
  audit.iterated_total = polynilpotent_count(ClassRow{{c1, c2}}, n, BigInt(3)) -
                        polynilpotent_count(ClassRow{{c1, c2}}, n, BigInt(0));
  audit.equal_orders = (s[0] == s[1] && s[1] == s[2]);
  if (audit.equal_orders && audit.printed_total != audit.iterated_total)
    audit.findings.push_back("printed total multiplicity " + to_decimal(audit.printed_total) +
                             " differs from the iterated-chi count " + to_decimal(audit.iterated_total) +
                             " for equal orders");

  if (!audit.negative_exponent) {
    std::vector<CyclicSummand> torsion;
    for (const auto& sm : audit.summands) detail::add_summand(torsion, sm.order, e[sm.exponent_index]);
    result.group = AbelianInvariants(BigInt(0), std::move(torsion));
  }
  return result;
}

}  // namespace nilmult
