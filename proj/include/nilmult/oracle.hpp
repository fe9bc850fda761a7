#pragma once

// Independent check of the closed forms. The c-nilpotent multiplier of the
// nth nilpotent product is gamma_{c+1}(F) / rho_{c+1}(S) gamma_{c+n+1}(F),
// a quotient of the free abelian group on the basic commutators of weights
// c+1 .. c+n by a relation lattice. The lattice is built two ways:
//   basis mode:     r_j times every basic commutator of weight c+i on letters
//                   1..m+j that contains letter m+j;
//   collected mode: exponent vectors of [x_{m+j}^{r_j}, z_1, ..., z_k] for all
//                   letter tuples, c <= k <= c+n-1, collected in class c+n;
// and reduced to invariants by Smith normal form.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nilmult/abelian.hpp"
#include "nilmult/errors.hpp"
#include "nilmult/fng.hpp"
#include "nilmult/hall.hpp"
#include "nilmult/multipliers.hpp"
#include "nilmult/smith.hpp"

namespace nilmult {

enum class Provenance { basis, collected };

struct RelationMatrix {
  std::size_t ambient_rank = 0;
  std::vector<SparseColumn> columns;
  Provenance provenance = Provenance::basis;
};

struct OracleOptions {
  std::size_t basis_cap = kDefaultBasisCap;
  std::size_t word_cap = kDefaultWordCap;
  unsigned threads = 0;  // 0: hardware concurrency
};

namespace detail {

inline void require_class(const GroupSpec& spec, unsigned c) {
  if (c < spec.product_class)
    throw ValidationError({"class c = " + std::to_string(c) + " is less than the product class n = " +
                           std::to_string(spec.product_class)});
}

inline std::size_t ambient_rank_of(const HallBasis& basis, unsigned lo, unsigned hi) {
  return basis.layer(hi).second - basis.layer(lo).first;
}

}  // namespace detail

inline RelationMatrix build_relations_basis(const GroupSpec& spec, unsigned c,
                                            const OracleOptions& options = {}) {
  validate_spec(spec, ClassRow{{c}}).require();
  RelationMatrix m;
  m.provenance = Provenance::basis;
  const unsigned d = spec.letters();
  if (d == 0) return m;
  const unsigned n = spec.product_class;
  HallBasis basis = generate_basis(d, c + n, options.basis_cap);
  const std::size_t first = basis.layer(c + 1).first;
  m.ambient_rank = detail::ambient_rank_of(basis, c + 1, c + n);
  for (unsigned i = 1; i <= n; ++i) {
    auto [lo, hi] = basis.layer(c + i);
    for (std::size_t j = 1; j <= spec.orders.size(); ++j) {
      const unsigned letter = spec.free_rank + static_cast<unsigned>(j);
      for (std::size_t b = lo; b < hi; ++b) {
        if (basis[b].max_letter() != letter) continue;
        m.columns.push_back(SparseColumn{{b - first, spec.orders[j - 1]}});
      }
    }
  }
  return m;
}

/// Collected-mode relations. Accepts arbitrary orders (no divisibility
/// chain needed); coprimality is not required by the construction itself.
inline RelationMatrix build_relations_collected(const GroupSpec& spec, unsigned c,
                                                const OracleOptions& options = {}) {
  if (spec.product_class == 0) throw ValidationError({"product class n must be at least 1"});
  detail::require_class(spec, c);
  for (const auto& r : spec.orders)
    if (r < 2) throw ValidationError({"order " + to_decimal(r) + " must be at least 2"});
  RelationMatrix m;
  m.provenance = Provenance::collected;
  const unsigned d = spec.letters();
  if (d == 0) return m;
  const unsigned n = spec.product_class;
  NilpotentContext ctx(d, c + n, options.basis_cap, options.word_cap);
  const auto& basis = ctx.basis();
  const std::size_t first = basis.layer(c + 1).first;
  m.ambient_rank = detail::ambient_rank_of(basis, c + 1, c + n);

  std::vector<NormalWord> letters;
  for (unsigned z = 1; z <= d; ++z) letters.push_back(generator(ctx, z));

  // One task per (torsion letter, first entry); each walks its subtree of
  // tuples depth first, so prefixes are collected once.
  struct Task {
    std::size_t j;
    unsigned z1;
    std::vector<std::vector<NormalWord>> by_length;  // index k - c
  };
  std::vector<Task> tasks;
  for (std::size_t j = 0; j < spec.orders.size(); ++j)
    for (unsigned z = 0; z < d; ++z) tasks.push_back(Task{j, z, std::vector<std::vector<NormalWord>>(n)});

  auto run_task = [&](Task& task) {
    const unsigned letter = spec.free_rank + static_cast<unsigned>(task.j) + 1;
    NormalWord head = generator(ctx, letter, spec.orders[task.j]);
    auto walk = [&](auto&& self, const NormalWord& acc, unsigned k) -> void {
      if (k >= c) task.by_length[k - c].push_back(acc);
      if (k + 1 > c + n - 1) return;
      for (unsigned z = 0; z < d; ++z) self(self, commutator(acc, letters[z], ctx), k + 1);
    };
    walk(walk, commutator(head, letters[task.z1], ctx), 1);
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
  if (threads <= 1) {
    for (auto& t : tasks) run_task(t);
  } else {
    std::size_t next = 0;
    std::mutex mu;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        while (true) {
          std::size_t mine;
          {
            std::lock_guard lock(mu);
            if (failure || next >= tasks.size()) return;
            mine = next++;
          }
          try {
            run_task(tasks[mine]);
          } catch (...) {
            std::lock_guard lock(mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Deterministic order: torsion letter, then length, then tuple.
  for (std::size_t j = 0; j < spec.orders.size(); ++j) {
    for (unsigned len = 0; len < n; ++len) {
      for (const auto& task : tasks) {
        if (task.j != j) continue;
        for (const auto& w : task.by_length[len]) {
          SparseColumn col;
          for (const auto& t : w.terms()) {
            if (basis.weight(t.index) <= c)
              throw InconsistencyError("collected relation has a component of weight <= c");
            col.emplace_back(t.index - first, t.exponent);
          }
          m.columns.push_back(std::move(col));
        }
      }
    }
  }
  return m;
}

inline std::vector<BigInt> smith_normal_form(const RelationMatrix& m) {
  return smith_normal_form(m.ambient_rank, m.columns);
}

inline AbelianInvariants abelian_quotient(std::size_t ambient_rank, const RelationMatrix& m) {
  if (ambient_rank != m.ambient_rank) throw DomainError("ambient rank does not match the relation matrix");
  for (const auto& col : m.columns)
    for (const auto& [r, v] : col)
      if (r >= ambient_rank) throw DomainError("relation column longer than the ambient rank");
  auto factors = smith_normal_form(ambient_rank, m.columns);
  std::vector<CyclicSummand> torsion;
  for (const auto& f : factors) {
    if (f == 1) continue;
    if (!torsion.empty() && torsion.back().order == f)
      torsion.back().multiplicity += 1;
    else
      torsion.push_back(CyclicSummand{f, BigInt(1)});
  }
  return AbelianInvariants(BigInt(static_cast<unsigned long>(ambient_rank - factors.size())), std::move(torsion));
}

inline AbelianInvariants abelian_quotient(const RelationMatrix& m) { return abelian_quotient(m.ambient_rank, m); }

enum class OracleMode { basis, collected, both };

struct VerificationReport {
  AbelianInvariants formula;
  std::optional<AbelianInvariants> oracle_basis;
  std::optional<AbelianInvariants> oracle_collected;
  bool equal = false;
  std::size_t ambient_rank = 0;
  std::optional<std::size_t> basis_columns;
  std::optional<std::size_t> collected_columns;
  double runtime_ms = 0;
};

namespace detail {

inline void finish(VerificationReport& report) {
  report.equal = true;
  if (report.oracle_basis && !(*report.oracle_basis == report.formula)) report.equal = false;
  if (report.oracle_collected && !(*report.oracle_collected == report.formula)) report.equal = false;
}

}  // namespace detail

inline VerificationReport verify_formula(const GroupSpec& spec, unsigned c, OracleMode mode,
                                         const OracleOptions& options = {}) {
  auto start = std::chrono::steady_clock::now();
  VerificationReport report;
  report.formula = nilpotent_multiplier(spec, c);
  if (mode != OracleMode::collected) {
    auto m = build_relations_basis(spec, c, options);
    report.ambient_rank = m.ambient_rank;
    report.basis_columns = m.columns.size();
    report.oracle_basis = abelian_quotient(m);
  }
  if (mode != OracleMode::basis) {
    auto m = build_relations_collected(spec, c, options);
    report.ambient_rank = m.ambient_rank;
    report.collected_columns = m.columns.size();
    report.oracle_collected = abelian_quotient(m);
  }
  detail::finish(report);
  report.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

/// Three factors of arbitrary orders: the three-factor formula against the
/// collected-mode oracle (basis mode needs a divisibility chain).
inline VerificationReport verify_three_factor(const ThreeFactorSpec& spec, unsigned c,
                                              const OracleOptions& options = {}) {
  auto start = std::chrono::steady_clock::now();
  VerificationReport report;
  report.formula = three_factor_multiplier(spec, c);
  GroupSpec g{0, {spec.orders[0], spec.orders[1], spec.orders[2]}, spec.product_class};
  auto m = build_relations_collected(g, c, options);
  report.ambient_rank = m.ambient_rank;
  report.collected_columns = m.columns.size();
  report.oracle_collected = abelian_quotient(m);
  detail::finish(report);
  report.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace nilmult
