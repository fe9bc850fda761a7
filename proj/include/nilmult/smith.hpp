#pragma once

// Exact Smith normal form of a sparse integer matrix given by columns.
// Pivots are chosen by smallest magnitude, then by Markowitz cost, then by
// position, so the reduction is deterministic.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "nilmult/abelian.hpp"
#include "nilmult/bigint.hpp"
#include "nilmult/errors.hpp"

namespace nilmult {

/// Sorted (row, value) pairs; zero values are not stored.
using SparseColumn = std::vector<std::pair<std::size_t, BigInt>>;

namespace detail {

class SparseReducer {
 public:
  SparseReducer(std::size_t rows, const std::vector<SparseColumn>& columns)
      : rows_(rows), cols_(columns.size()) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      for (const auto& [r, v] : columns[c]) {
        if (r >= rows) throw DomainError("relation column entry outside the ambient rank");
        if (sgn(v) == 0) continue;
        rows_[r][c] += v;
        if (sgn(rows_[r][c]) == 0) {
          rows_[r].erase(c);
          cols_[c].erase(r);
        } else {
          cols_[c].insert(r);
        }
      }
    }
  }

  /// Diagonal entries (absolute values, all nonzero) of a diagonalization.
  std::vector<BigInt> diagonalize() {
    std::vector<BigInt> diagonal;
    peel_isolated(diagonal);
    while (true) {
      auto pivot = choose_pivot();
      if (!pivot) break;
      auto [r, c] = *pivot;
      while (true) {
        auto next = clear_column(r, c);
        if (!next) next = clear_row(r, c);
        if (!next) break;
        r = next->first;
        c = next->second;
      }
      diagonal.push_back(abs(rows_[r][c]));
      rows_[r].clear();
      cols_[c].clear();
      peel_isolated(diagonal);
    }
    return diagonal;
  }

 private:
  using Position = std::pair<std::size_t, std::size_t>;

  void peel_isolated(std::vector<BigInt>& diagonal) {
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      if (cols_[c].size() != 1) continue;
      std::size_t r = *cols_[c].begin();
      if (rows_[r].size() != 1) continue;
      diagonal.push_back(abs(rows_[r].begin()->second));
      rows_[r].clear();
      cols_[c].clear();
    }
  }

  std::optional<Position> choose_pivot() const {
    std::optional<Position> best;
    const BigInt* best_value = nullptr;
    std::size_t best_cost = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      for (const auto& [c, v] : rows_[r]) {
        std::size_t cost = (rows_[r].size() - 1) * (cols_[c].size() - 1);
        int cmp = best_value ? mpz_cmpabs(v.get_mpz_t(), best_value->get_mpz_t()) : -1;
        if (cmp < 0 || (cmp == 0 && cost < best_cost)) {
          best = Position{r, c};
          best_value = &v;
          best_cost = cost;
        }
      }
    }
    return best;
  }

  // Row operations clearing column c below/above the pivot. Returns a new,
  // strictly smaller pivot if a remainder survives.
  std::optional<Position> clear_column(std::size_t r, std::size_t c) {
    std::vector<std::size_t> others(cols_[c].begin(), cols_[c].end());
    std::optional<Position> smaller;
    for (auto k : others) {
      if (k == r) continue;
      BigInt q;
      mpz_fdiv_q(q.get_mpz_t(), rows_[k][c].get_mpz_t(), rows_[r][c].get_mpz_t());
      add_row_multiple(k, r, q);
      auto it = rows_[k].find(c);
      if (it != rows_[k].end() && !smaller) smaller = Position{k, c};
    }
    return smaller;
  }

  std::optional<Position> clear_row(std::size_t r, std::size_t c) {
    std::vector<std::size_t> others;
    for (const auto& [l, v] : rows_[r]) others.push_back(l);
    std::optional<Position> smaller;
    for (auto l : others) {
      if (l == c) continue;
      BigInt q;
      mpz_fdiv_q(q.get_mpz_t(), rows_[r][l].get_mpz_t(), rows_[r][c].get_mpz_t());
      add_column_multiple(l, c, q);
      auto it = rows_[r].find(l);
      if (it != rows_[r].end() && !smaller) smaller = Position{r, l};
    }
    return smaller;
  }

  // row_k -= q * row_r
  void add_row_multiple(std::size_t k, std::size_t r, const BigInt& q) {
    if (sgn(q) == 0) return;
    std::vector<std::pair<std::size_t, BigInt>> src(rows_[r].begin(), rows_[r].end());
    for (const auto& [c, v] : src) {
      BigInt& target = rows_[k][c];
      mpz_submul(target.get_mpz_t(), q.get_mpz_t(), v.get_mpz_t());
      if (sgn(target) == 0) {
        rows_[k].erase(c);
        cols_[c].erase(k);
      } else {
        cols_[c].insert(k);
      }
    }
  }

  // col_l -= q * col_c
  void add_column_multiple(std::size_t l, std::size_t c, const BigInt& q) {
    if (sgn(q) == 0) return;
    std::vector<std::size_t> src(cols_[c].begin(), cols_[c].end());
    for (auto r : src) {
      BigInt v = rows_[r][c];
      BigInt& target = rows_[r][l];
      mpz_submul(target.get_mpz_t(), q.get_mpz_t(), v.get_mpz_t());
      if (sgn(target) == 0) {
        rows_[r].erase(l);
        cols_[l].erase(r);
      } else {
        cols_[l].insert(r);
      }
    }
  }

  std::vector<std::map<std::size_t, BigInt>> rows_;
  std::vector<std::set<std::size_t>> cols_;
};

}  // namespace detail

/// Nonzero invariant factors f_1 | f_2 | ... of the lattice spanned by the
/// columns, ascending, including unit factors.
inline std::vector<BigInt> smith_normal_form(std::size_t rows, const std::vector<SparseColumn>& columns) {
  detail::SparseReducer reducer(rows, columns);
  auto diagonal = reducer.diagonalize();
  std::vector<CyclicSummand> parts;
  for (auto& d : diagonal) parts.push_back(CyclicSummand{d, BigInt(1)});
  auto runs = invariant_factor_runs(parts);
  BigInt nontrivial = 0;
  for (const auto& r : runs) nontrivial += r.multiplicity;
  std::vector<BigInt> factors(diagonal.size() - nontrivial.get_ui(), BigInt(1));
  for (const auto& r : runs)
    for (unsigned long i = 0; i < r.multiplicity.get_ui(); ++i) factors.push_back(r.order);
  return factors;
}

}  // namespace nilmult
