#pragma once

// Truncated Magnus embedding x_i -> 1 + X_i of the free nilpotent group of
// class K into the free associative ring modulo words of length > K. The
// embedding is faithful on F / gamma_{K+1}(F), so it gives an exact model of
// multiplication that the collector uses to build its conjugation tables.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nilmult/bigint.hpp"
#include "nilmult/errors.hpp"
#include "nilmult/hall.hpp"

namespace nilmult::detail {

inline constexpr std::size_t kMaxWordSpace = std::size_t{1} << 20;

/// All words of length 0..K over d letters, indexed degree by degree with
/// each degree read as a base-d number.
class WordSpace {
 public:
  WordSpace() = default;
  WordSpace(unsigned letters, unsigned max_degree) : letters_(letters), max_degree_(max_degree) {
    std::size_t p = 1;
    std::size_t total = 0;
    for (unsigned L = 0; L <= max_degree; ++L) {
      offset_.push_back(total);
      pow_.push_back(p);
      total += p;
      if (total > kMaxWordSpace)
        throw BudgetError("Magnus word space on " + std::to_string(letters) + " letters through degree " +
                          std::to_string(max_degree) + " is too large");
      p *= letters;
    }
    offset_.push_back(total);
  }

  unsigned letters() const noexcept { return letters_; }
  unsigned max_degree() const noexcept { return max_degree_; }
  std::size_t size() const noexcept { return offset_.back(); }
  std::size_t offset(unsigned degree) const noexcept { return offset_[degree]; }
  std::size_t words(unsigned degree) const noexcept { return pow_[degree]; }

  std::uint32_t concat(unsigned da, std::size_t ia, unsigned db, std::size_t ib) const noexcept {
    return static_cast<std::uint32_t>(offset_[da + db] + ia * pow_[db] + ib);
  }

 private:
  unsigned letters_ = 0;
  unsigned max_degree_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<std::size_t> pow_;
};

struct SeriesTerm {
  std::uint32_t local = 0;  // index among words of this degree
  unsigned degree = 0;
  BigInt coef;
};

/// Sparse truncated series; terms sorted by (degree, local).
class Series {
 public:
  std::vector<SeriesTerm> terms;

  static Series one() {
    Series s;
    s.terms.push_back({0, 0, BigInt(1)});
    return s;
  }

  static Series letter(unsigned k) {  // 1 + X_k, k 0-based
    Series s = one();
    s.terms.push_back({k, 1, BigInt(1)});
    return s;
  }

  /// Homogeneous part of the given degree as (local index, coefficient).
  std::vector<std::pair<std::uint32_t, BigInt>> part(unsigned degree) const {
    std::vector<std::pair<std::uint32_t, BigInt>> out;
    for (const auto& t : terms)
      if (t.degree == degree) out.emplace_back(t.local, t.coef);
    return out;
  }

  bool operator==(const Series& other) const {
    if (terms.size() != other.terms.size()) return false;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].local != other.terms[i].local || terms[i].degree != other.terms[i].degree ||
          terms[i].coef != other.terms[i].coef)
        return false;
    }
    return true;
  }
};

class SeriesArithmetic {
 public:
  explicit SeriesArithmetic(const WordSpace& space) : space_(&space) {}

  Series multiply(const Series& a, const Series& b) const {
    auto& scratch = scratch_for();
    touched_.clear();
    const unsigned K = space_->max_degree();
    for (const auto& x : a.terms) {
      for (const auto& y : b.terms) {
        if (x.degree + y.degree > K) break;
        auto idx = space_->concat(x.degree, x.local, y.degree, y.local);
        if (!mark_[idx]) {
          mark_[idx] = true;
          touched_.push_back(idx);
        }
        mpz_addmul(scratch[idx].get_mpz_t(), x.coef.get_mpz_t(), y.coef.get_mpz_t());
      }
    }
    return gather(scratch);
  }

  Series add(const Series& a, const Series& b, long b_scale = 1) const {
    auto& scratch = scratch_for();
    touched_.clear();
    auto accumulate = [&](const Series& s, long scale) {
      for (const auto& t : s.terms) {
        auto idx = static_cast<std::uint32_t>(space_->offset(t.degree) + t.local);
        if (!mark_[idx]) {
          mark_[idx] = true;
          touched_.push_back(idx);
        }
        if (scale == 1)
          scratch[idx] += t.coef;
        else
          scratch[idx] += scale * t.coef;
      }
    };
    accumulate(a, 1);
    accumulate(b, b_scale);
    return gather(scratch);
  }

  Series scale(const Series& a, const BigInt& factor) const {
    Series out;
    if (factor == 0) return out;
    out.terms = a.terms;
    for (auto& t : out.terms) t.coef *= factor;
    return out;
  }

  /// s^e for s with constant term 1, using binomial expansion in s - 1;
  /// valid for every integer e.
  Series power(const Series& s, const BigInt& e) const {
    Series nilpart = add(s, Series::one(), -1);
    Series result = Series::one();
    if (e == 0 || nilpart.terms.empty()) return result;
    Series term = Series::one();
    BigInt binom = 1;
    for (unsigned k = 1; k <= space_->max_degree(); ++k) {
      term = multiply(term, nilpart);
      if (term.terms.empty()) break;
      // C(e, k) = C(e, k - 1) * (e - k + 1) / k, exact at every step.
      binom *= (e - (k - 1));
      mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), k);
      if (binom == 0) break;
      result = add(result, scale(term, binom));
    }
    return result;
  }

  Series inverse(const Series& s) const { return power(s, BigInt(-1)); }

 private:
  std::vector<BigInt>& scratch_for() const {
    if (scratch_.size() != space_->size()) {
      scratch_.assign(space_->size(), BigInt(0));
      mark_.assign(space_->size(), false);
    }
    return scratch_;
  }

  Series gather(std::vector<BigInt>& scratch) const {
    std::sort(touched_.begin(), touched_.end());
    Series out;
    out.terms.reserve(touched_.size());
    unsigned degree = 0;
    for (auto idx : touched_) {
      mark_[idx] = false;
      if (sgn(scratch[idx]) == 0) continue;
      while (idx >= space_->offset(degree + 1)) ++degree;
      out.terms.push_back({static_cast<std::uint32_t>(idx - space_->offset(degree)), degree, BigInt(0)});
      mpz_swap(out.terms.back().coef.get_mpz_t(), scratch[idx].get_mpz_t());
      scratch[idx] = 0;
    }
    return out;
  }

  const WordSpace* space_;
  // Per-thread scratch; a context may be shared across threads.
  static inline thread_local std::vector<BigInt> scratch_;
  static inline thread_local std::vector<bool> mark_;
  static inline thread_local std::vector<std::uint32_t> touched_;
};

/// Exact solver for "which combination of the weight-w Lie polynomials of
/// the basis equals this homogeneous vector". The unimodular row reduction
/// that brings the Lie-polynomial matrix to [I; 0] is recorded once and
/// replayed on each query.
class LayerSolver {
 public:
  LayerSolver() = default;

  // columns[b] = Lie polynomial of the b-th element of the layer, as
  // (local word index, coefficient) pairs.
  explicit LayerSolver(std::vector<std::vector<std::pair<std::uint32_t, BigInt>>> columns)
      : columns_(std::move(columns)) {
    const std::size_t k = columns_.size();
    for (const auto& col : columns_)
      for (const auto& [w, coef] : col) row_of_word_.emplace_back(w, 0);
    std::sort(row_of_word_.begin(), row_of_word_.end());
    row_of_word_.erase(std::unique(row_of_word_.begin(), row_of_word_.end(),
                                   [](auto& a, auto& b) { return a.first == b.first; }),
                       row_of_word_.end());
    for (std::size_t r = 0; r < row_of_word_.size(); ++r) row_of_word_[r].second = r;
    const std::size_t R = row_of_word_.size();
    if (R < k) throw InconsistencyError("Lie polynomials of a Hall layer are linearly dependent");

    std::vector<std::vector<BigInt>> a(R, std::vector<BigInt>(k, BigInt(0)));
    for (std::size_t c = 0; c < k; ++c)
      for (const auto& [w, coef] : columns_[c]) a[row(w)][c] = coef;

    for (std::size_t c = 0; c < k; ++c) {
      while (true) {
        std::size_t pivot = R;
        for (std::size_t r = c; r < R; ++r) {
          if (sgn(a[r][c]) == 0) continue;
          if (pivot == R || mpz_cmpabs(a[r][c].get_mpz_t(), a[pivot][c].get_mpz_t()) < 0) pivot = r;
        }
        if (pivot == R) throw InconsistencyError("Lie polynomials of a Hall layer do not have full rank");
        if (pivot != c) {
          std::swap(a[pivot], a[c]);
          ops_.push_back({Op::Swap, pivot, c, BigInt(0)});
        }
        bool clean = true;
        for (std::size_t r = c + 1; r < R; ++r) {
          if (sgn(a[r][c]) == 0) continue;
          BigInt q;
          mpz_tdiv_q(q.get_mpz_t(), a[r][c].get_mpz_t(), a[c][c].get_mpz_t());
          axpy(a[r], a[c], q);
          ops_.push_back({Op::AddMul, r, c, q});
          if (sgn(a[r][c]) != 0) clean = false;
        }
        if (clean) break;
      }
      if (abs(a[c][c]) != 1)
        throw InconsistencyError("Lie polynomials of a Hall layer do not span a saturated lattice");
      if (a[c][c] < 0) {
        for (auto& v : a[c]) v = -v;
        ops_.push_back({Op::Negate, c, c, BigInt(0)});
      }
      for (std::size_t r = 0; r < c; ++r) {
        if (sgn(a[r][c]) == 0) continue;
        BigInt q = a[r][c];
        axpy(a[r], a[c], q);
        ops_.push_back({Op::AddMul, r, c, q});
      }
    }
  }

  std::size_t rank() const noexcept { return columns_.size(); }

  /// Exponents e with sum_b e_b Lie(b) = v; throws if v is outside the span.
  std::vector<BigInt> solve(const std::vector<std::pair<std::uint32_t, BigInt>>& v) const {
    std::vector<BigInt> x(row_of_word_.size(), BigInt(0));
    for (const auto& [w, coef] : v) {
      auto it = find_row(w);
      if (it == row_of_word_.end()) throw InconsistencyError("homogeneous component is not a Lie element");
      x[it->second] = coef;
    }
    for (const auto& op : ops_) {
      switch (op.kind) {
        case Op::Swap: std::swap(x[op.target], x[op.source]); break;
        case Op::Negate: x[op.target] = -x[op.target]; break;
        case Op::AddMul: mpz_submul(x[op.target].get_mpz_t(), op.factor.get_mpz_t(), x[op.source].get_mpz_t()); break;
      }
    }
    for (std::size_t r = rank(); r < x.size(); ++r)
      if (sgn(x[r]) != 0) throw InconsistencyError("homogeneous component is not a Lie element");
    x.resize(rank());
    return x;
  }

  const std::vector<std::pair<std::uint32_t, BigInt>>& column(std::size_t b) const { return columns_[b]; }

 private:
  struct Op {
    enum Kind { Swap, AddMul, Negate } kind;
    std::size_t target;
    std::size_t source;
    BigInt factor;
  };

  static void axpy(std::vector<BigInt>& row, const std::vector<BigInt>& src, const BigInt& q) {
    for (std::size_t i = 0; i < row.size(); ++i)
      if (sgn(src[i]) != 0) mpz_submul(row[i].get_mpz_t(), q.get_mpz_t(), src[i].get_mpz_t());
  }

  using RowIter = std::vector<std::pair<std::uint32_t, std::size_t>>::const_iterator;

  RowIter find_row(std::uint32_t w) const {
    auto it = std::lower_bound(row_of_word_.begin(), row_of_word_.end(), std::pair<std::uint32_t, std::size_t>{w, 0},
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    if (it != row_of_word_.end() && it->first != w) return row_of_word_.end();
    return it;
  }

  std::size_t row(std::uint32_t w) const { return find_row(w)->second; }

  std::vector<std::vector<std::pair<std::uint32_t, BigInt>>> columns_;
  std::vector<std::pair<std::uint32_t, std::size_t>> row_of_word_;
  std::vector<Op> ops_;
};

/// Magnus images of the Hall basis and the inverse map from series back to
/// Hall normal form (exponent vector in basis order).
class MagnusModel {
 public:
  explicit MagnusModel(const HallBasis& basis)
      : basis_(&basis), space_(basis.letters(), basis.max_weight()), arith_(space_) {
    const std::size_t n = basis.size();
    image_.reserve(n);
    inverse_image_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (basis[i].is_letter()) {
        image_.push_back(Series::letter(basis[i].letter_index() - 1));
      } else {
        const std::size_t l = basis.left_index(i);
        const std::size_t r = basis.right_index(i);
        // [u, v] = u^-1 v^-1 u v
        Series s = arith_.multiply(inverse_image_[l], inverse_image_[r]);
        s = arith_.multiply(s, image_[l]);
        s = arith_.multiply(s, image_[r]);
        image_.push_back(std::move(s));
      }
      inverse_image_.push_back(arith_.inverse(image_.back()));
    }
    solvers_.resize(basis.max_weight() + 1);
    for (unsigned w = 1; w <= basis.max_weight(); ++w) {
      auto [first, last] = basis.layer(w);
      std::vector<std::vector<std::pair<std::uint32_t, BigInt>>> columns;
      for (std::size_t b = first; b < last; ++b) columns.push_back(image_[b].part(w));
      solvers_[w] = LayerSolver(std::move(columns));
    }
  }

  const WordSpace& space() const noexcept { return space_; }
  const SeriesArithmetic& arithmetic() const noexcept { return arith_; }
  const Series& image(std::size_t b) const { return image_[b]; }
  const Series& inverse_image(std::size_t b) const { return inverse_image_[b]; }

  /// Series of b_1^e_1 b_2^e_2 ... for a sparse exponent list in basis order.
  Series evaluate(const std::vector<std::pair<std::size_t, BigInt>>& terms) const {
    Series s = Series::one();
    for (const auto& [b, e] : terms) s = arith_.multiply(s, arith_.power(image_[b], e));
    return s;
  }

  /// Hall normal form of a series in the image of the embedding.
  std::vector<std::pair<std::size_t, BigInt>> normal_form(Series h, unsigned from_weight = 1) const {
    std::vector<std::pair<std::size_t, BigInt>> out;
    for (unsigned w = 1; w < from_weight; ++w)
      if (!h.part(w).empty()) throw InconsistencyError("series has components below the expected weight");
    for (unsigned w = from_weight; w <= basis_->max_weight(); ++w) {
      auto v = h.part(w);
      if (v.empty()) continue;
      auto e = solvers_[w].solve(v);
      const std::size_t first = basis_->layer(w).first;
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (sgn(e[k]) == 0) continue;
        h = arith_.multiply(arith_.power(image_[first + k], -e[k]), h);
        out.emplace_back(first + k, e[k]);
      }
      if (!h.part(w).empty()) throw InconsistencyError("normal-form extraction left a residue");
    }
    if (h.terms.size() != 1) throw InconsistencyError("normal-form extraction did not reach the identity");
    return out;
  }

 private:
  const HallBasis* basis_;
  WordSpace space_;
  SeriesArithmetic arith_;
  std::vector<Series> image_;
  std::vector<Series> inverse_image_;
  std::vector<LayerSolver> solvers_;
};

}  // namespace nilmult::detail
