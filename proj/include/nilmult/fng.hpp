#pragma once

// Free nilpotent group of class K on d letters. Elements are kept in Hall
// normal form b_1^e_1 b_2^e_2 ... (basis order) and multiplied by collection
// from the left: the leftmost uncollected generator is moved into place with
// b_i^a b_g = b_g (b_i [b_i, b_g])^a, the conjugate being read from a table.
// Commutators of weight > K never enter the tables, so words stay bounded.

#include <cstddef>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nilmult/bigint.hpp"
#include "nilmult/detail/magnus.hpp"
#include "nilmult/errors.hpp"
#include "nilmult/hall.hpp"

namespace nilmult {

inline constexpr std::size_t kDefaultWordCap = 1000000;

struct Term {
  std::size_t index = 0;  // position in the Hall basis
  BigInt exponent;

  bool operator==(const Term&) const = default;
};

/// Normal form: indices strictly increasing, exponents nonzero. The empty
/// word is the identity.
class NormalWord {
 public:
  NormalWord() = default;

  static NormalWord from_terms(std::vector<Term> terms) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (sgn(terms[i].exponent) == 0) throw DomainError("normal word exponents must be nonzero");
      if (i > 0 && terms[i - 1].index >= terms[i].index)
        throw DomainError("normal word indices must be strictly increasing");
    }
    NormalWord w;
    w.terms_ = std::move(terms);
    return w;
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_identity() const noexcept { return terms_.empty(); }

  /// Exponent of basis element b (zero when absent).
  BigInt exponent(std::size_t b) const {
    for (const auto& t : terms_)
      if (t.index == b) return t.exponent;
    return 0;
  }

  bool operator==(const NormalWord&) const = default;

 private:
  std::vector<Term> terms_;
};

class NilpotentContext {
 public:
  NilpotentContext(unsigned letters, unsigned nilpotency_class, std::size_t basis_cap = kDefaultBasisCap,
                   std::size_t word_cap = kDefaultWordCap)
      : impl_(std::make_shared<Impl>(letters, nilpotency_class, basis_cap, word_cap)) {}

  unsigned letters() const noexcept { return impl_->basis.letters(); }
  unsigned nilpotency_class() const noexcept { return impl_->basis.max_weight(); }
  const HallBasis& basis() const noexcept { return impl_->basis; }
  std::size_t word_cap() const noexcept { return impl_->word_cap; }
  const detail::MagnusModel& magnus() const noexcept { return impl_->magnus; }

  /// Normal form of b_i^{b_g^s}, s = +1 or -1, for i > g.
  const std::vector<Term>& conjugate(std::size_t i, std::size_t g, int s) const {
    const auto& table = s > 0 ? impl_->conj_pos : impl_->conj_neg;
    const auto& row = table[i];
    if (g < row.size()) return row[g];
    return impl_->singletons[i];
  }

  /// True when b_i and b_g commute in this quotient (weights sum past K).
  bool commutes(std::size_t i, std::size_t g) const {
    return g >= impl_->conj_pos[i].size();
  }

 private:
  struct Impl {
    HallBasis basis;
    std::size_t word_cap;
    detail::MagnusModel magnus;
    std::vector<std::vector<std::vector<Term>>> conj_pos;
    std::vector<std::vector<std::vector<Term>>> conj_neg;
    std::vector<std::vector<Term>> singletons;

    Impl(unsigned letters, unsigned k, std::size_t basis_cap, std::size_t cap)
        : basis(generate_basis(letters, k, basis_cap)), word_cap(cap), magnus(basis) {
      const std::size_t n = basis.size();
      const auto& arith = magnus.arithmetic();
      conj_pos.resize(n);
      conj_neg.resize(n);
      singletons.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        singletons[i] = {Term{i, BigInt(1)}};
        const unsigned wi = basis.weight(i);
        if (wi >= k) continue;
        // Nontrivial partners: g < i with w(g) <= K - w(i).
        const std::size_t bound = std::min(i, basis.layer(k - wi).second);
        for (std::size_t g = 0; g < bound; ++g) {
          auto pos = arith.multiply(arith.multiply(magnus.inverse_image(g), magnus.image(i)), magnus.image(g));
          auto neg = arith.multiply(arith.multiply(magnus.image(g), magnus.image(i)), magnus.inverse_image(g));
          conj_pos[i].push_back(to_terms(magnus.normal_form(std::move(pos))));
          conj_neg[i].push_back(to_terms(magnus.normal_form(std::move(neg))));
        }
      }
    }

    static std::vector<Term> to_terms(std::vector<std::pair<std::size_t, BigInt>> nf) {
      std::vector<Term> out;
      out.reserve(nf.size());
      for (auto& [b, e] : nf) out.push_back(Term{b, std::move(e)});
      return out;
    }
  };

  std::shared_ptr<const Impl> impl_;
};

namespace detail {

/// Collection from the left onto a dense exponent vector.
class Collector {
 public:
  explicit Collector(const NilpotentContext& ctx) : ctx_(ctx), exps_(ctx.basis().size(), BigInt(0)) {}

  void load(const NormalWord& w) {
    for (auto& e : exps_) e = 0;
    top_ = 0;
    for (const auto& t : w.terms()) {
      exps_[t.index] = t.exponent;
      top_ = t.index + 1;
    }
  }

  /// Queue w so that it is multiplied on the right after everything already
  /// queued (the stack is LIFO, so later factors go underneath). Call in
  /// reverse factor order: the last pushed is collected first.
  void push(const NormalWord& w, bool inverted = false) { push_terms(w.terms(), BigInt(1), inverted); }

  void run() {
    while (!stack_.empty()) {
      Item item = std::move(stack_.back());
      stack_.pop_back();
      const std::size_t g = item.gen;
      if (sgn(item.exp) == 0) continue;
      if (top_ <= g + 1 || suffix_commutes(g)) {
        absorb(g, item.exp);
        continue;
      }
      if (abs(item.exp) > kStepLimit || suffix_has_large_exponent(g)) {
        conjugate_suffix(g, item.exp);
        continue;
      }
      const int s = sgn(item.exp);
      if (item.exp != s) stack_.push_back(Item{g, item.exp - s});
      // w = P Q with Q = prod_{i>g} b_i^{a_i}; w b_g^s = P b_g^s Q^{b_g^s}.
      for (std::size_t i = top_; i-- > g + 1;) {
        if (sgn(exps_[i]) == 0) continue;
        if (ctx_.commutes(i, g)) {
          stack_.push_back(Item{i, exps_[i]});
        } else {
          push_terms(ctx_.conjugate(i, g, s), exps_[i], false);
        }
        exps_[i] = 0;
      }
      top_ = g + 1;
      absorb(g, BigInt(s));
      if (stack_.size() > ctx_.word_cap())
        throw BudgetError("collection exceeded the word-length cap of " + std::to_string(ctx_.word_cap()));
    }
  }

  NormalWord result() const {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < top_; ++i)
      if (sgn(exps_[i]) != 0) terms.push_back(Term{i, exps_[i]});
    return NormalWord::from_terms(std::move(terms));
  }

  const std::vector<BigInt>& exponents() const noexcept { return exps_; }

 private:
  struct Item {
    std::size_t gen;
    BigInt exp;
  };

  // Exponents above this are moved in one step through the embedding rather
  // than one generator at a time.
  static constexpr long kStepLimit = 4;

  bool suffix_has_large_exponent(std::size_t g) const {
    for (std::size_t i = g + 1; i < top_; ++i)
      if (abs(exps_[i]) > kStepLimit && !ctx_.commutes(i, g)) return true;
    return false;
  }

  // w = P Q with Q = prod_{i>g} b_i^{a_i}; w b_g^e = P b_g^e Q^{b_g^e}, the
  // conjugate computed in the embedding. Its support stays above g.
  void conjugate_suffix(std::size_t g, const BigInt& e) {
    const auto& m = ctx_.magnus();
    const auto& arith = m.arithmetic();
    std::vector<std::pair<std::size_t, BigInt>> q;
    for (std::size_t i = g + 1; i < top_; ++i) {
      if (sgn(exps_[i]) == 0) continue;
      q.emplace_back(i, std::move(exps_[i]));
      exps_[i] = 0;
    }
    auto h = arith.power(m.image(g), e);
    auto h_inv = arith.power(m.image(g), -e);
    auto nf = m.normal_form(arith.multiply(arith.multiply(h_inv, m.evaluate(q)), h), ctx_.basis().weight(g + 1));
    exps_[g] += e;
    top_ = g + 1;
    for (auto& [b, x] : nf) {
      if (b <= g) throw InconsistencyError("conjugated suffix left the span above the pivot");
      exps_[b] = std::move(x);
      top_ = b + 1;
    }
    while (top_ > 0 && sgn(exps_[top_ - 1]) == 0) --top_;
  }

  bool suffix_commutes(std::size_t g) const {
    for (std::size_t i = g + 1; i < top_; ++i)
      if (sgn(exps_[i]) != 0 && !ctx_.commutes(i, g)) return false;
    return true;
  }

  // Multiplying by b_g^a when everything right of g commutes with b_g.
  void absorb(std::size_t g, const BigInt& a) {
    exps_[g] += a;
    if (g + 1 > top_) top_ = g + 1;
    while (top_ > 0 && sgn(exps_[top_ - 1]) == 0) --top_;
  }

  // Pushes (terms)^count, or its inverse, so that the first factor is on top.
  void push_terms(const std::vector<Term>& terms, const BigInt& count, bool inverted) {
    if (terms.empty() || sgn(count) == 0) return;
    bool inv = inverted != (sgn(count) < 0);
    BigInt reps = abs(count);
    if (terms.size() == 1) {
      BigInt e = terms[0].exponent * reps;
      stack_.push_back(Item{terms[0].index, inv ? BigInt(-e) : e});
      return;
    }
    if (reps > BigInt(static_cast<unsigned long>(ctx_.word_cap())) ||
        stack_.size() + terms.size() * reps.get_ui() > ctx_.word_cap())
      throw BudgetError("collection exceeded the word-length cap of " + std::to_string(ctx_.word_cap()));
    for (unsigned long r = 0; r < reps.get_ui(); ++r) {
      if (!inv) {
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) stack_.push_back(Item{it->index, it->exponent});
      } else {
        for (const auto& t : terms) stack_.push_back(Item{t.index, -t.exponent});
      }
    }
  }

  const NilpotentContext& ctx_;
  std::vector<BigInt> exps_;
  std::size_t top_ = 0;  // one past the highest nonzero exponent
  std::vector<Item> stack_;
};

}  // namespace detail

inline NormalWord identity() { return NormalWord(); }

inline NormalWord basis_element(const NilpotentContext& ctx, std::size_t index, const BigInt& exponent = 1) {
  if (index >= ctx.basis().size()) throw DomainError("basis index out of range");
  if (sgn(exponent) == 0) return identity();
  return NormalWord::from_terms({Term{index, exponent}});
}

/// Generator x_j, 1-based.
inline NormalWord generator(const NilpotentContext& ctx, unsigned j, const BigInt& exponent = 1) {
  if (j == 0 || j > ctx.letters()) throw DomainError("generator index out of range");
  return basis_element(ctx, j - 1, exponent);
}

inline NormalWord multiply(const NormalWord& u, const NormalWord& v, const NilpotentContext& ctx) {
  detail::Collector col(ctx);
  col.load(u);
  col.push(v);
  col.run();
  return col.result();
}

inline NormalWord inverse(const NormalWord& u, const NilpotentContext& ctx) {
  detail::Collector col(ctx);
  col.push(u, true);
  col.run();
  return col.result();
}

inline NormalWord power(const NormalWord& u, const BigInt& e, const NilpotentContext& ctx) {
  if (sgn(e) == 0 || u.is_identity()) return identity();
  if (u.terms().size() == 1) {
    const auto& t = u.terms()[0];
    return basis_element(ctx, t.index, t.exponent * e);
  }
  NormalWord base = sgn(e) < 0 ? inverse(u, ctx) : u;
  BigInt n = abs(e);
  NormalWord result;
  while (sgn(n) > 0) {
    if (mpz_odd_p(n.get_mpz_t())) result = multiply(result, base, ctx);
    n >>= 1;
    if (sgn(n) > 0) base = multiply(base, base, ctx);
  }
  return result;
}

/// [u, v] = u^-1 v^-1 u v
inline NormalWord commutator(const NormalWord& u, const NormalWord& v, const NilpotentContext& ctx) {
  detail::Collector col(ctx);
  col.load(inverse(u, ctx));
  col.push(v);
  col.push(u);
  col.push(v, true);
  col.run();
  return col.result();
}

/// Left-normed [u, z_1, ..., z_k] = [[...[u, z_1], ...], z_k].
inline NormalWord commutator_chain(const NormalWord& u, std::span<const NormalWord> entries,
                                   const NilpotentContext& ctx) {
  NormalWord acc = u;
  for (const auto& z : entries) {
    if (acc.is_identity()) break;
    acc = commutator(acc, z, ctx);
  }
  return acc;
}

/// Evaluates a bracket expression over the generators as a group commutator.
inline NormalWord evaluate(const Commutator& c, const NilpotentContext& ctx) {
  if (c.is_letter()) return generator(ctx, c.letter_index());
  if (auto idx = ctx.basis().index_of(c)) return basis_element(ctx, *idx);
  return commutator(evaluate(c.left(), ctx), evaluate(c.right(), ctx), ctx);
}

/// Lowest weight among the terms, or nullopt for the identity.
inline std::optional<unsigned> min_weight(const NormalWord& w, const NilpotentContext& ctx) {
  std::optional<unsigned> best;
  for (const auto& t : w.terms()) {
    unsigned wt = ctx.basis().weight(t.index);
    if (!best || wt < *best) best = wt;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Rendering and parsing of words such as "x1^2 x2^-1 [x2,x1]".

inline std::string render(const NormalWord& w, const NilpotentContext& ctx) {
  if (w.is_identity()) return "1";
  std::string out;
  for (const auto& t : w.terms()) {
    if (!out.empty()) out += ' ';
    out += ctx.basis()[t.index].to_string() + "^" + to_decimal(t.exponent);
  }
  return out;
}

namespace detail {

class WordParser {
 public:
  WordParser(std::string_view text, const NilpotentContext& ctx) : text_(text), ctx_(ctx) {}

  NormalWord parse() {
    NormalWord acc;
    skip_space();
    while (pos_ < text_.size()) {
      Commutator atom = parse_atom();
      BigInt exponent = 1;
      skip_space();
      if (peek() == '^') {
        ++pos_;
        skip_space();
        std::size_t start = pos_;
        if (peek() == '-' || peek() == '+') ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        exponent = parse_bigint(text_.substr(start, pos_ - start));
      }
      acc = multiply(acc, power(evaluate(atom, ctx_), exponent, ctx_), ctx_);
      skip_space();
    }
    return acc;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '*' || text_[pos_] == '\t')) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("cannot parse word '" + std::string(text_) + "' at position " + std::to_string(pos_) + ": " +
                      what);
  }

  Commutator parse_atom() {
    skip_space();
    if (peek() == 'x') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a letter index");
      unsigned long j = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (j == 0 || j > ctx_.letters()) fail("letter out of range");
      return Commutator::letter(static_cast<unsigned>(j));
    }
    if (peek() == '[') {
      ++pos_;
      Commutator left = parse_atom();
      skip_space();
      if (peek() != ',') fail("expected ','");
      ++pos_;
      Commutator right = parse_atom();
      skip_space();
      if (peek() != ']') fail("expected ']'");
      ++pos_;
      return Commutator::bracket(left, right);
    }
    fail("expected 'x<k>' or '['");
  }

  std::string_view text_;
  const NilpotentContext& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a product of powers of bracket expressions; "1" or "" is the
/// identity. Non-basic brackets are evaluated as group commutators.
inline NormalWord parse_word(std::string_view text, const NilpotentContext& ctx) {
  std::string_view trimmed = text;
  while (!trimmed.empty() && trimmed.front() == ' ') trimmed.remove_prefix(1);
  while (!trimmed.empty() && trimmed.back() == ' ') trimmed.remove_suffix(1);
  if (trimmed.empty() || trimmed == "1") return identity();
  return detail::WordParser(trimmed, ctx).parse();
}

// ---------------------------------------------------------------------------
// Exponent functions f(a) = sum_j a_j C(a, j) recovered from samples.

/// Generalized binomial coefficient C(alpha, k) for any integer alpha.
inline BigInt binomial(const BigInt& alpha, unsigned k) {
  BigInt num = 1;
  for (unsigned i = 0; i < k; ++i) num *= (alpha - i);
  BigInt fact;
  mpz_fac_ui(fact.get_mpz_t(), k);
  BigInt out;
  mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), fact.get_mpz_t());
  return out;
}

struct ExponentPolynomial {
  std::vector<BigInt> coefficients;  // a_1 .. a_w

  BigInt operator()(const BigInt& alpha) const {
    BigInt total = 0;
    for (std::size_t j = 0; j < coefficients.size(); ++j) total += coefficients[j] * binomial(alpha, j + 1);
    return total;
  }
};

struct ExponentSample {
  BigInt alpha;
  BigInt value;
};

struct FitReport {
  std::optional<ExponentPolynomial> polynomial;
  std::string failure;  // empty on success
};

/// Finds integers a_1..a_degree with sum_j a_j C(alpha, j) = value at every
/// sample. Reports (does not throw) when the system is inconsistent,
/// underdetermined, or only rationally solvable.
inline FitReport fit_exponent_polynomial(std::span<const ExponentSample> samples, unsigned degree) {
  FitReport report;
  if (degree == 0) {
    for (const auto& s : samples)
      if (sgn(s.value) != 0) {
        report.failure = "nonzero sample for the zero polynomial";
        return report;
      }
    report.polynomial = ExponentPolynomial{};
    return report;
  }
  const std::size_t rows = samples.size();
  std::vector<std::vector<mpq_class>> m(rows, std::vector<mpq_class>(degree + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (unsigned j = 0; j < degree; ++j) m[r][j] = mpq_class(binomial(samples[r].alpha, j + 1));
    m[r][degree] = mpq_class(samples[r].value);
  }
  std::size_t pivot_row = 0;
  std::vector<std::size_t> pivot_col_row(degree, rows);
  for (unsigned c = 0; c < degree; ++c) {
    std::size_t p = pivot_row;
    while (p < rows && sgn(m[p][c]) == 0) ++p;
    if (p == rows) {
      report.failure = "samples do not determine coefficient a_" + std::to_string(c + 1);
      return report;
    }
    std::swap(m[p], m[pivot_row]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pivot_row || sgn(m[r][c]) == 0) continue;
      mpq_class f = m[r][c] / m[pivot_row][c];
      for (unsigned k = c; k <= degree; ++k) m[r][k] -= f * m[pivot_row][k];
    }
    pivot_col_row[c] = pivot_row++;
  }
  for (std::size_t r = pivot_row; r < rows; ++r) {
    if (sgn(m[r][degree]) != 0) {
      report.failure = "samples are inconsistent with any polynomial of degree " + std::to_string(degree);
      return report;
    }
  }
  ExponentPolynomial poly;
  for (unsigned c = 0; c < degree; ++c) {
    const auto& row = m[pivot_col_row[c]];
    mpq_class a = row[degree] / row[c];
    a.canonicalize();
    if (a.get_den() != 1) {
      report.failure = "coefficient a_" + std::to_string(c + 1) + " = " + a.get_str() + " is not an integer";
      return report;
    }
    poly.coefficients.push_back(a.get_num());
  }
  report.polynomial = std::move(poly);
  return report;
}

}  // namespace nilmult
