#pragma once

// Basic commutators (Hall basis) on d letters, generated weight by weight
// and kept in the standard total order: weight first, then letters by index,
// then brackets lexicographically by (left, right).

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nilmult/errors.hpp"
#include "nilmult/witt.hpp"

namespace nilmult {

inline constexpr std::size_t kDefaultBasisCap = 500000;

/// Immutable binary bracket tree over 1-based letter indices. Copies share
/// structure; subtrees taken from a HallBasis are the basis' own nodes.
class Commutator {
 public:
  static Commutator letter(unsigned index) {
    if (index == 0) throw DomainError("letters are 1-based");
    auto node = std::make_shared<Node>();
    node->letter = index;
    node->weight = 1;
    node->counts.assign(index, 0);
    node->counts[index - 1] = 1;
    return Commutator(std::move(node));
  }

  static Commutator bracket(const Commutator& left, const Commutator& right) {
    auto node = std::make_shared<Node>();
    node->left = left.node_;
    node->right = right.node_;
    node->weight = left.weight() + right.weight();
    const auto& a = left.node_->counts;
    const auto& b = right.node_->counts;
    node->counts.assign(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) node->counts[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) node->counts[i] += b[i];
    return Commutator(std::move(node));
  }

  bool is_letter() const noexcept { return node_->letter != 0; }
  unsigned letter_index() const noexcept { return node_->letter; }
  Commutator left() const { return Commutator(node_->left); }
  Commutator right() const { return Commutator(node_->right); }
  unsigned weight() const noexcept { return node_->weight; }

  /// Number of occurrences of letter j (1-based).
  unsigned occurrences(unsigned j) const noexcept {
    return (j == 0 || j > node_->counts.size()) ? 0 : node_->counts[j - 1];
  }
  bool contains_letter(unsigned j) const noexcept { return occurrences(j) > 0; }
  unsigned max_letter() const noexcept {
    for (std::size_t i = node_->counts.size(); i > 0; --i)
      if (node_->counts[i - 1] != 0) return static_cast<unsigned>(i);
    return 0;
  }

  bool same_node(const Commutator& other) const noexcept { return node_ == other.node_; }

  std::string to_string() const {
    if (is_letter()) return "x" + std::to_string(letter_index());
    return "[" + left().to_string() + "," + right().to_string() + "]";
  }

 private:
  struct Node {
    unsigned letter = 0;
    unsigned weight = 0;
    std::vector<unsigned> counts;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };

  explicit Commutator(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Weight first; letters by index; brackets by left then right.
inline std::strong_ordering compare(const Commutator& a, const Commutator& b) {
  if (a.same_node(b)) return std::strong_ordering::equal;
  if (auto w = a.weight() <=> b.weight(); w != 0) return w;
  if (a.is_letter() || b.is_letter()) {
    if (a.is_letter() && b.is_letter()) return a.letter_index() <=> b.letter_index();
    return a.is_letter() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (auto l = compare(a.left(), b.left()); l != 0) return l;
  return compare(a.right(), b.right());
}

inline bool operator==(const Commutator& a, const Commutator& b) { return compare(a, b) == 0; }

inline bool contains_letter(const Commutator& c, unsigned j) noexcept { return c.contains_letter(j); }

class HallBasis {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  unsigned letters() const noexcept { return letters_; }
  unsigned max_weight() const noexcept { return max_weight_; }
  std::size_t size() const noexcept { return elements_.size(); }

  const Commutator& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Commutator>& elements() const noexcept { return elements_; }

  unsigned weight(std::size_t i) const { return elements_[i].weight(); }
  std::size_t left_index(std::size_t i) const { return children_[i].first; }
  std::size_t right_index(std::size_t i) const { return children_[i].second; }

  /// Index range [first, last) of the elements of weight w.
  std::pair<std::size_t, std::size_t> layer(unsigned w) const {
    if (w == 0 || w > max_weight_) return {size(), size()};
    return {layer_begin_[w - 1], layer_begin_[w]};
  }

  std::optional<std::size_t> bracket_index(std::size_t left, std::size_t right) const {
    auto it = bracket_lookup_.find(key(left, right));
    if (it == bracket_lookup_.end()) return std::nullopt;
    return it->second;
  }

  /// Position of c in the basis, or nullopt when c is not a basic commutator
  /// on these letters.
  std::optional<std::size_t> index_of(const Commutator& c) const {
    if (c.weight() > max_weight_) return std::nullopt;
    if (c.is_letter()) {
      if (c.letter_index() > letters_) return std::nullopt;
      return static_cast<std::size_t>(c.letter_index() - 1);
    }
    auto l = index_of(c.left());
    if (!l) return std::nullopt;
    auto r = index_of(c.right());
    if (!r) return std::nullopt;
    return bracket_index(*l, *r);
  }

  friend HallBasis generate_basis(unsigned d, unsigned max_weight, std::size_t cap);

 private:
  static std::uint64_t key(std::size_t l, std::size_t r) {
    return (static_cast<std::uint64_t>(l) << 32) | static_cast<std::uint64_t>(r);
  }

  unsigned letters_ = 0;
  unsigned max_weight_ = 0;
  std::vector<Commutator> elements_;
  std::vector<std::pair<std::size_t, std::size_t>> children_;
  std::vector<std::size_t> layer_begin_;  // size max_weight + 1
  std::unordered_map<std::uint64_t, std::size_t> bracket_lookup_;
};

/// Complete ordered Hall basis on d letters through the given weight.
/// Throws BudgetError instead of truncating when the element count would
/// exceed cap.
inline HallBasis generate_basis(unsigned d, unsigned max_weight, std::size_t cap = kDefaultBasisCap) {
  if (d == 0) throw DomainError("generate_basis: need at least one letter");
  if (max_weight == 0) throw DomainError("generate_basis: max weight must be positive");
  if (d >= (1u << 31)) throw DomainError("generate_basis: too many letters");
  if (d > cap) throw BudgetError("Hall basis exceeds the cap of " + std::to_string(cap) + " elements");

  HallBasis basis;
  basis.letters_ = d;
  basis.max_weight_ = max_weight;
  basis.layer_begin_.push_back(0);
  for (unsigned i = 1; i <= d; ++i) {
    basis.elements_.push_back(Commutator::letter(i));
    basis.children_.emplace_back(HallBasis::npos, HallBasis::npos);
  }
  basis.layer_begin_.push_back(d);

  for (unsigned w = 2; w <= max_weight; ++w) {
    // Fail before enumerating a layer that cannot fit.
    BigInt expected = witt_chi(w, BigInt(d));
    if (BigInt(static_cast<unsigned long>(basis.size())) + expected > BigInt(static_cast<unsigned long>(cap)))
      throw BudgetError("Hall basis on " + std::to_string(d) + " letters through weight " +
                        std::to_string(max_weight) + " exceeds the cap of " + std::to_string(cap) + " elements");

    std::vector<std::pair<std::size_t, std::size_t>> layer;
    // [c_i, c_j] with w(c_i) + w(c_j) = w, c_i > c_j, and c_j >= t when c_i = [s, t].
    for (unsigned wi = w - 1; wi >= 1; --wi) {
      unsigned wj = w - wi;
      if (wj > wi) break;  // c_i > c_j forces w(c_i) >= w(c_j)
      auto [ib, ie] = basis.layer(wi);
      auto [jb, je] = basis.layer(wj);
      for (std::size_t i = ie; i-- > ib;) {
        std::size_t lower = jb;
        if (basis.children_[i].second != HallBasis::npos) lower = std::max(lower, basis.children_[i].second);
        std::size_t upper = std::min(je, i);  // exclusive; c_j < c_i
        for (std::size_t j = lower; j < upper; ++j) layer.emplace_back(i, j);
      }
    }
    std::sort(layer.begin(), layer.end());
    for (auto [i, j] : layer) {
      basis.bracket_lookup_.emplace(HallBasis::key(i, j), basis.elements_.size());
      basis.elements_.push_back(Commutator::bracket(basis.elements_[i], basis.elements_[j]));
      basis.children_.emplace_back(i, j);
    }
    basis.layer_begin_.push_back(basis.elements_.size());
  }
  return basis;
}

}  // namespace nilmult
