#include <gtest/gtest.h>

#include <compare>
#include <set>
#include <string>

#include "nilmult/hall.hpp"
#include "nilmult/witt.hpp"

using nilmult::Commutator;
using nilmult::HallBasis;

namespace {

Commutator x(unsigned i) { return Commutator::letter(i); }
Commutator br(const Commutator& a, const Commutator& b) { return Commutator::bracket(a, b); }

std::vector<std::string> layer_strings(const HallBasis& b, unsigned w) {
  std::vector<std::string> out;
  auto [lo, hi] = b.layer(w);
  for (auto i = lo; i < hi; ++i) out.push_back(b[i].to_string());
  return out;
}

// Basic-commutator test straight from the definition, used as an
// independent filter over all brackets of basic elements.
bool is_basic_pair(const Commutator& ci, const Commutator& cj) {
  if (nilmult::compare(ci, cj) != std::strong_ordering::greater) return false;
  if (!ci.is_letter() && nilmult::compare(cj, ci.right()) == std::strong_ordering::less) return false;
  return true;
}

}  // namespace

TEST(Commutator, Rendering) {
  EXPECT_EQ(x(3).to_string(), "x3");
  EXPECT_EQ(br(br(x(2), x(1)), x(1)).to_string(), "[[x2,x1],x1]");
  auto c = br(br(x(2), x(1)), x(2));
  EXPECT_EQ(c.weight(), 3u);
  EXPECT_EQ(c.occurrences(2), 2u);
  EXPECT_EQ(c.occurrences(1), 1u);
  EXPECT_EQ(c.max_letter(), 2u);
}

TEST(Commutator, RejectsLetterZero) { EXPECT_THROW(x(0), nilmult::DomainError); }

TEST(Commutator, ContainsLetter) {
  EXPECT_TRUE(nilmult::contains_letter(br(x(2), x(1)), 1));
  EXPECT_FALSE(nilmult::contains_letter(br(x(2), x(1)), 3));
  EXPECT_TRUE(nilmult::contains_letter(br(br(x(3), x(1)), x(1)), 3));
}

TEST(Compare, Examples) {
  EXPECT_EQ(nilmult::compare(x(1), x(2)), std::strong_ordering::less);
  EXPECT_EQ(nilmult::compare(x(2), br(x(2), x(1))), std::strong_ordering::less);
  EXPECT_EQ(nilmult::compare(br(br(x(2), x(1)), x(1)), br(br(x(2), x(1)), x(2))), std::strong_ordering::less);
  EXPECT_EQ(nilmult::compare(br(x(2), x(1)), br(x(2), x(1))), std::strong_ordering::equal);
  EXPECT_TRUE(br(x(2), x(1)) == br(x(2), x(1)));
}

TEST(GenerateBasis, Examples) {
  auto b2 = nilmult::generate_basis(2, 2);
  ASSERT_EQ(b2.size(), 3u);
  EXPECT_EQ(b2[0].to_string(), "x1");
  EXPECT_EQ(b2[1].to_string(), "x2");
  EXPECT_EQ(b2[2].to_string(), "[x2,x1]");

  auto b3 = nilmult::generate_basis(2, 3);
  EXPECT_EQ(layer_strings(b3, 3), (std::vector<std::string>{"[[x2,x1],x1]", "[[x2,x1],x2]"}));

  auto b1 = nilmult::generate_basis(1, 5);
  ASSERT_EQ(b1.size(), 1u);
  EXPECT_EQ(b1[0].to_string(), "x1");
}

TEST(GenerateBasis, ThreeLettersWeightThree) {
  auto b = nilmult::generate_basis(3, 3);
  EXPECT_EQ(layer_strings(b, 2), (std::vector<std::string>{"[x2,x1]", "[x3,x1]", "[x3,x2]"}));
  // [[x3,x2],x1] is excluded: x1 < x2.
  EXPECT_EQ(layer_strings(b, 3),
            (std::vector<std::string>{"[[x2,x1],x1]", "[[x2,x1],x2]", "[[x2,x1],x3]", "[[x3,x1],x1]",
                                      "[[x3,x1],x2]", "[[x3,x1],x3]", "[[x3,x2],x2]", "[[x3,x2],x3]"}));
}

TEST(GenerateBasis, RejectsBadArguments) {
  EXPECT_THROW(nilmult::generate_basis(0, 3), nilmult::DomainError);
  EXPECT_THROW(nilmult::generate_basis(2, 0), nilmult::DomainError);
}

TEST(GenerateBasis, BudgetCap) {
  EXPECT_THROW(nilmult::generate_basis(6, 10), nilmult::BudgetError);
  EXPECT_THROW(nilmult::generate_basis(2, 6, 10), nilmult::BudgetError);
  EXPECT_NO_THROW(nilmult::generate_basis(2, 3, 5));
}

TEST(HallBasis, CountMatchesWitt) {
  for (unsigned d = 1; d <= 4; ++d) {
    auto b = nilmult::generate_basis(d, 8);
    for (unsigned w = 1; w <= 8; ++w) {
      auto [lo, hi] = b.layer(w);
      EXPECT_EQ(nilmult::BigInt(static_cast<unsigned long>(hi - lo)), nilmult::witt_chi(w, d))
          << "d=" << d << " w=" << w;
    }
  }
}

TEST(HallBasis, LetterCountIdentity) {
  for (unsigned d = 1; d <= 3; ++d) {
    auto b = nilmult::generate_basis(d, 6);
    for (unsigned w = 1; w <= 6; ++w) {
      auto [lo, hi] = b.layer(w);
      for (unsigned j = 1; j <= d; ++j) {
        unsigned long count = 0;
        for (auto i = lo; i < hi; ++i)
          if (b[i].max_letter() == j) ++count;
        EXPECT_EQ(nilmult::BigInt(count), nilmult::witt_chi(w, j) - nilmult::witt_chi(w, j - 1ul))
            << "d=" << d << " w=" << w << " j=" << j;
      }
    }
  }
}

TEST(HallBasis, StrictTotalOrder) {
  for (unsigned d = 2; d <= 3; ++d) {
    auto b = nilmult::generate_basis(d, d == 2 ? 6 : 4);
    const auto n = b.size();
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(nilmult::compare(b[i], b[i]), std::strong_ordering::equal);
      for (std::size_t j = 0; j < n; ++j) {
        auto o = nilmult::compare(b[i], b[j]);
        // Generation order is the total order.
        EXPECT_EQ(o, i <=> j);
        EXPECT_EQ(nilmult::compare(b[j], b[i]), 0 <=> o);
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (nilmult::compare(b[i], b[j]) < 0 && nilmult::compare(b[j], b[k]) < 0) {
            EXPECT_TRUE(nilmult::compare(b[i], b[k]) < 0);
          }
  }
}

TEST(HallBasis, MatchesDefinitionFilter) {
  // Rebuild each layer by brute force over all pairs and compare.
  auto b = nilmult::generate_basis(3, 5);
  for (unsigned w = 2; w <= 5; ++w) {
    std::set<std::string> brute;
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (b.weight(i) + b.weight(j) == w && is_basic_pair(b[i], b[j])) brute.insert(br(b[i], b[j]).to_string());
    auto got = layer_strings(b, w);
    EXPECT_EQ(std::set<std::string>(got.begin(), got.end()), brute) << "w=" << w;
    EXPECT_EQ(got.size(), brute.size());
  }
}

TEST(HallBasis, Indexing) {
  auto b = nilmult::generate_basis(2, 4);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(b.index_of(b[i]), i);
    if (b[i].is_letter()) continue;
    EXPECT_EQ(b.bracket_index(b.left_index(i), b.right_index(i)), i);
  }
  EXPECT_FALSE(b.index_of(br(x(1), x(2))).has_value());
  EXPECT_FALSE(b.index_of(x(3)).has_value());
}
