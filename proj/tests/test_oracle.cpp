#include <gtest/gtest.h>

#include "nilmult/oracle.hpp"

using nilmult::BigInt;
using nilmult::GroupSpec;
using nilmult::OracleMode;

TEST(Oracle, ZThreeFreeAndTorsion) {
  auto r = nilmult::verify_formula(GroupSpec{1, {BigInt(3)}, 2}, 2, OracleMode::both);
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.formula.to_string(), "Z_3^5");
  ASSERT_TRUE(r.oracle_basis && r.oracle_collected);
  EXPECT_EQ(r.oracle_basis->to_string(), "Z_3^5");
  EXPECT_EQ(r.oracle_collected->to_string(), "Z_3^5");
}

TEST(Oracle, FreeProductHasNoRelations) {
  auto r = nilmult::verify_formula(GroupSpec{2, {}, 2}, 2, OracleMode::both);
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.ambient_rank, 5u);
  EXPECT_EQ(r.oracle_collected->to_string(), "Z^5");
}

TEST(Oracle, ChainNineThree) {
  auto r = nilmult::verify_formula(GroupSpec{0, {BigInt(9), BigInt(3)}, 2}, 2, OracleMode::basis);
  EXPECT_TRUE(r.equal);
  EXPECT_FALSE(r.oracle_collected.has_value());
}

TEST(Oracle, SingleTorsionLetterHasEmptyAmbient) {
  auto m = nilmult::build_relations_collected(GroupSpec{0, {BigInt(3)}, 2}, 2);
  EXPECT_EQ(m.ambient_rank, 0u);
  for (const auto& col : m.columns) EXPECT_TRUE(col.empty());
  EXPECT_TRUE(nilmult::abelian_quotient(m).is_trivial());
}

TEST(Oracle, BuilderErrors) {
  EXPECT_THROW(nilmult::build_relations_basis(GroupSpec{0, {BigInt(2)}, 2}, 2), nilmult::ValidationError);
  EXPECT_THROW(nilmult::build_relations_basis(GroupSpec{1, {BigInt(3)}, 2}, 1), nilmult::ValidationError);
  EXPECT_THROW(nilmult::build_relations_collected(GroupSpec{1, {BigInt(1)}, 2}, 2), nilmult::ValidationError);
  nilmult::OracleOptions tiny{5, nilmult::kDefaultWordCap, 1};
  EXPECT_THROW(nilmult::build_relations_basis(GroupSpec{1, {BigInt(3)}, 2}, 2, tiny), nilmult::BudgetError);
}

TEST(Oracle, BasisAndCollectedAgree) {
  // Arbitrary orders, including ones outside the chain hypothesis.
  const std::vector<std::pair<GroupSpec, unsigned>> cases = {
      {GroupSpec{0, {BigInt(3), BigInt(3)}, 2}, 2}, {GroupSpec{2, {BigInt(3)}, 2}, 2},
      {GroupSpec{0, {BigInt(5), BigInt(5)}, 1}, 2}, {GroupSpec{1, {BigInt(2)}, 1}, 3},
      {GroupSpec{1, {BigInt(5)}, 1}, 1},           {GroupSpec{0, {BigInt(15), BigInt(5)}, 2}, 2},
  };
  for (const auto& [spec, c] : cases) {
    auto r = nilmult::verify_formula(spec, c, OracleMode::both);
    EXPECT_TRUE(r.equal) << r.formula.to_string();
    EXPECT_EQ(*r.oracle_basis, *r.oracle_collected);
  }
}

TEST(Oracle, CollectedColumnsLiveAboveClass) {
  auto m = nilmult::build_relations_collected(GroupSpec{1, {BigInt(3), BigInt(3)}, 2}, 2);
  EXPECT_GT(m.columns.size(), 0u);
  for (const auto& col : m.columns)
    for (const auto& [row, v] : col) EXPECT_LT(row, m.ambient_rank);
}

TEST(Oracle, CollectedIsDeterministicAcrossThreadCounts) {
  GroupSpec spec{1, {BigInt(3), BigInt(3)}, 2};
  auto a = nilmult::build_relations_collected(spec, 2, {nilmult::kDefaultBasisCap, nilmult::kDefaultWordCap, 1});
  auto b = nilmult::build_relations_collected(spec, 2, {nilmult::kDefaultBasisCap, nilmult::kDefaultWordCap, 4});
  EXPECT_EQ(a.columns, b.columns);
}

TEST(Oracle, ThreeFactorMixedOrders) {
  auto r = nilmult::verify_three_factor(nilmult::ThreeFactorSpec{{BigInt(15), BigInt(9), BigInt(5)}, 2}, 2);
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.formula.to_string(), "Z_15^5");
  auto s = nilmult::verify_three_factor(nilmult::ThreeFactorSpec{{BigInt(3), BigInt(3), BigInt(5)}, 1}, 2);
  EXPECT_TRUE(s.equal);
}
