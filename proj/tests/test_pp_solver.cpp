#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "crowdprice/analysis.hpp"
#include "crowdprice/pp_solver.hpp"
#include "test_support.hpp"

using namespace crowdprice;

namespace {

const std::vector<WorkerProfile> kThree = {{0.9, 0.3, "a"}, {0.5, 0.25, "b"}, {0.8, 0.5, "c"}};

}  // namespace

TEST(ModifiedGreedy, ThreeWorkerExample) {
  const auto s = modified_greedy({kThree, 0.6, make_additive_utility()});
  EXPECT_EQ(s.selection.x, (std::vector<bool>{true, true, false}));
  EXPECT_DOUBLE_EQ(s.selection.utility_value, 1.4);
  EXPECT_DOUBLE_EQ(s.selection.spent, 0.55);
  ASSERT_EQ(s.policy.size(), 3U);
  EXPECT_EQ(s.policy[0], (Offer{0.3, 0.0}));
  EXPECT_EQ(s.policy[1], (Offer{0.25, 0.0}));
  EXPECT_EQ(s.policy[2], (Offer{0.0, 0.0}));
  EXPECT_TRUE(s.diagnostics.empty());
}

TEST(ModifiedGreedy, ZeroBudgetAndSlackBudget) {
  const auto none = modified_greedy({kThree, 0.0, make_additive_utility()});
  EXPECT_EQ(none.selection.x, (std::vector<bool>(3, false)));
  EXPECT_EQ(none.selection.utility_value, 0.0);
  const auto all = modified_greedy({kThree, 5.0, make_additive_utility()});
  EXPECT_EQ(all.selection.x, (std::vector<bool>(3, true)));
}

TEST(ModifiedGreedy, SingletonWinsWhenGreedyStallsEarly) {
  // greedy takes the cheap worker and then cannot afford the valuable one
  const std::vector<WorkerProfile> ws = {{0.1, 0.01, "cheap"}, {0.9, 1.0, "big"}};
  const auto s = modified_greedy({ws, 1.0, make_additive_utility()});
  EXPECT_EQ(s.selection.x, (std::vector<bool>{false, true}));
}

TEST(ModifiedGreedy, WarnsWithoutDeclaredConditions) {
  const auto s = modified_greedy({kThree, 0.6, make_typo_utility(25, 14)});
  EXPECT_FALSE(s.diagnostics.empty());
}

TEST(SolveGkpExact, ThreeWorkerExampleAndZeroBudget) {
  const auto s = solve_gkp_exact({kThree, 0.6, make_additive_utility()});
  EXPECT_DOUBLE_EQ(s.utility_value, 1.4);
  const auto z = solve_gkp_exact({kThree, 0.0, make_additive_utility()});
  EXPECT_EQ(z.x, (std::vector<bool>(3, false)));
}

TEST(SolveGkpExact, CherryPickerProfile) {
  // 4 highs (8) + 1 mid (1) costs exactly 10; cherries cannot beat 2c per unit of quality
  const auto inst = build_pob_instance(16, 1.0, 0.1);
  const auto s = solve_gkp_exact({inst.workers, inst.budget, make_additive_utility()});
  EXPECT_DOUBLE_EQ(s.utility_value, 9.0);
  EXPECT_DOUBLE_EQ(s.spent, 10.0);
}

TEST(SolveGkpExact, LexicographicallySmallestMaximizer) {
  const std::vector<WorkerProfile> ws = {{0.5, 0.5, "a"}, {0.5, 0.5, "b"}};
  const auto s = solve_gkp_exact({ws, 0.5, make_additive_utility()});
  EXPECT_EQ(s.x, (std::vector<bool>{false, true}));
}

TEST(SolveGkpExact, KnapsackTableBeyondEnumeration) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> cost(1, 100), qual(1, 100);
  std::vector<WorkerProfile> ws;
  for (int i = 0; i < 30; ++i) ws.push_back({qual(rng) / 100.0, cost(rng) / 100.0, "w"});
  const auto s = solve_gkp_exact({ws, 5.0, make_additive_utility()});
  EXPECT_LE(s.spent, 5.0);
  // the table is exact: no single swap or addition improves it
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (s.x[i]) continue;
    EXPECT_FALSE(s.spent + ws[i].cost <= 5.0 && ws[i].quality > 0.0);
  }
  EXPECT_GE(s.utility_value, modified_greedy({ws, 5.0, make_additive_utility()}).selection.utility_value);
  EXPECT_THROW(solve_gkp_exact({ws, 5.0, make_typo_utility(25, 1)}), SizeLimitError);
}

TEST(SolveGkpRelaxed, ClosedFormSplit) {
  const auto r = solve_gkp_relaxed({kThree, 0.6, make_additive_utility()});
  EXPECT_EQ(r.z[0], 1.0);
  EXPECT_EQ(r.z[1], 1.0);
  EXPECT_NEAR(r.z[2], 0.1, 1e-12);
  ASSERT_TRUE(r.split.has_value());
  EXPECT_EQ(*r.split, 2U);
  EXPECT_NEAR(r.value, 1.48, 1e-12);
}

TEST(SolveGkpRelaxed, BoundaryBudgets) {
  const auto zero = solve_gkp_relaxed({kThree, 0.0, make_additive_utility()});
  for (double z : zero.z) EXPECT_EQ(z, 0.0);
  const auto all = solve_gkp_relaxed({kThree, 1.05, make_additive_utility()});
  for (double z : all.z) EXPECT_EQ(z, 1.0);
  EXPECT_FALSE(all.split.has_value());
}

TEST(PolicyFromSelection, ZeroBonusAndPureBonusForms) {
  const std::vector<WorkerProfile> ws = {{0.5, 0.25, "a"}, {0.7, 0.5, "b"}};
  const auto zero_bonus = policy_from_selection(ws, {true, false});
  EXPECT_EQ(zero_bonus[0], (Offer{0.25, 0.0}));
  EXPECT_EQ(zero_bonus[1], (Offer{0.0, 0.0}));
  const auto pure = policy_from_selection({ws[0]}, {true}, std::vector<double>{0.0});
  EXPECT_EQ(pure[0], (Offer{0.0, 0.5}));
  EXPECT_DOUBLE_EQ(expected_payment(ws[0], pure[0]), 0.25);
}

TEST(PolicyFromSelection, RejectsBadBases) {
  const std::vector<WorkerProfile> ws = {{0.0, 0.25, "a"}};
  EXPECT_THROW(policy_from_selection(ws, {true}, std::vector<double>{0.1}), DomainError);
  EXPECT_THROW(policy_from_selection(ws, {true}, std::vector<double>{0.3}), DomainError);
  EXPECT_THROW(policy_from_selection(ws, {true, false}), ConfigError);
}

TEST(PolicyFromSelection, DecisionsReproduceSelection) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const auto ws = crowdprice::testing::random_profile(rng, 8);
    std::vector<bool> x(ws.size());
    std::vector<double> base(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
      x[i] = u(rng) < 0.5;
      base[i] = u(rng) * ws[i].cost;
    }
    const auto pol = policy_from_selection(ws, x, base);
    for (std::size_t i = 0; i < ws.size(); ++i) EXPECT_EQ(decide(ws[i], pol[i]), static_cast<bool>(x[i]));
  }
}

TEST(SolveOppNoBonus, EqualsExactOnRandomInstances) {
  std::mt19937_64 rng(12);
  const auto U = make_typo_utility(25, 1);
  for (int t = 0; t < 50; ++t) {
    const auto ws = crowdprice::testing::random_profile(rng, 9);
    const double B = crowdprice::testing::random_budget(rng, ws);
    const auto nb = solve_opp_no_bonus({ws, B, U});
    EXPECT_EQ(nb.selection.utility_value, solve_gkp_exact({ws, B, U}).utility_value);
    for (std::size_t i = 0; i < ws.size(); ++i) EXPECT_EQ(nb.policy[i].bonus, 0.0);
  }
}

TEST(Properties, GreedyHalfBound) {
  std::mt19937_64 rng(21);
  const auto U = make_typo_utility(25, 1);
  for (int t = 0; t < 100; ++t) {
    const auto ws = crowdprice::testing::random_profile(rng, 10);
    const double B = crowdprice::testing::random_budget(rng, ws);
    const GkpInstance inst{ws, B, U};
    const auto g = modified_greedy(inst);
    EXPECT_GE(g.selection.utility_value, 0.5 * solve_gkp_exact(inst).utility_value);
    EXPECT_LE(g.selection.spent, B);
  }
}

TEST(Properties, RelaxationDominatesUnderAdditiveUtility) {
  std::mt19937_64 rng(22);
  const auto U = make_additive_utility();
  for (int t = 0; t < 100; ++t) {
    const auto ws = crowdprice::testing::random_profile(rng, 10);
    const GkpInstance inst{ws, crowdprice::testing::random_budget(rng, ws), U};
    EXPECT_GE(solve_gkp_relaxed(inst).value, solve_gkp_exact(inst).utility_value - 1e-12);
  }
}

// The quality/cost-ordered fractional point is not the relaxation optimum for
// a Schur-convex utility: one near-certain worker beats a fractional one.
TEST(Properties, RelaxationCanFallBelowExactUnderTypoUtility) {
  const std::vector<WorkerProfile> ws = {{0.5, 0.1, "a"}, {0.99, 0.5, "b"}};
  const GkpInstance inst{ws, 0.5, make_typo_utility(25, 1)};
  const auto relaxed = solve_gkp_relaxed(inst);
  EXPECT_EQ(relaxed.z[0], 1.0);
  EXPECT_NEAR(relaxed.z[1], 0.8, 1e-15);
  const auto exact = solve_gkp_exact(inst);
  EXPECT_EQ(exact.x, (std::vector<bool>{false, true}));
  EXPECT_LT(relaxed.value, exact.utility_value);
}
