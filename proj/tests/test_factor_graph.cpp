#include <gtest/gtest.h>

#include "support.hpp"

using namespace mpwmi;
using testing_support::problem_from;

namespace {

FactorGraph graph_of(const std::string& text, std::optional<VarId> root = std::nullopt) {
  return factorize(std::make_shared<const Problem>(problem_from(text)), root);
}

}  // namespace

TEST(Factorize, DisjunctiveClauseOwnedByPairFactor) {
  const auto g = graph_of(R"({"variables": [{"name": "x", "lower": 0, "upper": 1}, {"name": "y", "lower": 0, "upper": 1}],
      "clauses": [[{"coeffs": {"y": 1, "x": -1}, "const": 0, "op": "<="}, {"coeffs": {"x": 1, "y": 1}, "const": 1, "op": "<="}]]})");
  ASSERT_EQ(g.factors().size(), 3u);
  EXPECT_TRUE(g.factor(0).is_unit());
  EXPECT_TRUE(g.factor(1).is_unit());
  EXPECT_EQ(g.factor(2).scope, (std::vector<VarId>{0, 1}));
  EXPECT_EQ(g.factor(2).clauses.size(), 1u);
  EXPECT_EQ(g.factor(2).clauses[0].literals.size(), 2u);
  EXPECT_EQ(g.pair_factor(1, 0), std::optional<std::size_t>(2));
}

TEST(Factorize, SingleVariable) {
  const auto g = graph_of(R"({"variables": [{"name": "x", "lower": 0, "upper": 1}]})");
  EXPECT_EQ(g.factors().size(), 1u);
  EXPECT_EQ(g.edges().size(), 1u);
}

TEST(Factorize, StarOfFour) {
  const auto g = graph_of(R"({"variables": [{"name": "c", "lower": 0, "upper": 1}, {"name": "a", "lower": 0, "upper": 1},
      {"name": "b", "lower": 0, "upper": 1}, {"name": "d", "lower": 0, "upper": 1}],
      "clauses": [[{"coeffs": {"c": 1, "a": -1}, "const": 0, "op": "<"}], [{"coeffs": {"c": 1, "b": -1}, "const": 0, "op": "<"}],
                  [{"coeffs": {"c": 1, "d": -1}, "const": 0, "op": "<"}]]})");
  std::size_t pairs = 0;
  for (const auto& f : g.factors()) pairs += f.is_unit() ? 0 : 1;
  EXPECT_EQ(pairs, 3u);
  EXPECT_EQ(g.factors().size(), 7u);
  EXPECT_EQ(g.roots(), (std::vector<VarId>{0}));
  EXPECT_EQ(g.variable_edges(0).size(), 4u);
}

TEST(Factorize, UnitClausesAndWeightsGoToUnitFactor) {
  const auto g = graph_of(R"({"variables": [{"name": "x", "lower": 0, "upper": 1}, {"name": "y", "lower": 0, "upper": 1}],
      "clauses": [[{"coeffs": {"x": 1}, "const": "1/2", "op": "<"}], [{"coeffs": {"x": 1, "y": -1}, "const": 0, "op": "<"}]],
      "weights": [{"literal": {"coeffs": {"x": 1}, "const": "1/2", "op": "<"}, "poly": [{"coef": 3}]},
                  {"literal": {"coeffs": {"x": 1, "y": -1}, "const": 0, "op": "<"}, "poly": [{"coef": 2}]}]})");
  EXPECT_EQ(g.factor(0).clauses.size(), 1u);
  EXPECT_EQ(g.factor(0).weights.size(), 1u);
  EXPECT_EQ(g.factor(1).clauses.size(), 0u);
  EXPECT_EQ(g.factor(2).weights.size(), 1u);
}

TEST(Factorize, CycleAndBadRoot) {
  EXPECT_THROW(graph_of(testing_support::triangle, VarId{7}), Error);
  const auto cyclic = testing_support::shipped("cyclic.json");
  try {
    factorize(std::make_shared<const Problem>(cyclic));
    FAIL();
  } catch (const NotATreeError& e) {
    EXPECT_EQ(e.cycle(), (std::vector<std::string>{"x", "y", "z"}));
  }
}

TEST(Schedule, ChainRootedAtSecondVariable) {
  const auto g = graph_of(testing_support::triangle);
  const Schedule s = schedule(g, 1);
  const std::size_t f = *g.pair_factor(0, 1);
  // Unit factors fire first; the x -> f -> y hop is the only pair traffic.
  std::vector<Step> pair_up, pair_down;
  for (const auto& st : s.upward)
    if ((st.from.is_variable() ? st.to.index : st.from.index) == f) pair_up.push_back(st);
  for (const auto& st : s.downward)
    if ((st.from.is_variable() ? st.to.index : st.from.index) == f) pair_down.push_back(st);
  ASSERT_EQ(pair_up.size(), 2u);
  EXPECT_EQ(pair_up[0].from, NodeRef::variable(0));
  EXPECT_EQ(pair_up[0].to, NodeRef::factor(f));
  EXPECT_EQ(pair_up[1].to, NodeRef::variable(1));
  ASSERT_EQ(pair_down.size(), 2u);
  EXPECT_EQ(pair_down[0].from, NodeRef::variable(1));
  EXPECT_EQ(pair_down[1].from, NodeRef::factor(f));
  EXPECT_EQ(pair_down[1].to, NodeRef::variable(0));
}

TEST(Schedule, SingleNodeHasNoPairTraffic) {
  const auto g = graph_of(R"({"variables": [{"name": "x", "lower": 0, "upper": 1}]})");
  const Schedule s = schedule(g, 0);
  ASSERT_EQ(s.upward.size(), 1u);  // the unit factor's message
  EXPECT_TRUE(s.upward[0].to.is_variable());
}

TEST(Schedule, DeterministicAndDownwardIsFlippedReverse) {
  const Problem p = bench::generate(testing_support::gen(bench::Structure::Snow, 13, 5));
  const auto g = factorize(std::make_shared<const Problem>(p));
  const Schedule a = schedule(g, g.roots()[0]);
  EXPECT_EQ(a, schedule(g, g.roots()[0]));
  ASSERT_EQ(a.upward.size(), a.downward.size());
  for (std::size_t k = 0; k < a.upward.size(); ++k) {
    const Step& u = a.upward[a.upward.size() - 1 - k];
    EXPECT_EQ(a.downward[k].from, u.to);
    EXPECT_EQ(a.downward[k].to, u.from);
  }
  // Every edge is used exactly once per direction.
  EXPECT_EQ(a.upward.size(), g.edges().size());
}

TEST(Schedule, EveryStepHasItsInputsReady) {
  const Problem p = bench::generate(testing_support::gen(bench::Structure::Star, 9, 2));
  const auto g = factorize(std::make_shared<const Problem>(p));
  for (VarId root = 0; root < p.size(); ++root) {
    const Schedule s = schedule(g, root);
    MessageStore store;
    store.to_variable.resize(g.edges().size());
    store.to_factor.resize(g.edges().size());
    for (const auto& st : s.upward) EXPECT_NO_THROW(send_message(g, store, st));
    for (const auto& st : s.downward) EXPECT_NO_THROW(send_message(g, store, st));
  }
}

TEST(Schedule, MissingInputIsReported) {
  const auto g = graph_of(testing_support::triangle);
  const Schedule s = schedule(g, 1);
  MessageStore store;
  store.to_variable.resize(g.edges().size());
  store.to_factor.resize(g.edges().size());
  // The pair factor cannot speak before x has spoken to it.
  const std::size_t f = *g.pair_factor(0, 1);
  const auto step = std::find_if(s.upward.begin(), s.upward.end(),
                                 [&](const Step& st) { return st.from == NodeRef::factor(f); });
  ASSERT_NE(step, s.upward.end());
  try {
    send_message(g, store, *step);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingInput);
  }
}

TEST(Schedule, LevelsStartAtZeroAndIncrease) {
  const Problem p = bench::generate(testing_support::gen(bench::Structure::Path, 7, 1));
  const auto g = factorize(std::make_shared<const Problem>(p));
  const Schedule s = schedule(g, g.roots()[0]);
  ASSERT_FALSE(s.upward_levels.empty());
  EXPECT_EQ(s.upward_levels.front(), 0u);
  EXPECT_TRUE(std::is_sorted(s.upward_levels.begin(), s.upward_levels.end()));
  EXPECT_EQ(s.upward_levels.size(), s.downward_levels.size());
  EXPECT_EQ(s.downward_levels.front(), 0u);
}

TEST(Factorize, DotOutputNamesVariables) {
  const auto g = graph_of(testing_support::triangle);
  const std::string dot = g.to_dot();
  EXPECT_NE(dot.find("label=\"x\""), std::string::npos);
  EXPECT_NE(dot.find("f(x,y)"), std::string::npos);
}
