#include <gtest/gtest.h>

#include "support.hpp"

using namespace mpwmi;
using testing_support::piece;
using testing_support::problem_from;
using testing_support::q;

namespace {

// x in [0, x_hi], y in [0, 1], with the given pair clauses; frame targets x.
struct PairSetup {
  std::shared_ptr<const Problem> problem;
  FactorGraph graph;
  std::size_t factor;

  FactorFrame frame() const { return FactorFrame(graph.factor(factor), 0); }
};

PairSetup pair_setup(const std::string& clauses, const std::string& x_hi = "2") {
  auto p = std::make_shared<const Problem>(problem_from(
      R"({"variables": [{"name": "x", "lower": 0, "upper": )" + x_hi +
      R"(}, {"name": "y", "lower": 0, "upper": 1}], "clauses": )" + clauses + "}"));
  auto g = factorize(p);
  const std::size_t f = *g.pair_factor(0, 1);
  return {p, std::move(g), f};
}

const std::string y_le_x = R"([[{"coeffs": {"y": 1, "x": -1}, "const": 0, "op": "<="}]])";

Piecewise one_on_unit() { return Piecewise::constant_on(0, 1); }

}  // namespace

TEST(CriticalPoints, LineMeetsMessageEndpoint) {
  const auto s = pair_setup(y_le_x);
  EXPECT_EQ(critical_points(one_on_unit(), s.frame(), 0, 2), (std::vector<Rational>{0, 1, 2}));
}

TEST(CriticalPoints, BoundsOnlyWithoutAtoms) {
  Factor empty;
  empty.scope = {0, 1};
  EXPECT_EQ(critical_points(one_on_unit(), FactorFrame(empty, 0), 0, 1), (std::vector<Rational>{0, 1}));
}

TEST(CriticalPoints, ParallelLines) {
  const auto s = pair_setup(R"([[{"coeffs": {"y": 1, "x": -1}, "const": 0, "op": "<="}],
                               [{"coeffs": {"y": 1, "x": -1}, "const": -1, "op": "<="}]])",
                            "3");
  EXPECT_EQ(critical_points(one_on_unit(), s.frame(), 0, 3), (std::vector<Rational>{0, 1, 2, 3}));
}

TEST(Intervals, FromPoints) {
  EXPECT_EQ(intervals_from_points({0, 1, 2}), (std::vector<Interval>{{0, 1}, {1, 2}}));
  EXPECT_TRUE(intervals_from_points({0}).empty());
  EXPECT_EQ(intervals_from_points({0, q("1/3"), 1}), (std::vector<Interval>{{0, q("1/3")}, {q("1/3"), 1}}));
}

TEST(MsgPieces, StripFollowsLineThenSaturates) {
  const auto s = pair_setup(y_le_x);
  auto first = get_msg_pieces(one_on_unit(), {0, 1}, s.frame());
  ASSERT_EQ(first.size(), 1u);
  EXPECT_EQ(first[0].lower, LinearBound::constant(0));
  EXPECT_EQ(first[0].upper, (LinearBound{1, 0}));
  EXPECT_EQ(first[0].integrand, Polynomial::constant(1));

  auto second = get_msg_pieces(one_on_unit(), {1, 2}, s.frame());
  ASSERT_EQ(second.size(), 1u);
  EXPECT_EQ(second[0].lower, LinearBound::constant(0));
  EXPECT_EQ(second[0].upper, LinearBound::constant(1));
}

TEST(MsgPieces, InfeasibleDisjunctDropped) {
  const auto s = pair_setup(R"([[{"coeffs": {"y": 1, "x": -1}, "const": 0, "op": "<="},
                                {"coeffs": {"y": 1, "x": -1}, "const": 5, "op": ">="}]])",
                            "1");
  auto pieces = get_msg_pieces(one_on_unit(), {0, 1}, s.frame());
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_EQ(pieces[0].lower, LinearBound::constant(0));
  EXPECT_EQ(pieces[0].upper, (LinearBound{1, 0}));
}

TEST(MsgPieces, IntegrandCarriesMessageAndWeight) {
  auto p = std::make_shared<const Problem>(problem_from(R"({"variables": [{"name": "x", "lower": 0, "upper": 1},
      {"name": "y", "lower": 0, "upper": 1}],
      "clauses": [[{"coeffs": {"y": 1, "x": -1}, "const": 0, "op": "<="}]],
      "weights": [{"literal": {"coeffs": {"y": 1, "x": -1}, "const": 0, "op": "<="}, "poly": [{"coef": 2, "powers": {"x": 1}}]}]})"));
  const auto g = factorize(p);
  const FactorFrame frame(g.factor(*g.pair_factor(0, 1)), 0);
  const Piecewise msg({piece("0", "1", {0, 1})});  // m(y) = y
  auto pieces = get_msg_pieces(msg, {0, 1}, frame);
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_EQ(pieces[0].integrand, Polynomial::constant(2) * Polynomial::variable(0) * Polynomial::variable(1));
}

TEST(FactorMessage, StripLengthMinOfXAndOne) {
  const auto s = pair_setup(y_le_x);
  const Piecewise m = factor_to_variable(s.frame(), one_on_unit(), 0, 2);
  EXPECT_EQ(m.pieces(), (std::vector<Piece>{piece("0", "1", {0, 1}), piece("1", "2", {1})}));
}

TEST(FactorMessage, EmptyIncomingGivesEmpty) {
  const auto s = pair_setup(y_le_x);
  EXPECT_TRUE(factor_to_variable(s.frame(), Piecewise(), 0, 2).empty());
}

TEST(FactorMessage, UnitFactorWithClauseAndWeight) {
  auto p = std::make_shared<const Problem>(problem_from(R"({"variables": [{"name": "x", "lower": 0, "upper": 2}],
      "clauses": [[{"coeffs": {"x": 1}, "const": "1/2", "op": ">"}]],
      "weights": [{"literal": {"coeffs": {"x": 1}, "const": 1, "op": "<"}, "poly": [{"coef": 3, "powers": {"x": 2}}]}]})"));
  const auto g = factorize(p);
  const Piecewise m = unit_factor_message(FactorFrame(g.factor(0), 0), 0, 2);
  EXPECT_EQ(m.pieces(), (std::vector<Piece>{piece("1/2", "1", {0, 0, 3}), piece("1", "2", {1})}));
}

TEST(FactorMessage, WeightedTriangleHandIntegral) {
  // m(x) = integral over y in [0, x] of 2x = 2x^2 on [0, 1].
  auto p = std::make_shared<const Problem>(testing_support::shipped("weighted_triangle.json"));
  const auto g = factorize(p);
  const FactorFrame frame(g.factor(*g.pair_factor(0, 1)), 0);
  EXPECT_EQ(factor_to_variable(frame, one_on_unit(), 0, 1).pieces(), (std::vector<Piece>{piece("0", "1", {0, 0, 2})}));
  // Toward y: integral over x in [y, 1] of 2x = 1 - y^2.
  const FactorFrame back(g.factor(*g.pair_factor(0, 1)), 1);
  EXPECT_EQ(factor_to_variable(back, one_on_unit(), 0, 1).pieces(), (std::vector<Piece>{piece("0", "1", {1, 0, -1})}));
}

TEST(FactorMessage, MatchesIteratedIntegralOnSkewedLines) {
  // x in [0, 2], y in [0, 1], clause (x + 2y <= 2) or (y >= 3/4); incoming m(y) = 1 + y.
  const auto s = pair_setup(R"([[{"coeffs": {"x": 1, "y": 2}, "const": 2, "op": "<="}, {"coeffs": {"y": 1}, "const": "3/4", "op": ">="}]])");
  const Piecewise msg({piece("0", "1", {1, 1})});
  const Piecewise m = factor_to_variable(s.frame(), msg, 0, 2);
  // y in [0, (2 - x)/2] union [3/4, 1]; the union is all of [0, 1] for x <= 1/2.
  auto F = [](const Rational& y) -> Rational { return y + y * y / 2; };
  for (Rational x : {q("1/4"), q("1/3"), q("3/4"), q("3/2"), q("19/10")}) {
    const Rational top = (2 - x) / 2;
    const Rational expect = top >= q("3/4") ? F(1) : F(top) + F(1) - F(q("3/4"));
    EXPECT_EQ(m(x), expect) << "x = " << x;
  }
}
