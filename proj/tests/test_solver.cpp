#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace mpwmi;
using testing_support::piece;
using testing_support::problem_from;
using testing_support::q;
using testing_support::shipped;

namespace {

Rational z_of(const Problem& p, SolveOptions opts = {}) { return mp_wmi(p, opts).partition_function(); }

const Piecewise& to_variable(const Solution& sol, VarId v, std::size_t f) {
  return *sol.messages().to_variable[sol.graph().edge_index(v, f)];
}

}  // namespace

TEST(Solve, HandCases) {
  EXPECT_EQ(z_of(shipped("triangle.json")), q("1/2"));
  EXPECT_EQ(z_of(shipped("unit_square.json")), q("1"));
  EXPECT_EQ(z_of(shipped("weighted_triangle.json")), q("2/3"));
  EXPECT_EQ(z_of(shipped("weighted_square.json")), q("3/2"));
  EXPECT_EQ(z_of(shipped("boolean_or.json")), q("3"));
}

TEST(Solve, Unsatisfiable) {
  const Problem p = problem_from(R"({"variables": [{"name": "x", "lower": 0, "upper": 1}, {"name": "y", "lower": 0, "upper": 1}],
      "clauses": [[{"coeffs": {"x": 1}, "const": 0, "op": "<="}], [{"coeffs": {"x": 1}, "const": 1, "op": ">="}],
                  [{"coeffs": {"x": 1, "y": -1}, "const": 0, "op": "<"}]]})");
  const Solution sol = mp_wmi(p);
  EXPECT_EQ(sol.partition_function(), 0);
  EXPECT_TRUE(sol.unnormalized_marginal(0).empty());
  try {
    sol.marginal(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroPartition);
  }
}

TEST(Solve, UnsatisfiableSingleVariableHasOnlyEmptyMessages) {
  const Solution sol = mp_wmi(problem_from(R"({"variables": [{"name": "x", "lower": 0, "upper": 1}],
      "clauses": [[{"coeffs": {"x": 1}, "const": 0, "op": "<="}], [{"coeffs": {"x": 1}, "const": 1, "op": ">="}]]})"));
  EXPECT_EQ(sol.partition_function(), 0);
  for (const auto& m : sol.messages().to_variable) EXPECT_TRUE(m->empty());
}

TEST(Solve, LeafMessageIsConstantOnBounds) {
  const Solution sol = mp_wmi(shipped("triangle.json"));
  const auto& g = sol.graph();
  const std::size_t f = *g.pair_factor(0, 1);
  const VarId leaf = g.roots()[0] == 0 ? 1 : 0;
  EXPECT_EQ(sol.messages().to_factor[g.edge_index(leaf, f)]->pieces(), (std::vector<Piece>{piece("0", "1", {1})}));
}

TEST(Solve, TriangleMarginalsAndMoments) {
  const Solution sol = mp_wmi(shipped("triangle.json"));
  EXPECT_EQ(sol.unnormalized_marginal(0).pieces(), (std::vector<Piece>{piece("0", "1", {0, 1})}));
  EXPECT_EQ(sol.unnormalized_marginal(1).pieces(), (std::vector<Piece>{piece("0", "1", {1, -1})}));
  EXPECT_EQ(sol.moment(0, 1), q("2/3"));
  EXPECT_EQ(sol.moment(0, 0), 1);
  EXPECT_EQ(sol.marginal(0).integral(), 1);
}

TEST(Solve, UnitSquareMarginal) {
  const Solution sol = mp_wmi(shipped("unit_square.json"));
  EXPECT_EQ(sol.unnormalized_marginal(0).pieces(), (std::vector<Piece>{piece("0", "1", {1})}));
  EXPECT_EQ(sol.moment(0, 1), q("1/2"));
  EXPECT_EQ(sol.moment(1, 2), q("1/3"));
}

TEST(Solve, SkillMatchingPartitionFunction) {
  const Solution sol = mp_wmi(shipped("skill_matching.json"));
  EXPECT_EQ(sol.partition_function(), q("170691/1000"));
  EXPECT_NEAR(to_double(sol.partition_function()), 170.69, 0.005);
}

TEST(Solve, SkillMatchingMessagesIntoTeamVariable) {
  const Problem p = shipped("skill_matching.json");
  SolveOptions opts;
  opts.root = *p.find("xt");
  const Solution sol = mp_wmi(p, opts);
  const auto& g = sol.graph();
  const std::vector<Piece> player{
      piece("0", "1", {q("91/30"), q("7/5"), q("-7/5"), q("7/30")}),
      piece("1", "6", {q("109/15"), q("-24/5"), q("4/5")}),
      piece("6", "7", {q("172/15"), q("-97/10"), q("29/10"), q("-7/30")}),
  };
  EXPECT_EQ(to_variable(sol, 0, *g.pair_factor(0, 1)).pieces(), player);
  EXPECT_EQ(to_variable(sol, 0, *g.pair_factor(0, 2)).pieces(), player);
  EXPECT_EQ(to_variable(sol, 0, *g.pair_factor(0, 3)).pieces(),
            (std::vector<Piece>{piece("0", "2", {1}), piece("2", "7", {2})}));
}

TEST(Solve, RootInvarianceAndConsistency) {
  for (auto s : {bench::Structure::Path, bench::Structure::Snow, bench::Structure::Star}) {
    auto cfg = testing_support::gen(s, 6, 11);
    cfg.weight_degree = 2;
    const Problem p = bench::generate(cfg);
    const Rational z = z_of(p);
    for (VarId r = 0; r < p.size(); ++r) {
      SolveOptions opts;
      opts.root = r;
      const Solution sol = mp_wmi(p, opts);
      EXPECT_EQ(sol.partition_function(), z);
      EXPECT_NO_THROW(sol.check_consistency());
      for (VarId v = 0; v < p.size(); ++v) EXPECT_EQ(sol.unnormalized_marginal(v).integral(), z);
    }
  }
}

TEST(Solve, ForestMultipliesComponents) {
  const Problem two_triangles = problem_from(R"({"variables": [{"name": "a", "lower": 0, "upper": 1}, {"name": "b", "lower": 0, "upper": 1},
      {"name": "c", "lower": 0, "upper": 2}, {"name": "d", "lower": 0, "upper": 1}],
      "clauses": [[{"coeffs": {"b": 1, "a": -1}, "const": 0, "op": "<="}], [{"coeffs": {"d": 1}, "const": "1/2", "op": "<"}]]})");
  const Solution sol = mp_wmi(two_triangles);
  EXPECT_EQ(sol.graph().components().size(), 3u);
  EXPECT_EQ(sol.partition_function(), q("1/2"));
  EXPECT_EQ(sol.unnormalized_marginal(2).integral(), q("1/2"));
  EXPECT_NO_THROW(sol.check_consistency());
}

TEST(Solve, ParallelJobsGiveIdenticalMessages) {
  const Problem p = bench::generate(testing_support::gen(bench::Structure::Snow, 20, 3));
  const Solution serial = mp_wmi(p);
  SolveOptions opts;
  opts.jobs = 4;
  const Solution parallel = mp_wmi(p, opts);
  EXPECT_EQ(serial.partition_function(), parallel.partition_function());
  ASSERT_EQ(serial.messages().to_variable.size(), parallel.messages().to_variable.size());
  for (std::size_t e = 0; e < serial.messages().to_variable.size(); ++e) {
    EXPECT_EQ(serial.messages().to_variable[e]->pieces(), parallel.messages().to_variable[e]->pieces());
    EXPECT_EQ(serial.messages().to_factor[e]->pieces(), parallel.messages().to_factor[e]->pieces());
  }
}

TEST(Solve, UnitClauseWeightIsLinear) {
  const char* base = R"({"variables": [{"name": "x", "lower": 0, "upper": 1}, {"name": "y", "lower": 0, "upper": 2}],
      "clauses": [[{"coeffs": {"x": 1}, "const": "1/3", "op": ">"}], [{"coeffs": {"x": 1, "y": -1}, "const": 0, "op": "<"}]],
      "weights": [{"literal": {"coeffs": {"x": 1}, "const": "1/3", "op": ">"}, "poly": [{"coef": "KAPPA", "powers": {"x": 1}}]}]})";
  auto with = [&](const std::string& k) {
    std::string s = base;
    s.replace(s.find("KAPPA"), 5, k);
    return z_of(problem_from(s));
  };
  EXPECT_EQ(with("7/3"), q("7/3") * with("1"));
}

TEST(Solve, MessagesNonNegativeAtRandomPoints) {
  auto cfg = testing_support::gen(bench::Structure::Snow, 10, 8);
  cfg.weight_degree = 2;
  const Solution sol = mp_wmi(bench::generate(cfg));
  std::mt19937_64 rng(1);
  for (const auto* dir : {&sol.messages().to_variable, &sol.messages().to_factor}) {
    for (const auto& m : *dir) {
      if (m->empty()) continue;
      const auto pts = m->breakpoints();
      for (int k = 0; k < 100; ++k) {
        const Rational x = pts.front() + (pts.back() - pts.front()) * Rational(static_cast<long>(rng() % 100001), 100000);
        EXPECT_GE((*m)(x), 0);
      }
    }
  }
}

TEST(Solve, DeadlineInThePastTimesOut) {
  SolveOptions opts;
  opts.deadline = Clock::now() - std::chrono::seconds(1);
  try {
    mp_wmi(bench::generate(testing_support::gen(bench::Structure::Path, 5, 0)), opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Timeout);
  }
}

TEST(Solve, CyclicProblemRejected) {
  try {
    mp_wmi(shipped("cyclic.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotATree);
  }
}

TEST(Solve, SchedulePerComponent) {
  const Solution sol = mp_wmi(shipped("skill_matching_2v2.json"));
  EXPECT_EQ(sol.graph().components().size(), 2u);
  EXPECT_EQ(sol.schedules().size(), 2u);
  EXPECT_EQ(sol.partition_function(), q("5852600711/810000"));
}
