// mpwmi: exact weighted model integration on tree-structured problems.
//
// Exit codes: 0 ok, 1 usage or input error, 2 structural error (cycle or
// unbounded domain), 3 oracle mismatch in `check`.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mpwmi/mpwmi.hpp"

namespace {

using json = nlohmann::json;
using namespace mpwmi;

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_structure = 2;
constexpr int exit_mismatch = 3;

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

int fail(const Error& e) {
  json j{{"error", to_string(e.code())}, {"message", e.what()}};
  if (const auto* cyc = dynamic_cast<const NotATreeError*>(&e)) j["cycle"] = cyc->cycle();
  print(j);
  std::cerr << "mpwmi: " << e.what() << '\n';
  const bool structural = e.code() == ErrorCode::NotATree || e.code() == ErrorCode::UnboundedDomain;
  return structural ? exit_structure : exit_input;
}

VarId resolve(const Problem& p, const std::string& name) {
  if (auto v = p.find(name)) return *v;
  throw Error(ErrorCode::UnknownRoot, "no variable named '" + name + "'");
}

json z_json(const Rational& z) { return {{"wmi", z.get_str()}, {"wmi_float", to_double(z)}}; }

json timings_json(const PhaseTimings& t, double parse_ms) {
  return {{"parse_ms", parse_ms}, {"upward_ms", t.upward_ms}, {"downward_ms", t.downward_ms},
          {"integrate_ms", t.integrate_ms}};
}

struct Loaded {
  std::shared_ptr<const Problem> problem;
  double parse_ms;
};

Loaded load(const std::string& path) {
  const auto t0 = std::chrono::steady_clock::now();
  auto p = std::make_shared<const Problem>(io::load_problem(path));
  return {p, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()};
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string file;
  std::string root;
  bool emit_graph = false;
  bool certify = false;
  bool timings = false;
  unsigned jobs = 1;
};

int cmd_solve(const SolveArgs& a) {
  auto [problem, parse_ms] = load(a.file);
  SolveOptions opts;
  opts.jobs = a.jobs;
  if (!a.root.empty()) opts.root = resolve(*problem, a.root);
  const Solution sol = mp_wmi(problem, opts);
  json out = z_json(sol.partition_function());
  json roots = json::array();
  for (VarId r : sol.graph().roots()) roots.push_back(problem->name(r));
  out["roots"] = roots;
  out["variables"] = problem->size();
  out["components"] = sol.graph().components().size();
  if (a.timings) out["timings"] = timings_json(sol.timings(), parse_ms);
  if (a.emit_graph) {
    json edges = json::array();
    for (const auto& [x, y] : sol.graph().primal().edges) edges.push_back({problem->name(x), problem->name(y)});
    out["primal_edges"] = edges;
    out["factor_graph"] = sol.graph().to_dot();
  }
  if (a.certify) out["certificate"] = io::certificate_json(certify_piece_bound(sol));
  print(out);
  return exit_ok;
}

// ------------------------------------------------------------ marginals

struct MarginalArgs {
  std::string file;
  std::string var;
  unsigned moments = 0;
  bool normalize = false;
  unsigned jobs = 1;
};

int cmd_marginals(const MarginalArgs& a) {
  auto [problem, parse_ms] = load(a.file);
  SolveOptions opts;
  opts.jobs = a.jobs;
  const Solution sol = mp_wmi(problem, opts);
  std::vector<VarId> vars;
  if (!a.var.empty()) {
    vars.push_back(resolve(*problem, a.var));
  } else {
    for (VarId v = 0; v < problem->size(); ++v) vars.push_back(v);
  }
  const bool degenerate = sol.partition_function() == 0;
  json out = z_json(sol.partition_function());
  out["degenerate"] = degenerate;
  out["normalized"] = a.normalize && !degenerate;
  json marginals = json::object();
  json integrals = json::object();
  json moments = json::object();
  for (VarId v : vars) {
    const auto& name = problem->name(v);
    if (degenerate) {
      marginals[name] = json::array();
      continue;
    }
    const Piecewise f = a.normalize ? sol.marginal(v) : sol.unnormalized_marginal(v);
    marginals[name] = io::piecewise_json(f, name);
    integrals[name] = f.integral().get_str();
    if (a.moments > 0) {
      json m = json::object();
      for (unsigned k = 1; k <= a.moments; ++k) {
        const Rational mk = sol.moment(v, k);
        m[std::to_string(k)] = {{"exact", mk.get_str()}, {"float", to_double(mk)}};
      }
      moments[name] = m;
    }
  }
  out["marginals"] = marginals;
  if (!degenerate) out["integrals"] = integrals;
  if (a.moments > 0 && !degenerate) out["moments"] = moments;
  print(out);
  return exit_ok;
}

// ---------------------------------------------------------------- query

struct QueryArgs {
  std::string file;
  std::string queries;
  std::string condition;
};

std::string scope_names(const Problem& p, const Query& q) {
  std::string s;
  for (VarId v : q.variables()) s += (s.empty() ? "" : ",") + p.name(v);
  return "{" + s + "}";
}

int cmd_query(const QueryArgs& a) {
  auto [problem, parse_ms] = load(a.file);
  std::vector<Query> queries = io::parse_queries(io::read_json_file(a.queries), *problem);
  if (!a.condition.empty()) {
    const auto extra = io::parse_condition(io::read_json_file(a.condition), *problem);
    for (auto& q : queries) q.condition.insert(q.condition.end(), extra.begin(), extra.end());
  }
  const Solution sol = mp_wmi(problem);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    try {
      check_query(sol.graph(), queries[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "query " + std::to_string(i) + " has scope " + scope_names(*problem, queries[i]) +
                                ", which is neither a factor scope nor a pair from two components");
    }
  }
  json answers = json::array();
  for (const auto& q : queries) {
    try {
      const Rational r = query_probability(sol, q);
      answers.push_back({{"probability", r.get_str()}, {"float", to_double(r)}});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroConditionProbability && e.code() != ErrorCode::ZeroPartition) throw;
      answers.push_back({{"error", to_string(e.code())}, {"message", e.what()}});
    }
  }
  json out = z_json(sol.partition_function());
  out["answers"] = answers;
  print(out);
  return exit_ok;
}

// ------------------------------------------------------------- generate

struct GenerateArgs {
  std::string structure = "PATH";
  std::size_t n = 5;
  std::uint64_t seed = 0;
  std::size_t atoms = 1;
  unsigned degree = 1;
  double fraction = 0.5;
  int bounds = 2;
  std::string output;
  std::size_t queries = 0;
  std::string query_output;
};

int cmd_generate(const GenerateArgs& a) {
  bench::GenConfig cfg;
  cfg.structure = bench::parse_structure(a.structure);
  cfg.n = a.n;
  cfg.seed = a.seed;
  cfg.atoms_per_edge = a.atoms;
  cfg.weight_degree = a.degree;
  cfg.weighted_fraction = a.fraction;
  cfg.bounds_range = a.bounds;
  const Problem p = bench::generate(cfg);
  const std::string text = io::problem_json(p).dump(2) + "\n";
  if (a.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream(a.output) << text;
  }
  if (a.queries > 0) {
    const std::string qtext = io::queries_json(bench::generate_queries(p, a.queries, a.seed + 1), p).dump(2) + "\n";
    if (a.query_output.empty()) throw Error(ErrorCode::InvalidConfig, "--queries needs --query-out");
    std::ofstream(a.query_output) << qtext;
  }
  return exit_ok;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string mode = "scaling";
  std::vector<std::string> structures{"STAR", "SNOW", "PATH"};
  std::vector<std::size_t> sizes{2, 4, 6, 8, 10};
  std::size_t per_size = 1;
  double timeout = 60;
  std::uint64_t seed = 0;
  std::size_t queries = 100;
  std::size_t atoms = 1;
  unsigned degree = 1;
  unsigned jobs = 1;
  bool quiet = false;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<bench::Structure> structures;
  for (const auto& s : a.structures) structures.push_back(bench::parse_structure(s));
  bench::Progress progress;
  if (!a.quiet) progress = [](const std::string& line) { std::cerr << line << '\n'; };
  if (a.mode == "scaling") {
    bench::ScalingConfig cfg;
    cfg.structures = structures;
    cfg.sizes = a.sizes;
    cfg.per_size = a.per_size;
    cfg.timeout_s = a.timeout;
    cfg.seed = a.seed;
    cfg.atoms_per_edge = a.atoms;
    cfg.weight_degree = a.degree;
    cfg.jobs = a.jobs;
    bench::write_scaling_csv(std::cout, bench::run_scaling(cfg, progress));
  } else {
    bench::AmortizeConfig cfg;
    cfg.structures = structures;
    cfg.sizes = a.sizes;
    cfg.per_size = a.per_size;
    cfg.queries = a.queries;
    cfg.seed = a.seed;
    cfg.atoms_per_edge = a.atoms;
    cfg.weight_degree = a.degree;
    bench::write_amortize_csv(std::cout, bench::run_amortize(cfg, progress));
  }
  return exit_ok;
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::string file;
  std::string oracle = "enum";
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  std::size_t max_vars = 5;
  bool inject_fault = false;
};

// Scales the first weight by 3/2, or weighs the first literal by 2 when
// there is no weight yet. The solver sees the corrupted problem, the
// oracle the original one.
Problem corrupt(Problem p) {
  if (!p.weights.empty()) {
    p.weights.front().weight = p.weights.front().weight * Rational(3, 2);
    return p;
  }
  Literal lit = !p.clauses.empty() ? p.clauses.front().literals.front()
                                   : normalize_atom({{0, Rational(1)}}, (p.variables[0].lower + p.variables[0].upper) / 2,
                                                    RawCmp::LT);
  p.weights.push_back(WeightedLiteral{lit, Polynomial::constant(2)});
  validate(p);
  return p;
}

int cmd_check(const CheckArgs& a) {
  auto [problem, parse_ms] = load(a.file);
  const Problem solved = a.inject_fault ? corrupt(*problem) : *problem;
  const Rational z = mp_wmi(solved).partition_function();
  json out{{"solver", z_json(z)}, {"oracle_kind", a.oracle}, {"fault_injected", a.inject_fault}};
  bool match = false;
  if (a.oracle == "enum") {
    oracle::EnumOptions opts;
    opts.max_variables = a.max_vars;
    const Rational e = oracle::enum_wmi(*problem, opts);
    out["oracle"] = z_json(e);
    match = e == z;
  } else if (a.oracle == "mc") {
    const auto est = oracle::mc_wmi(*problem, a.samples, a.seed);
    out["oracle"] = {{"mean", est.mean}, {"std_error", est.std_error}, {"samples", est.samples}, {"seed", est.seed}};
    const double dev = std::abs(to_double(z) - est.mean);
    out["deviation_sigmas"] = est.std_error > 0 ? dev / est.std_error : (dev == 0 ? 0.0 : INFINITY);
    match = dev <= 4 * est.std_error;
  } else {
    throw Error(ErrorCode::InvalidConfig, "oracle must be 'enum' or 'mc'");
  }
  out["match"] = match;
  print(out);
  return match ? exit_ok : exit_mismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact weighted model integration by message passing"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Partition function of a problem file");
  s->add_option("file", solve.file, "Problem JSON")->required();
  s->add_option("--root", solve.root, "Root variable name");
  s->add_flag("--emit-graph", solve.emit_graph, "Include the primal edges and the factor graph (DOT)");
  s->add_flag("--certify", solve.certify, "Include the piece-count certificate");
  s->add_flag("--timings", solve.timings, "Include per-phase wall times");
  s->add_option("--jobs", solve.jobs, "Worker threads")->check(CLI::PositiveNumber);

  MarginalArgs marg;
  auto* m = app.add_subcommand("marginals", "Per-variable marginals and moments");
  m->add_option("file", marg.file, "Problem JSON")->required();
  m->add_option("--var", marg.var, "Only this variable");
  m->add_option("--moments", marg.moments, "Moments 1..K");
  m->add_flag("--normalize", marg.normalize, "Divide by the partition function");
  m->add_option("--jobs", marg.jobs, "Worker threads")->check(CLI::PositiveNumber);

  QueryArgs query;
  auto* q = app.add_subcommand("query", "Amortized probability queries");
  q->add_option("file", query.file, "Problem JSON")->required();
  q->add_option("--query", query.queries, "Query JSON")->required();
  q->add_option("--condition", query.condition, "Condition JSON applied to every query");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Random tree-structured problem");
  g->add_option("--structure", gen.structure, "STAR, SNOW or PATH");
  g->add_option("--n", gen.n, "Variable count");
  g->add_option("--seed", gen.seed, "Seed");
  g->add_option("--atoms", gen.atoms, "Clauses per edge");
  g->add_option("--degree", gen.degree, "Degree of q in the weights q^2 + 1/10");
  g->add_option("--fraction", gen.fraction, "Share of literals that carry a weight");
  g->add_option("--bounds", gen.bounds, "Bounds are integers in [-B, B]");
  g->add_option("-o,--output", gen.output, "Output file (default stdout)");
  g->add_option("--queries", gen.queries, "Also generate this many queries");
  g->add_option("--query-out", gen.query_output, "Query output file");

  BenchArgs bench_args;
  auto* b = app.add_subcommand("bench", "Scaling or amortization experiment, CSV on stdout");
  b->add_option("mode", bench_args.mode, "scaling or amortize")->check(CLI::IsMember({"scaling", "amortize"}));
  b->add_option("--structures", bench_args.structures, "Structures")->delimiter(',');
  b->add_option("--sizes", bench_args.sizes, "Variable counts")->delimiter(',');
  b->add_option("--per-size", bench_args.per_size, "Instances per size");
  b->add_option("--timeout", bench_args.timeout, "Seconds per instance (scaling)");
  b->add_option("--seed", bench_args.seed, "Seed");
  b->add_option("--queries", bench_args.queries, "Queries per instance (amortize)");
  b->add_option("--atoms", bench_args.atoms, "Clauses per edge");
  b->add_option("--degree", bench_args.degree, "Weight degree");
  b->add_option("--jobs", bench_args.jobs, "Worker threads")->check(CLI::PositiveNumber);
  b->add_flag("--quiet", bench_args.quiet, "No progress on stderr");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Compare the solver with an oracle");
  c->add_option("file", check.file, "Problem JSON")->required();
  c->add_option("--oracle", check.oracle, "enum or mc")->check(CLI::IsMember({"enum", "mc"}));
  c->add_option("--samples", check.samples, "Monte Carlo samples");
  c->add_option("--seed", check.seed, "Monte Carlo seed");
  c->add_option("--max-vars", check.max_vars, "Variable cap of the enumeration oracle");
  c->add_flag("--inject-fault", check.inject_fault, "Corrupt one weight before solving");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_input;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*m) return cmd_marginals(marg);
    if (*q) return cmd_query(query);
    if (*g) return cmd_generate(gen);
    if (*b) return cmd_bench(bench_args);
    if (*c) return cmd_check(check);
  } catch (const Error& e) {
    return fail(e);
  } catch (const nlohmann::json::exception& e) {
    return fail(Error(ErrorCode::ParseError, e.what()));
  }
  return exit_input;
}
