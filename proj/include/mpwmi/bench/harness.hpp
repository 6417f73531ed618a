#pragma once

// Scaling and amortization experiments with CSV output.
//
// scaling:   structure,n,seed,instance,phase_parse_ms,phase_up_ms,phase_down_ms,
//            phase_int_ms,total_ms,pieces,bound,bound_ok,timeout,z_float
// amortize:  structure,n,seed,instance,queries,solve_ms,amortized_ms,cold_ms,
//            speedup,all_equal

#include <chrono>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mpwmi/bench/generator.hpp"
#include "mpwmi/certificate.hpp"
#include "mpwmi/io.hpp"
#include "mpwmi/query.hpp"
#include "mpwmi/solver.hpp"

namespace mpwmi::bench {

struct ScalingRecord {
  Structure structure = Structure::Path;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t instance = 0;
  double parse_ms = 0;
  double up_ms = 0;
  double down_ms = 0;
  double int_ms = 0;
  double total_ms = 0;
  std::string pieces;  // empty on timeout
  std::string bound;
  bool bound_ok = false;
  bool timeout = false;
  double z = 0;
};

struct AmortizeRecord {
  Structure structure = Structure::Path;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t instance = 0;
  std::size_t queries = 0;
  double solve_ms = 0;
  double amortized_ms = 0;  // solve plus all queries
  double cold_ms = 0;
  bool all_equal = false;

  double speedup() const { return amortized_ms > 0 ? cold_ms / amortized_ms : 0; }
};

struct ScalingConfig {
  std::vector<Structure> structures{Structure::Star, Structure::Snow, Structure::Path};
  std::vector<std::size_t> sizes{2, 4, 6, 8, 10};
  std::size_t per_size = 1;
  double timeout_s = 60;
  std::uint64_t seed = 0;
  std::size_t atoms_per_edge = 1;
  unsigned weight_degree = 1;
  unsigned jobs = 1;
};

struct AmortizeConfig {
  std::vector<Structure> structures{Structure::Path, Structure::Snow, Structure::Star};
  std::vector<std::size_t> sizes{30};
  std::size_t per_size = 1;
  std::size_t queries = 100;
  std::uint64_t seed = 0;
  std::size_t atoms_per_edge = 1;
  unsigned weight_degree = 1;
};

/// Seed of one generated instance, mixed from the run seed and its position.
inline std::uint64_t instance_seed(std::uint64_t seed, Structure s, std::size_t n, std::size_t instance) {
  std::uint64_t h = seed * 0x9E3779B97F4A7C15ULL;
  for (std::uint64_t x : {static_cast<std::uint64_t>(s) + 1, static_cast<std::uint64_t>(n),
                          static_cast<std::uint64_t>(instance)}) {
    h ^= x + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string fixed(double x, int digits = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

}  // namespace detail

using Progress = std::function<void(const std::string&)>;

/// One record per (structure, size, instance), in that order. Timeouts are
/// recorded, never raised.
inline std::vector<ScalingRecord> run_scaling(const ScalingConfig& cfg, const Progress& progress = {}) {
  std::vector<ScalingRecord> out;
  for (Structure s : cfg.structures) {
    for (std::size_t n : cfg.sizes) {
      for (std::size_t i = 0; i < cfg.per_size; ++i) {
        ScalingRecord r;
        r.structure = s;
        r.n = n;
        r.seed = instance_seed(cfg.seed, s, n, i);
        r.instance = i;
        GenConfig gen;
        gen.structure = s;
        gen.n = n;
        gen.seed = r.seed;
        gen.atoms_per_edge = cfg.atoms_per_edge;
        gen.weight_degree = cfg.weight_degree;
        const std::string text = io::problem_json(generate(gen)).dump();

        const auto start = std::chrono::steady_clock::now();
        auto t0 = start;
        auto problem = std::make_shared<const Problem>(io::parse_problem(io::json::parse(text)));
        r.parse_ms = detail::ms_since(t0);
        SolveOptions opts;
        opts.jobs = cfg.jobs;
        opts.deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.timeout_s));
        try {
          if (cfg.timeout_s <= 0) throw Error(ErrorCode::Timeout, "zero timeout");
          Solution sol = mp_wmi(problem, opts);
          r.up_ms = sol.timings().upward_ms;
          r.down_ms = sol.timings().downward_ms;
          r.int_ms = sol.timings().integrate_ms;
          r.total_ms = detail::ms_since(start);
          r.z = to_double(sol.partition_function());
          const auto cert = certify_piece_bound(sol);
          r.pieces = cert.measured_pieces.get_str();
          r.bound = cert.total_bound.get_str();
          r.bound_ok = cert.ok;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::Timeout) throw;
          r.timeout = true;
          r.total_ms = detail::ms_since(start);
        }
        if (progress)
          progress(to_string(s) + " n=" + std::to_string(n) + " #" + std::to_string(i) +
                   (r.timeout ? " timeout" : " " + detail::fixed(r.total_ms, 1) + " ms"));
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

inline void write_scaling_csv(std::ostream& os, const std::vector<ScalingRecord>& rows) {
  os << "structure,n,seed,instance,phase_parse_ms,phase_up_ms,phase_down_ms,phase_int_ms,total_ms,pieces,bound,"
        "bound_ok,timeout,z_float\n";
  for (const auto& r : rows) {
    std::ostringstream z;
    z << std::setprecision(17) << r.z;
    os << to_string(r.structure) << ',' << r.n << ',' << r.seed << ',' << r.instance << ','
       << detail::fixed(r.parse_ms) << ',' << detail::fixed(r.up_ms) << ',' << detail::fixed(r.down_ms) << ','
       << detail::fixed(r.int_ms) << ',' << detail::fixed(r.total_ms) << ',' << r.pieces << ',' << r.bound << ','
       << (r.bound_ok ? 1 : 0) << ',' << (r.timeout ? 1 : 0) << ',' << (r.timeout ? "" : z.str()) << '\n';
  }
}

/// Amortized answers (one solve, then one recomputed message per query)
/// against cold re-solves of the problem conjoined with each query.
inline std::vector<AmortizeRecord> run_amortize(const AmortizeConfig& cfg, const Progress& progress = {}) {
  if (cfg.queries < 1) throw Error(ErrorCode::InvalidConfig, "need at least one query");
  std::vector<AmortizeRecord> out;
  for (Structure s : cfg.structures) {
    for (std::size_t n : cfg.sizes) {
      for (std::size_t i = 0; i < cfg.per_size; ++i) {
        AmortizeRecord r;
        r.structure = s;
        r.n = n;
        r.seed = instance_seed(cfg.seed, s, n, i);
        r.instance = i;
        r.queries = cfg.queries;
        GenConfig gen;
        gen.structure = s;
        gen.n = n;
        gen.seed = r.seed;
        gen.atoms_per_edge = cfg.atoms_per_edge;
        gen.weight_degree = cfg.weight_degree;
        const Problem p = generate(gen);
        const auto queries = generate_queries(p, cfg.queries, r.seed + 1);

        auto t0 = std::chrono::steady_clock::now();
        const Solution sol = mp_wmi(p);
        r.solve_ms = detail::ms_since(t0);
        std::vector<Rational> warm;
        for (const auto& q : queries) warm.push_back(query_probability(sol, q));
        r.amortized_ms = detail::ms_since(t0);

        t0 = std::chrono::steady_clock::now();
        std::vector<Rational> cold;
        for (const auto& q : queries) cold.push_back(cold_query_probability(p, q, {}, sol.partition_function()));
        r.cold_ms = detail::ms_since(t0);
        r.all_equal = warm == cold;
        if (progress)
          progress(to_string(s) + " n=" + std::to_string(n) + " #" + std::to_string(i) + " speedup " +
                   detail::fixed(r.speedup(), 1) + (r.all_equal ? "" : " MISMATCH"));
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

inline void write_amortize_csv(std::ostream& os, const std::vector<AmortizeRecord>& rows) {
  os << "structure,n,seed,instance,queries,solve_ms,amortized_ms,cold_ms,speedup,all_equal\n";
  for (const auto& r : rows)
    os << to_string(r.structure) << ',' << r.n << ',' << r.seed << ',' << r.instance << ',' << r.queries << ','
       << detail::fixed(r.solve_ms) << ',' << detail::fixed(r.amortized_ms) << ',' << detail::fixed(r.cold_ms) << ','
       << detail::fixed(r.speedup(), 2) << ',' << (r.all_equal ? 1 : 0) << '\n';
}

}  // namespace mpwmi::bench
