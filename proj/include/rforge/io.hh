#pragma once

#include <rforge/landscape.hh>
#include <rforge/mta.hh>
#include <rforge/partition.hh>
#include <rforge/rules.hh>

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rforge {

using Json = nlohmann::ordered_json;

inline constexpr int problem_schema_version = 1;

/// Malformed problem file. `where` is a JSON pointer or "line:column".
class SchemaError : public std::invalid_argument {
  public:
    SchemaError(std::string where, const std::string &message);
    std::string where;
};

struct LoadedProblem {
    ColouringProblem problem;
    Json metadata = Json::object();
    std::vector<std::string> warnings;
};

/// problem.json, schema version 1:
///   {"schema_version": 1, "b": 2, "num_vertices": n, "edges": [[x, y], ...],
///    "forbidden": {"x": [[c_0, ..., c_k], ...], ...}, "metadata": {...}}
/// Tuples list colours of Var(x) in ascending vertex order. Duplicate edges and tuples
/// are merged with a warning.
LoadedProblem parse_problem(const Json &doc);
LoadedProblem load_problem(const std::filesystem::path &path);
LoadedProblem read_problem(std::istream &in);

Json problem_to_json(const ColouringProblem &p, const Json &metadata = Json::object());
void save_problem(const ColouringProblem &p, const std::filesystem::path &path,
                  const Json &metadata = Json::object());

/// DIMACS CNF: variable v becomes vertex v-1, clause j becomes vertex V+j with the single
/// falsifying assignment forbidden. Tautological clauses become unconstrained.
LoadedProblem import_dimacs(std::istream &in);

struct GeneratedProblem {
    ColouringProblem problem;
    Json metadata;
};

/// Torus w×h, vertex y·w+x; Var(x) = x and its four torus neighbours; the b constant
/// tuples are forbidden (not-all-equal).
GeneratedProblem gen_torus_nae(std::size_t w, std::size_t h, Colour b);

/// Bipartite random k-SAT over b colours. Variables are the w·h torus cells (ids
/// y·w+x, Var = ∅); each cell hosts clauses_per_cell clauses (ids after the variables)
/// reading k distinct variables within Chebyshev torus distance clause_radius. Each
/// clause forbids one uniformly random tuple. Deterministic in (parameters, seed).
GeneratedProblem gen_grid_ksat(std::size_t w, std::size_t h, std::size_t k, std::size_t clause_radius,
                               std::size_t clauses_per_cell, std::uint64_t seed, Colour b = 2);

/// Δ, d, margin and, for n ≤ 4096, the smallest ε per R ∈ {1, 2} with the graph in
/// subexp(R, ε, d).
Json problem_summary(const ColouringProblem &p);

Json colouring_to_json(const Colouring &f);
Colouring colouring_from_json(const Json &doc, std::size_t n);

/// Per-round statistics, IB sets and h^∞ of a run.
Json trace_to_json(const RunTrace &trace, const SparsePartition &pi);
/// round,bad,independent,resampled,reevaluations
void write_round_csv(std::ostream &out, const RunTrace &trace);

Json landscape_to_json(const FinalisedLandscape &l);

struct ExperimentRecord {
    std::string instance;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t parts = 0;
    std::size_t rounds = 0;
    std::uint32_t max_h = 0;
    std::uint64_t symbols = 0;
    double bits = 0.0;
    double wall_ms = 0.0;
};

inline constexpr const char *results_csv_header = "instance,n,seed,parts,rounds,max_h,symbols,bits,wall_ms";
void write_experiment_row(std::ostream &out, const ExperimentRecord &r);

} // namespace rforge
