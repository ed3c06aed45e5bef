// rforge: command-line front end.
//
// Exit codes: 0 success, 1 error or failed check, 2 budget exhausted,
// 3 derandomisation infeasible, 4 all finite tapes exhausted.

#include <rforge/counting.hh>
#include <rforge/derand.hh>
#include <rforge/experiment.hh>
#include <rforge/io.hh>
#include <rforge/mta.hh>
#include <rforge/partition.hh>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <numeric>

using namespace rforge;

namespace {

enum Exit : int { ok = 0, error = 1, budget_exhausted = 2, infeasible = 3, exhausted = 4 };

struct Common {
    bool quiet = false;
};

void emit(const Json &doc) { std::cout << doc.dump(2) << '\n'; }

void note(const Common &c, const std::string &line)
{
    if (!c.quiet)
        std::cerr << line << '\n';
}

void write_json(const std::string &path, const Json &doc)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << doc.dump(1) << '\n';
}

LoadedProblem load(const Common &c, const std::string &path)
{
    auto loaded = load_problem(path);
    for (const auto &w : loaded.warnings)
        note(c, "warning: " + w);
    return loaded;
}

SparsePartition choose_partition(const ColouringProblem &p, std::size_t R, bool classic)
{
    return classic ? singleton_partition(p.size()) : sparse_partition(p.graph(), 3 * R);
}

std::string fixed(double v, int digits = 3)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
    std::string problem;
    std::uint64_t seed = 0;
    std::size_t R = 1;
    bool classic = false;
    std::size_t max_steps = 100000;
    std::string out, trace, rounds_csv;
    bool verify = false;
};

int cmd_solve(const Common &c, const SolveArgs &a)
{
    auto loaded = load(c, a.problem);
    const auto &p = loaded.problem;
    const auto pi = choose_partition(p, a.R, a.classic);
    RandomTape tape(a.seed, p.colours(), pi.num_parts);
    RunOptions options;
    options.max_steps = a.max_steps;
    options.keep_history = false;
    const auto trace = run(p, pi, tape, options);

    const auto &h = trace.final_h();
    const auto max_h = h.empty() ? 0u : *std::max_element(h.begin(), h.end());
    const auto symbols = symbols_consumed(trace, pi);
    Json summary{{"status", trace.succeeded() ? "succeeded" : "budget_exhausted"},
                 {"rounds", trace.steps},
                 {"max_h", max_h},
                 {"symbols", symbols.symbols},
                 {"bits", symbols.bits(p.colours())},
                 {"parts", pi.num_parts},
                 {"seed", a.seed},
                 {"reevaluations", trace.reevaluations()}};

    if (a.verify && trace.succeeded()) {
        const bool good = satisfies(p, trace.final_colouring());
        summary["verified"] = good;
        if (!good) {
            emit(summary);
            std::cerr << "error: final colouring violates a clause\n";
            return error;
        }
    }
    if (!a.trace.empty())
        write_json(a.trace, trace_to_json(trace, pi));
    if (!a.rounds_csv.empty()) {
        std::ofstream out(a.rounds_csv);
        write_round_csv(out, trace);
    }
    if (!a.out.empty() && trace.succeeded())
        write_json(a.out, colouring_to_json(trace.final_colouring()));

    emit(summary);
    note(c, "status    " + std::string(trace.succeeded() ? "succeeded" : "budget exhausted"));
    note(c, "rounds    " + std::to_string(trace.steps));
    note(c, "parts     " + std::to_string(pi.num_parts));
    note(c, "max h     " + std::to_string(max_h));
    note(c, "symbols   " + std::to_string(symbols.symbols) + " (" + fixed(symbols.bits(p.colours()), 1) +
                " bits)");
    return trace.succeeded() ? ok : budget_exhausted;
}

// ---- solve-det -------------------------------------------------------------

struct DetArgs {
    std::string problem;
    std::size_t m = 3;
    std::uint64_t tape_cap = std::uint64_t{1} << 24;
    std::size_t R = 1;
    bool classic = false;
    double delta = 0.1;
    std::size_t d = 0;
    std::string out, tapes_csv;
};

int cmd_solve_det(const Common &c, const DetArgs &a)
{
    auto loaded = load(c, a.problem);
    const auto &p = loaded.problem;
    const auto pi = choose_partition(p, a.R, a.classic);
    const std::size_t d = a.d ? a.d : std::max<std::size_t>(p.graph().max_degree(), 1);
    const double Delta = static_cast<double>(std::max<std::size_t>(p.rel_max_degree(), 1));

    Json report;
    const auto budget = derand_budget(p.colours(), a.delta, d, pi.num_parts, Delta, a.tape_cap);
    const auto at_d2 = derand_budget(p.colours(), a.delta, d, pi.num_parts,
                                     static_cast<double>(d * d), a.tape_cap);
    report["theory"] = {{"log_K", budget.log_K},
                        {"m", budget.m},
                        {"feasible", !budget.infeasible},
                        {"log_K_Delta_d2", at_d2.log_K},
                        {"m_Delta_d2", at_d2.m}};
    report["parts"] = pi.num_parts;
    report["m"] = a.m;
    note(c, "theoretical m " + std::to_string(budget.m) + " (log K " + fixed(budget.log_K, 2) + ", " +
                (budget.infeasible ? "infeasible" : "feasible") + ")");

    int code = ok;
    std::vector<TapeAttempt> attempts;
    try {
        auto result = derand_solve(p, pi, a.m, a.tape_cap);
        attempts = result.attempts;
        report["status"] = "succeeded";
        report["tape_index"] = result.tape_index;
        if (!a.out.empty())
            write_json(a.out, colouring_to_json(result.colouring));
        note(c, "solved with tape " + std::to_string(result.tape_index));
    }
    catch (const DerandError &e) {
        const bool inf = e.kind == DerandError::Kind::Infeasible;
        report["status"] = inf ? "infeasible" : "exhausted";
        report["message"] = e.what();
        attempts = e.attempts;
        code = inf ? infeasible : exhausted;
        note(c, std::string("error: ") + e.what());
    }
    report["tapes_tried"] = attempts.size();
    if (!a.tapes_csv.empty()) {
        std::ofstream out(a.tapes_csv);
        out << "tape,passes,reevaluations,success\n";
        for (const auto &t : attempts)
            out << t.index << ',' << t.passes << ',' << t.reevaluations << ',' << (t.success ? 1 : 0) << '\n';
    }
    emit(report);
    return code;
}

// ---- stats -----------------------------------------------------------------

struct StatsArgs {
    std::vector<std::size_t> sizes{10, 20, 50};
    std::size_t repeat = 200;
    Colour b = 2;
    std::size_t R = 1;
    bool classic = false;
    std::uint64_t seed_base = 0;
    std::size_t max_steps = 100000;
    std::string problem;
    std::string csv = "results.csv";
};

int cmd_stats(const Common &c, const StatsArgs &a)
{
    struct Instance {
        std::string id;
        ColouringProblem problem;
    };
    std::vector<Instance> instances;
    if (!a.problem.empty())
        instances.push_back({std::filesystem::path(a.problem).stem().string(), load(c, a.problem).problem});
    else
        for (auto s : a.sizes)
            instances.push_back({"torus_nae_" + std::to_string(s) + "x" + std::to_string(s) + "_b" +
                                     std::to_string(a.b),
                                 gen_torus_nae(s, s, a.b).problem});

    const bool fresh = !std::filesystem::exists(a.csv) || std::filesystem::file_size(a.csv) == 0;
    std::ofstream csv(a.csv, std::ios::app);
    if (!csv)
        throw std::runtime_error("cannot write " + a.csv);
    if (fresh)
        csv << results_csv_header << '\n';

    std::vector<std::uint64_t> seeds(a.repeat);
    std::iota(seeds.begin(), seeds.end(), a.seed_base);

    Json report = Json::array();
    for (const auto &inst : instances) {
        const auto pi = choose_partition(inst.problem, a.R, a.classic);
        const auto trials = run_trials(inst.problem, pi, seeds, a.max_steps);
        std::vector<std::uint32_t> max_h;
        double symbols = 0.0, mh = 0.0;
        std::size_t succeeded = 0;
        for (const auto &t : trials) {
            ExperimentRecord rec{inst.id, inst.problem.size(), t.seed, pi.num_parts, t.rounds, t.max_h,
                                 t.symbols, static_cast<double>(t.symbols) * std::log2(inst.problem.colours()),
                                 t.wall_ms};
            write_experiment_row(csv, rec);
            if (!t.succeeded)
                continue;
            ++succeeded;
            max_h.push_back(t.max_h);
            symbols += static_cast<double>(t.symbols);
            mh += t.max_h;
        }
        const auto tail = tail_table(max_h);
        const auto ratio = decay_ratio(tail);
        const double k = succeeded ? static_cast<double>(succeeded) : 1.0;
        report.push_back({{"instance", inst.id},
                          {"n", inst.problem.size()},
                          {"parts", pi.num_parts},
                          {"trials", trials.size()},
                          {"succeeded", succeeded},
                          {"mean_symbols", symbols / k},
                          {"mean_max_h", mh / k},
                          {"tail", tail},
                          {"decay_ratio", ratio ? Json(*ratio) : Json(nullptr)}});
        note(c, inst.id + "  n " + std::to_string(inst.problem.size()) + "  parts " +
                    std::to_string(pi.num_parts) + "  mean symbols " + fixed(symbols / k, 2) +
                    "  mean max h " + fixed(mh / k, 3));
        for (std::size_t m = 0; m < tail.size(); ++m)
            note(c, "    Pr(max h >= " + std::to_string(m) + ") = " + fixed(tail[m], 4));
    }
    emit(Json{{"experiments", report}});
    return ok;
}

// ---- oracle ----------------------------------------------------------------

struct OracleArgs {
    std::size_t max_delta = 4;
    std::size_t max_vertices = 6;
    std::size_t forest_vertices = 3;
    std::size_t forest_nodes = 3;
};

int cmd_oracle(const Common &c, const OracleArgs &a)
{
    if (a.max_delta > 6 || a.max_vertices > 8 || a.forest_vertices > 4 || a.forest_nodes > 4)
        throw std::invalid_argument("oracle budgets are capped at delta 6, 8 tree vertices, "
                                    "4 forest vertices and 4 forest nodes");
    Json rows = Json::array();
    bool all = true;
    auto row = [&](const std::string &check, Json params, double value, double bound, bool pass) {
        all = all && pass;
        rows.push_back({{"check", check}, {"params", std::move(params)}, {"value", value}, {"bound", bound},
                        {"pass", pass}});
        note(c, std::string(pass ? "pass " : "FAIL ") + check + " " + rows.back()["params"].dump() + "  " +
                    fixed(value, 4) + " <= " + fixed(bound, 4));
    };
    TreeBudget tb{a.max_delta, a.max_vertices};

    for (std::size_t delta = 1; delta <= a.max_delta; ++delta) {
        std::vector<std::uint64_t> counts;
        for (std::size_t i = 0; i <= a.max_vertices; ++i) {
            counts.push_back(count_delta_trees(delta, i, tb));
            if (i == 0)
                continue;
            const double bound = std::pow(std::numbers::e * static_cast<double>(delta), static_cast<double>(i));
            row("delta_trees", {{"delta", delta}, {"i", i}}, static_cast<double>(counts.back()), bound,
                static_cast<double>(counts.back()) <= bound);
        }
        const auto q = q_poly(delta, a.max_vertices, a.max_vertices + 1);
        std::size_t agree = 0;
        for (std::size_t j = 0; j < counts.size(); ++j)
            agree += q[j] == counts[j] ? 1 : 0;
        row("q_prefix", {{"delta", delta}, {"terms", counts.size()}}, static_cast<double>(agree),
            static_cast<double>(counts.size()), agree == counts.size());
        if (delta >= 2) {
            const double limit = static_cast<double>(delta) / static_cast<double>(delta - 1);
            for (std::size_t i = 0; i <= a.max_vertices; ++i) {
                const double v = q_value(delta, i, q_rho(delta));
                row("q_at_rho", {{"delta", delta}, {"i", i}}, v, limit, v <= limit * (1 + 1e-12));
            }
        }
    }

    // every digraph on up to forest_vertices vertices (loops allowed)
    ForestBudget fb{5, 4};
    for (std::size_t n = 1; n <= a.forest_vertices; ++n) {
        std::size_t worst_graph = 0;
        double worst_ratio = 0.0;
        const std::size_t slots = n * n;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots); ++mask) {
            std::vector<Edge> edges;
            for (std::size_t s = 0; s < slots; ++s)
                if (mask >> s & 1)
                    edges.emplace_back(static_cast<Vertex>(s / n), static_cast<Vertex>(s % n));
            Digraph g(n, edges);
            for (std::size_t m = 0; m <= a.forest_nodes; ++m) {
                const double r = static_cast<double>(enumerate_grounded_forests(g, m, fb)) /
                                 grounded_forest_bound(g, m);
                if (r > worst_ratio) {
                    worst_ratio = r;
                    worst_graph = mask;
                }
            }
        }
        row("grounded_forests", {{"n", n}, {"max_m", a.forest_nodes}, {"worst_graph_mask", worst_graph}},
            worst_ratio, 1.0, worst_ratio <= 1.0);
    }
    emit(Json{{"rows", rows}, {"all_pass", all}});
    return all ? ok : error;
}

// ---- gen / verify ----------------------------------------------------------

struct GenArgs {
    std::size_t w = 10, h = 10, k = 5, radius = 1, per_cell = 1;
    Colour b = 2;
    std::uint64_t seed = 0;
    std::string dimacs;
    std::string out;
};

int emit_problem(const Common &c, const ColouringProblem &p, const Json &metadata, const std::string &out)
{
    const auto doc = problem_to_json(p, metadata);
    if (out.empty())
        std::cout << doc.dump(1) << '\n';
    else
        write_json(out, doc);
    note(c, "n " + std::to_string(p.size()) + "  Delta " + std::to_string(p.rel_max_degree()) + "  d " +
                std::to_string(p.graph().max_degree()) + "  margin " + fixed(lll_margin(p), 6));
    return ok;
}

int cmd_verify(const Common &c, const std::string &problem, const std::string &colouring)
{
    auto loaded = load(c, problem);
    std::ifstream in(colouring);
    if (!in)
        throw std::runtime_error("cannot open " + colouring);
    const auto f = colouring_from_json(Json::parse(in), loaded.problem.size());
    for (Colour x : f)
        if (x >= loaded.problem.colours())
            throw SchemaError("/colouring", "colour out of range");
    const auto bad = bad_set(loaded.problem, f);
    emit(Json{{"satisfied", bad.empty()}, {"violated", bad}});
    note(c, bad.empty() ? "colouring satisfies every clause"
                        : std::to_string(bad.size()) + " violated clause(s)");
    return bad.empty() ? ok : error;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Parallel Moser-Tardos with a shared random tape"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_flag("-q,--quiet", common.quiet, "No human-readable table on stderr");

    SolveArgs solve;
    auto *s = app.add_subcommand("solve", "Run the randomised algorithm");
    s->add_option("problem", solve.problem, "problem.json")->required()->check(CLI::ExistingFile);
    s->add_option("--seed", solve.seed, "Tape seed")->capture_default_str();
    s->add_option("--R", solve.R, "Partition is 3R-sparse")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_flag("--classic", solve.classic, "Singleton partition (no symbol sharing)");
    s->add_option("--max-steps", solve.max_steps, "Colourings to compute before giving up")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    s->add_option("-o,--out", solve.out, "Write the satisfying colouring here");
    s->add_option("--trace", solve.trace, "Write the run trace as JSON");
    s->add_option("--rounds-csv", solve.rounds_csv, "Write per-round statistics as CSV");
    s->add_flag("--verify", solve.verify, "Re-check the output colouring");

    DetArgs det;
    auto *sd = app.add_subcommand("solve-det", "Deterministic solver over all finite tapes");
    sd->add_option("problem", det.problem, "problem.json")->required()->check(CLI::ExistingFile);
    sd->add_option("--m", det.m, "Rounds per tape")->capture_default_str()->check(CLI::PositiveNumber);
    sd->add_option("--tape-cap", det.tape_cap, "Refuse more tapes than this")->capture_default_str();
    sd->add_option("--R", det.R, "Partition is 3R-sparse")->capture_default_str()->check(CLI::PositiveNumber);
    sd->add_flag("--classic", det.classic, "Singleton partition");
    sd->add_option("--delta", det.delta, "Slack exponent for the theoretical m")->capture_default_str();
    sd->add_option("--d", det.d, "Degree bound (default: maxdeg of the graph)");
    sd->add_option("-o,--out", det.out, "Write the colouring here");
    sd->add_option("--tapes-csv", det.tapes_csv, "Per-tape pass counts");

    StatsArgs stats;
    auto *st = app.add_subcommand("stats", "Seeded trials over a torus size ladder");
    st->add_option("--sizes", stats.sizes, "Torus side lengths")->delimiter(',')->capture_default_str();
    st->add_option("--repeat", stats.repeat, "Trials per size")->capture_default_str();
    st->add_option("--b", stats.b, "Colours")->capture_default_str()->check(CLI::Range(2u, 1u << 16));
    st->add_option("--R", stats.R, "Partition is 3R-sparse")->capture_default_str()->check(CLI::PositiveNumber);
    st->add_flag("--classic", stats.classic, "Singleton partition");
    st->add_option("--seed-base", stats.seed_base, "First seed")->capture_default_str();
    st->add_option("--max-steps", stats.max_steps, "Per-run budget")->capture_default_str();
    st->add_option("--problem", stats.problem, "Use this instance instead of the ladder")
        ->check(CLI::ExistingFile);
    st->add_option("--csv", stats.csv, "Append rows here")->capture_default_str();

    OracleArgs oracle;
    auto *o = app.add_subcommand("oracle", "Exhaustive checks of the counting bounds");
    o->add_option("--max-delta", oracle.max_delta)->capture_default_str();
    o->add_option("--max-vertices", oracle.max_vertices, "Tree size limit")->capture_default_str();
    o->add_option("--forest-vertices", oracle.forest_vertices)->capture_default_str();
    o->add_option("--forest-nodes", oracle.forest_nodes)->capture_default_str();

    GenArgs gen;
    auto *g = app.add_subcommand("gen", "Generate or import an instance");
    g->require_subcommand(1);
    auto *gt = g->add_subcommand("torus", "Not-all-equal on a torus");
    gt->add_option("--width", gen.w)->capture_default_str();
    gt->add_option("--height", gen.h)->capture_default_str();
    gt->add_option("--b", gen.b)->capture_default_str();
    gt->add_option("-o,--out", gen.out);
    auto *gk = g->add_subcommand("ksat", "Bipartite random k-SAT on a torus grid");
    gk->add_option("--width", gen.w)->capture_default_str();
    gk->add_option("--height", gen.h)->capture_default_str();
    gk->add_option("--k", gen.k)->capture_default_str();
    gk->add_option("--radius", gen.radius)->capture_default_str();
    gk->add_option("--per-cell", gen.per_cell)->capture_default_str();
    gk->add_option("--seed", gen.seed)->capture_default_str();
    gk->add_option("--b", gen.b)->capture_default_str();
    gk->add_option("-o,--out", gen.out);
    auto *gd = g->add_subcommand("dimacs", "Import a DIMACS CNF file");
    gd->add_option("file", gen.dimacs)->required()->check(CLI::ExistingFile);
    gd->add_option("-o,--out", gen.out);

    std::string verify_problem, verify_colouring;
    auto *v = app.add_subcommand("verify", "Check a colouring against a problem");
    v->add_option("problem", verify_problem)->required()->check(CLI::ExistingFile);
    v->add_option("colouring", verify_colouring)->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? ok : error;
    }

    try {
        if (*s)
            return cmd_solve(common, solve);
        if (*sd)
            return cmd_solve_det(common, det);
        if (*st)
            return cmd_stats(common, stats);
        if (*o)
            return cmd_oracle(common, oracle);
        if (*gt) {
            auto made = gen_torus_nae(gen.w, gen.h, gen.b);
            return emit_problem(common, made.problem, made.metadata, gen.out);
        }
        if (*gk) {
            auto made = gen_grid_ksat(gen.w, gen.h, gen.k, gen.radius, gen.per_cell, gen.seed, gen.b);
            return emit_problem(common, made.problem, made.metadata, gen.out);
        }
        if (*gd) {
            std::ifstream in(gen.dimacs);
            auto loaded = import_dimacs(in);
            for (const auto &w : loaded.warnings)
                note(common, "warning: " + w);
            return emit_problem(common, loaded.problem, loaded.metadata, gen.out);
        }
        if (*v)
            return cmd_verify(common, verify_problem, verify_colouring);
    }
    catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return error;
    }
    return error;
}
