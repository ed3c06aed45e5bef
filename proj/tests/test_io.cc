#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hh"

#include <rforge/io.hh>

#include <filesystem>
#include <sstream>

using namespace rforge;
using namespace rforge::testing;

namespace {

bool same_problem(const ColouringProblem &a, const ColouringProblem &b)
{
    if (a.size() != b.size() || a.colours() != b.colours() || !(a.graph() == b.graph()))
        return false;
    for (Vertex x = 0; x < a.size(); ++x)
        if (!std::ranges::equal(a.forbidden(x), b.forbidden(x)))
            return false;
    return true;
}

std::string schema_where(const std::string &text)
{
    try {
        parse_problem(Json::parse(text));
    }
    catch (const SchemaError &e) {
        return e.where;
    }
    return "";
}

} // namespace

TEST_CASE("problem files round-trip")
{
    auto t = gen_torus_nae(4, 4, 2);
    auto back = parse_problem(problem_to_json(t.problem, t.metadata));
    CHECK(same_problem(t.problem, back.problem));
    CHECK(back.metadata == t.metadata);
    CHECK(back.warnings.empty());

    const auto path = std::filesystem::temp_directory_path() / "rforge_roundtrip.json";
    save_problem(t.problem, path, t.metadata);
    auto loaded = load_problem(path);
    CHECK(same_problem(t.problem, loaded.problem));
    std::filesystem::remove(path);

    Rng rng(51);
    for (int trial = 0; trial < 50; ++trial) {
        auto p = random_problem(rng, rng.between(1, 15), static_cast<Colour>(rng.between(2, 4)));
        CHECK(same_problem(p, parse_problem(problem_to_json(p)).problem));
    }
}

TEST_CASE("schema errors name the offending field")
{
    const std::string base = R"("schema_version": 1, "b": 2, "num_vertices": 2, "edges": [[1, 0]])";
    CHECK(schema_where("{" + base + R"(, "forbidden": {"1": [[0, 1]]}})") == "/forbidden/1/0");
    CHECK(schema_where("{" + base + R"(, "forbidden": {"1": [[2]]}})") == "/forbidden/1/0/0");
    CHECK(schema_where("{" + base + R"(, "forbidden": {"7": [[0]]}})") == "/forbidden/7");
    CHECK(schema_where(R"({"schema_version": 2, "b": 2, "num_vertices": 1, "edges": []})") ==
          "/schema_version");
    CHECK(schema_where(R"({"schema_version": 1, "num_vertices": 1, "edges": []})") == "/b");
    CHECK(schema_where(R"({"schema_version": 1, "b": 2, "num_vertices": 1, "edges": [[0, 3]]})") ==
          "/edges/0");
    std::istringstream broken("{\"b\": ");
    CHECK_THROWS_AS(read_problem(broken), SchemaError);
}

TEST_CASE("duplicates are merged with a warning")
{
    auto doc = Json::parse(R"({"schema_version": 1, "b": 2, "num_vertices": 2,
        "edges": [[1, 0], [1, 0]], "forbidden": {"1": [[0], [0]]}})");
    auto l = parse_problem(doc);
    CHECK(l.problem.forbidden(1).size() == 1);
    CHECK(l.problem.graph().num_edges() == 1);
    CHECK(l.warnings.size() == 2);
}

TEST_CASE("DIMACS import")
{
    std::istringstream in("c comment\np cnf 3 3\n1 -2 0\n2 3\n0\n1 -1 0\n");
    auto l = import_dimacs(in);
    const auto &p = l.problem;
    REQUIRE(p.size() == 6);
    CHECK(p.colours() == 2);
    CHECK(std::ranges::equal(p.graph().var(3), std::vector<Vertex>{0, 1}));
    CHECK(p.forbidden_tuples(3) == std::vector<Assignment>{{0, 1}});
    CHECK(p.forbidden_tuples(4) == std::vector<Assignment>{{0, 0}});
    CHECK(p.forbidden(5).empty());
    CHECK(satisfies(p, Colouring{1, 1, 0, 0, 0, 0}));
    CHECK_FALSE(satisfies(p, Colouring{0, 1, 0, 0, 0, 0}));

    std::istringstream bad("1 2 0\n");
    CHECK_THROWS_AS(import_dimacs(bad), SchemaError);
}

TEST_CASE("torus not-all-equal instances")
{
    auto t2 = gen_torus_nae(6, 4, 2);
    const auto &p = t2.problem;
    CHECK(p.size() == 24);
    CHECK(lll_margin(p) == doctest::Approx(0.0625));
    CHECK(p.graph().max_degree() == 5);
    // height 4 folds rows y-2 and y+2 together
    CHECK(p.rel_max_degree() == 12);
    CHECK(gen_torus_nae(6, 6, 2).problem.rel_max_degree() == 13);
    CHECK(bad_set(p, Colouring(24, 1)).size() == 24);
    Colouring checker(24);
    for (std::size_t y = 0; y < 4; ++y)
        for (std::size_t x = 0; x < 6; ++x)
            checker[y * 6 + x] = static_cast<Colour>((x + y) % 2);
    CHECK(satisfies(p, checker));
    CHECK(lll_margin(gen_torus_nae(5, 5, 3).problem) == doctest::Approx(1.0 / 81));
    CHECK(t2.metadata.at("summary").at("margin") == 0.0625);
    CHECK(t2.metadata.at("summary").contains("subexp"));
    CHECK_THROWS_AS(gen_torus_nae(2, 5, 2), std::invalid_argument);
}

TEST_CASE("grid k-SAT instances")
{
    auto a = gen_grid_ksat(8, 6, 5, 2, 1, 99);
    auto b = gen_grid_ksat(8, 6, 5, 2, 1, 99);
    auto c = gen_grid_ksat(8, 6, 5, 2, 1, 100);
    CHECK(same_problem(a.problem, b.problem));
    CHECK(a.metadata == b.metadata);
    CHECK_FALSE(same_problem(a.problem, c.problem));
    const auto &p = a.problem;
    CHECK(p.size() == 96);
    CHECK(lll_margin(p) == doctest::Approx(1.0 / 32));
    Rng rng(52);
    for (int trial = 0; trial < 50; ++trial) {
        Colouring f(96);
        for (auto &x : f)
            x = static_cast<Colour>(rng.below(2));
        for (Vertex x : bad_set(p, f))
            CHECK(x >= 48);
    }
    for (Vertex cl = 48; cl < 96; ++cl) {
        const auto vars = p.graph().var(cl);
        CHECK(vars.size() == 5);
        CHECK(p.forbidden(cl).size() == 1);
        const auto home = cl - 48;
        for (Vertex v : vars) {
            const auto dx = std::min((v % 8 + 8 - home % 8) % 8, (home % 8 + 8 - v % 8) % 8);
            const auto dy = std::min((v / 8 + 6 - home / 8) % 6, (home / 8 + 6 - v / 8) % 6);
            CHECK(std::max(dx, dy) <= 2);
        }
    }
    CHECK(lll_margin(gen_grid_ksat(5, 5, 3, 1, 2, 1, 3).problem) == doctest::Approx(1.0 / 27));
    CHECK_THROWS_AS(gen_grid_ksat(5, 5, 10, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("colourings, traces and CSV rows")
{
    Colouring f{0, 2, 1};
    CHECK(colouring_from_json(colouring_to_json(f), 3) == f);
    CHECK_THROWS_AS(colouring_from_json(colouring_to_json(f), 4), SchemaError);

    auto p = single_clause();
    RandomTape tape(0, 2, 2);
    auto pi = singleton_partition(2);
    auto trace = run(p, pi, tape);
    std::ostringstream csv;
    write_round_csv(csv, trace);
    CHECK(csv.str().rfind("round,bad,independent,resampled,reevaluations\n", 0) == 0);
    auto doc = trace_to_json(trace, pi);
    CHECK(doc.at("status") == "succeeded");
    CHECK(doc.at("steps") == trace.steps);

    std::ostringstream row;
    write_experiment_row(row, ExperimentRecord{"torus", 100, 7, 12, 3, 2, 30, 47.549, 1.5});
    CHECK(row.str() == "torus,100,7,12,3,2,30,47.549,1.500\n");
    CHECK(std::string(results_csv_header) == "instance,n,seed,parts,rounds,max_h,symbols,bits,wall_ms");
}
