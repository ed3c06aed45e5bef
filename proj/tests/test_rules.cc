#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hh"

#include <cmath>

using namespace rforge;
using namespace rforge::testing;

namespace {

// Var(x) = {0..arity-1} for a fresh clause vertex `arity`; other vertices unconstrained.
ColouringProblem clause_over(std::size_t arity, Colour b, std::vector<Assignment> tuples)
{
    std::vector<Edge> e;
    for (Vertex v = 0; v < arity; ++v)
        e.emplace_back(static_cast<Vertex>(arity), v);
    std::vector<std::vector<Assignment>> fb(arity + 1);
    fb[arity] = std::move(tuples);
    return ColouringProblem(Digraph(arity + 1, e), b, fb);
}

} // namespace

TEST_CASE("assignment codes put the first variable most significant")
{
    CHECK(encode_assignment(Assignment{0, 1}, 2) == 1);
    CHECK(encode_assignment(Assignment{1, 0}, 2) == 2);
    CHECK(encode_assignment(Assignment{2, 0, 1}, 3) == 19);
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const Colour b = static_cast<Colour>(rng.between(2, 7));
        Assignment a(rng.between(0, 6));
        for (auto &c : a)
            c = static_cast<Colour>(rng.below(b));
        CHECK(decode_assignment(encode_assignment(a, b), a.size(), b) == a);
    }
}

TEST_CASE("rule validation")
{
    std::vector<Edge> e{{1, 0}};
    CHECK_THROWS_AS(ColouringProblem(Digraph(2, e), 1, std::vector<std::vector<Assignment>>{{}, {}}),
                    ProblemError);
    // a vertex with no variables cannot forbid anything
    CHECK_THROWS_AS(ColouringProblem(Digraph(2, e), 2, std::vector<std::vector<Assignment>>{{{}}, {}}),
                    ProblemError);
    CHECK_THROWS_AS(ColouringProblem(Digraph(2, e), 2, std::vector<std::vector<Assignment>>{{}, {{0, 1}}}),
                    ProblemError);
    CHECK_THROWS_AS(ColouringProblem(Digraph(2, e), 2, std::vector<std::vector<Assignment>>{{}, {{2}}}),
                    ProblemError);
    // duplicates merge
    ColouringProblem p(Digraph(2, e), 2, std::vector<std::vector<Assignment>>{{}, {{0}, {0}}});
    CHECK(p.forbidden(1).size() == 1);
}

TEST_CASE("is_violated examples")
{
    auto empty_var = ColouringProblem(Digraph(2), 2, LocalRule{{{}, {}}});
    CHECK_FALSE(is_violated(empty_var, Colouring{0, 0}, 0));

    auto one = single_clause();
    CHECK(is_violated(one, Colouring{0, 0}, 1));
    CHECK_FALSE(is_violated(one, Colouring{1, 0}, 1));

    auto two = clause_over(2, 2, {{0, 1}});
    CHECK(is_violated(two, Colouring{0, 1, 0}, 2));
    CHECK_FALSE(is_violated(two, Colouring{1, 0, 0}, 2));
}

TEST_CASE("bad_set and satisfies")
{
    Rng rng(2);
    auto none = ColouringProblem(path(4), 3, LocalRule{std::vector<std::vector<std::uint64_t>>(4)});
    CHECK(bad_set(none, Colouring{0, 1, 2, 0}).empty());
    CHECK(satisfies(none, Colouring{0, 1, 2, 0}));

    auto one = single_clause();
    CHECK(bad_set(one, Colouring{0, 0}) == VertexSet{1});
    CHECK_FALSE(satisfies(one, Colouring{0, 0}));

    for (int trial = 0; trial < 100; ++trial) {
        auto p = random_problem(rng, 5, 2, 3, 0.3);
        Colouring f(5);
        for (auto &c : f)
            c = static_cast<Colour>(rng.below(2));
        VertexSet direct;
        for (Vertex x = 0; x < 5; ++x) {
            Assignment local;
            for (Vertex v : p.graph().var(x))
                local.push_back(f[v]);
            auto tuples = p.forbidden_tuples(x);
            if (std::find(tuples.begin(), tuples.end(), local) != tuples.end())
                direct.push_back(x);
        }
        CHECK(bad_set(p, f) == direct);
        CHECK(satisfies(p, f) == direct.empty());
    }
}

TEST_CASE("lll_margin examples")
{
    CHECK(lll_margin(ColouringProblem(path(3), 2, LocalRule{std::vector<std::vector<std::uint64_t>>(3)})) ==
          0.0);
    CHECK(lll_margin(clause_over(2, 2, {{0, 1}})) == doctest::Approx(0.25));
    CHECK(lll_margin(clause_over(5, 2, {{0, 0, 0, 0, 0}, {1, 1, 1, 1, 1}})) == doctest::Approx(0.0625));
}

TEST_CASE("check_condition examples")
{
    auto none = ColouringProblem(path(3), 2, LocalRule{std::vector<std::vector<std::uint64_t>>(3)});
    CHECK(check_condition(none, 0.1, 0.05, 5));
    CHECK(check_condition(none, 5.0, 5.0, 50));

    // six not-all-equal clauses over the same five variables: Δ = 6, margin 1/16
    const std::size_t vars = 5;
    const std::size_t clauses = 6;
    std::vector<Edge> e;
    std::vector<std::vector<Assignment>> heavy(vars + clauses);
    for (std::size_t c = 0; c < clauses; ++c) {
        const auto id = static_cast<Vertex>(vars + c);
        for (Vertex v = 0; v < vars; ++v)
            e.emplace_back(id, v);
        heavy[id] = {{0, 0, 0, 0, 0}, {1, 1, 1, 1, 1}};
    }
    ColouringProblem p_heavy(Digraph(vars + clauses, e), 2, heavy);
    REQUIRE(p_heavy.rel_max_degree() == 6);
    REQUIRE(lll_margin(p_heavy) == doctest::Approx(0.0625));
    // threshold 1/((6e)^{1.1} 2^{0.25}) from the independent calculator
    CHECK(condition_threshold(p_heavy, 0.1, 0.05, 5) == doctest::Approx(0.038998885456830126).epsilon(1e-12));
    CHECK_FALSE(check_condition(p_heavy, 0.1, 0.05, 5));

    // same shape over ten variables with one forbidden tuple: margin 1/1024
    std::vector<Edge> e10;
    std::vector<std::vector<Assignment>> fb10(10 + clauses);
    for (std::size_t c = 0; c < clauses; ++c) {
        const auto id = static_cast<Vertex>(10 + c);
        for (Vertex v = 0; v < 10; ++v)
            e10.emplace_back(id, v);
        fb10[id] = {Assignment(10, 0)};
    }
    ColouringProblem p_light(Digraph(10 + clauses, e10), 2, fb10);
    REQUIRE(p_light.rel_max_degree() == 6);
    REQUIRE(lll_margin(p_light) == doctest::Approx(1.0 / 1024));
    CHECK(check_condition(p_light, 0.1, 0.05, 5));
}

TEST_CASE("rel_max_degree counts the self-loop once")
{
    auto one = single_clause();
    CHECK(one.rel_max_degree() == 1);
}
