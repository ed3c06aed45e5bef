#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hh"

#include <json.hpp>

#include <fstream>
#include <numeric>

using namespace rforge;
using namespace rforge::testing;

namespace {

// A seed whose cells (0,0), (0,1) read (0,1) for b = 2.
std::uint64_t seed_with_prefix_01()
{
    for (std::uint64_t s = 0;; ++s)
        if (tape_symbol(s, 0, 0, 2) == 0 && tape_symbol(s, 0, 1, 2) == 1)
            return s;
}

ColouringProblem all_allowed(std::size_t n)
{
    return ColouringProblem(path(n), 3, LocalRule{std::vector<std::vector<std::uint64_t>>(n)});
}

// each clause forbids every tuple
ColouringProblem unsatisfiable()
{
    std::vector<Edge> e{{1, 0}};
    return ColouringProblem(Digraph(2, e), 2, std::vector<std::vector<Assignment>>{{}, {{0}, {1}}});
}

} // namespace

TEST_CASE("initial colouring")
{
    auto p = all_allowed(5);
    RandomTape tape(3, 3, 1);
    auto f = initial_colouring(p, trivial_partition(5), tape);
    CHECK(std::all_of(f.begin(), f.end(), [&](Colour c) { return c == f[0]; }));

    auto g = initial_colouring(p, singleton_partition(5), tape);
    for (Vertex x = 0; x < 5; ++x)
        CHECK(g[x] == tape_symbol(3, x, 0, 3));

    // four vertices on parts 0, 1, 7, 1 against the reference vectors (seed 1, b 3)
    std::ifstream in(RFORGE_TEST_DIR "/golden/tape_vectors.json");
    auto doc = nlohmann::json::parse(in);
    auto golden = [&](std::uint64_t part) {
        for (const auto &r : doc.at("records"))
            if (r.at("seed") == 1 && r.at("part") == part && r.at("t") == 0 && r.at("b") == 3)
                return r.at("symbol").get<Colour>();
        FAIL("missing record");
        return Colour{0};
    };
    SparsePartition pi{8, {0, 1, 7, 1}, 0};
    RandomTape one(1, 3, 8);
    auto h = initial_colouring(all_allowed(4), pi, one);
    CHECK(h == Colouring{golden(0), golden(1), golden(7), golden(1)});
}

TEST_CASE("step examples")
{
    auto pi = singleton_partition(2);
    auto p = single_clause();
    const auto seed = seed_with_prefix_01();
    RandomTape tape(seed, 2, 2);
    auto state = initial_state(p, pi, tape);
    REQUIRE(state.colouring[0] == 0);
    auto greedy = greedy_independence(VertexOrder::identity(2));
    auto ib = step(p, pi, tape, state, greedy);
    CHECK(ib == VertexSet{1});
    CHECK(state.colouring[0] == tape_symbol(seed, 0, 1, 2));
    CHECK(state.h == std::vector<std::uint32_t>{2, 1});

    // B = ∅ is a fixed point
    auto before = state;
    CHECK(step(p, pi, tape, state, greedy).empty());
    CHECK(state.colouring == before.colouring);
    CHECK(state.h == before.h);
    CHECK(state.round == before.round + 1);

    // two clauses sharing variable 0, both violated: only the lower-ranked one goes in
    std::vector<Edge> e{{1, 0}, {2, 0}};
    ColouringProblem two(Digraph(3, e), 2, std::vector<std::vector<Assignment>>{{}, {{0}}, {{0}}});
    MtaState s{{0, 0, 0}, {1, 1, 1}, 0};
    RandomTape t2(0, 2, 3);
    CHECK(step(two, singleton_partition(3), t2, s, greedy_independence(VertexOrder::identity(3))) ==
          VertexSet{1});
    MtaState s2{{0, 0, 0}, {1, 1, 1}, 0};
    std::vector<Vertex> first{2};
    CHECK(step(two, singleton_partition(3), t2, s2,
               greedy_independence(VertexOrder::from_sequence(3, first))) == VertexSet{2});
}

TEST_CASE("run examples")
{
    auto p = all_allowed(6);
    RandomTape tape(1, 3, 6);
    auto trace = run(p, singleton_partition(6), tape);
    CHECK(trace.succeeded());
    CHECK(trace.steps == 1);
    CHECK(h_infinity(trace) == std::vector<std::uint32_t>(6, 1));

    auto one = single_clause();
    RandomTape t1(seed_with_prefix_01(), 2, 2);
    auto tr = run(one, singleton_partition(2), t1);
    CHECK(tr.succeeded());
    CHECK(tr.steps == 2);
    CHECK(h_infinity(tr) == std::vector<std::uint32_t>{2, 1});

    RandomTape t2(4, 2, 2);
    RunOptions small;
    small.max_steps = 50;
    auto bad = run(unsatisfiable(), singleton_partition(2), t2, small);
    CHECK(bad.status == RunStatus::BudgetExhausted);
    CHECK(bad.steps == 50);
    CHECK_THROWS_AS(h_infinity(bad), TraceError);
}

TEST_CASE("run matches repeated step on random problems")
{
    Rng rng(11);
    for (int trial = 0; trial < 150; ++trial) {
        const auto n = rng.between(2, 25);
        const Colour b = static_cast<Colour>(rng.between(2, 3));
        auto p = random_problem(rng, n, b);
        const bool shared = rng.chance(0.5);
        auto pi = shared ? sparse_partition(p.graph(), rng.between(1, 2)) : singleton_partition(n);
        std::vector<Vertex> seq(n);
        std::iota(seq.begin(), seq.end(), Vertex{0});
        std::shuffle(seq.begin(), seq.end(), std::mt19937_64(trial));
        RunOptions opt;
        opt.order = VertexOrder::from_sequence(n, seq);
        opt.max_steps = 200;
        RandomTape tape(trial, b, pi.num_parts);
        auto trace = run(p, pi, tape, opt);

        RandomTape replay(trial, b, pi.num_parts);
        auto state = initial_state(p, pi, replay);
        auto greedy = greedy_independence(opt.order);
        CHECK(state.colouring == trace.colouring(0));
        for (std::size_t j = 0; j + 1 < trace.steps; ++j) {
            auto bad = bad_set(p, state.colouring);
            auto ib = step(p, pi, replay, state, greedy);
            auto recorded = trace.ib(j);
            CHECK(ib == VertexSet(recorded.begin(), recorded.end()));
            CHECK(is_maximal_independent(p.rel(), bad, ib));
            CHECK(state.colouring == trace.colouring(j + 1));
            CHECK(state.h == trace.h_at(p, j + 2));
            // only Var(IB) changes
            const auto &prev = trace.colouring(j);
            for (Vertex x = 0; x < n; ++x)
                if (prev[x] != state.colouring[x]) {
                    bool inside = false;
                    for (Vertex c : ib)
                        inside = inside || p.graph().has_edge(c, x);
                    CHECK(inside);
                }
        }
        if (trace.succeeded()) {
            CHECK(bad_set(p, trace.final_colouring()).empty());
            CHECK(trace.final_h() == state.h);
            CHECK(max_of(trace.final_h()) <= 1 + trace.steps);
            // later rounds repeat the final colouring with empty IB
            CHECK(trace.colouring(trace.steps + 3) == trace.final_colouring());
            CHECK(trace.ib(trace.steps + 3).empty());
        }
    }
}

TEST_CASE("runs are deterministic and windowed history agrees")
{
    Rng rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        auto p = random_problem(rng, 30, 2);
        auto pi = sparse_partition(p.graph(), 1);
        RandomTape a(trial, 2, pi.num_parts), b(trial, 2, pi.num_parts), c(trial, 2, pi.num_parts);
        RunOptions full, window;
        full.keep_history = true;
        window.keep_history = false;
        auto t1 = run(p, pi, a, full);
        auto t2 = run(p, pi, b, full);
        auto t3 = run(p, pi, c, window);
        CHECK(t1.steps == t2.steps);
        CHECK(t1.final_h() == t2.final_h());
        CHECK(t1.final_colouring() == t3.final_colouring());
        CHECK(t1.final_h() == t3.final_h());
        for (std::size_t j = 0; j < t1.recorded_rounds(); ++j) {
            CHECK(std::ranges::equal(t1.ib(j), t3.ib(j)));
            CHECK(std::ranges::equal(t1.ib_violations(j), t3.ib_violations(j)));
        }
        if (t3.steps > 2)
            CHECK_THROWS_AS(t3.colouring(0), TraceError);
    }
}

TEST_CASE("used and unused symbols")
{
    Rng rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        const auto n = rng.between(2, 20);
        auto p = random_problem(rng, n, 2);
        auto pi = sparse_partition(p.graph(), 1);
        RandomTape tape(trial, 2, pi.num_parts);
        RunOptions opt;
        opt.max_steps = 12;
        auto trace = run(p, pi, tape, opt);

        auto k1 = used_unused(p, trace, pi, tape, 1);
        for (Vertex x = 0; x < n; ++x) {
            CHECK(k1.used[x].size() == 1);
            CHECK(k1.unused[x].empty());
        }

        // replay oracle: count how often x lies in Var(IB(MT^j)) for j < k-1
        const std::size_t k = std::min<std::size_t>(trace.steps, 8);
        std::vector<std::size_t> hits(n, 1);
        for (std::size_t j = 0; j + 1 < k; ++j)
            for (Vertex c : trace.ib(j))
                for (Vertex v : p.graph().var(c))
                    ++hits[v];
        auto uu = used_unused(p, trace, pi, tape, k);
        for (Vertex x = 0; x < n; ++x) {
            CHECK(uu.used[x].size() == hits[x]);
            CHECK(uu.used[x].size() + uu.unused[x].size() == std::max(k, hits[x]));
            for (std::size_t t = 0; t < uu.used[x].size(); ++t)
                CHECK(uu.used[x][t] == tape.peek(pi.part_of[x], static_cast<RoundIndex>(t)));
        }
    }
}

TEST_CASE("a vertex never resampled keeps one used symbol")
{
    auto p = all_allowed(3);
    RandomTape tape(2, 3, 3);
    auto pi = singleton_partition(3);
    auto trace = run(p, pi, tape);
    auto uu = used_unused(p, trace, pi, tape, 4);
    for (Vertex x = 0; x < 3; ++x) {
        CHECK(uu.used[x].size() == 1);
        CHECK(uu.unused[x].size() == 3);
    }
}

TEST_CASE("symbols consumed")
{
    auto p = all_allowed(7);
    auto pi = sparse_partition(p.graph(), 1);
    RandomTape tape(3, 3, pi.num_parts);
    auto trace = run(p, pi, tape);
    CHECK(symbols_consumed(trace, pi).symbols == pi.num_parts);

    Rng rng(14);
    for (int trial = 0; trial < 60; ++trial) {
        auto q = random_problem(rng, 25, 2);
        const bool classic = trial % 2 == 0;
        auto part = classic ? singleton_partition(25) : sparse_partition(q.graph(), 1);
        RandomTape t(trial, 2, part.num_parts);
        auto tr = run(q, part, t);
        auto count = symbols_consumed(tr, part);
        if (classic) {
            const auto &h = tr.final_h();
            CHECK(count.symbols == std::accumulate(h.begin(), h.end(), std::uint64_t{0}));
        }
        // the tape's own access record: 1 + highest round read per part
        if (tr.succeeded()) {
            const auto &hw = t.highwater();
            CHECK(count.symbols == std::accumulate(hw.begin(), hw.end(), std::uint64_t{0}));
        }
    }
}
