// Shared fixtures and hand-rolled generators for the test binaries.
#pragma once

#include <rforge/graph.hh>
#include <rforge/mta.hh>
#include <rforge/partition.hh>
#include <rforge/rules.hh>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace rforge::testing {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

  private:
    std::mt19937_64 engine_;
};

inline Digraph path(std::size_t n)
{
    std::vector<Edge> edges;
    for (Vertex x = 0; x + 1 < n; ++x)
        edges.emplace_back(x, x + 1);
    return Digraph(n, edges);
}

inline Digraph random_digraph(Rng &rng, std::size_t n, double p, bool loops = true)
{
    std::vector<Edge> edges;
    for (Vertex x = 0; x < n; ++x)
        for (Vertex y = 0; y < n; ++y)
            if ((x != y || loops) && rng.chance(p))
                edges.emplace_back(x, y);
    return Digraph(n, edges);
}

/// Sparse random problem: each vertex reads up to max_arity nearby vertices (index
/// distance ≤ spread, so the dependency graph stays local) and forbids each tuple with
/// probability p_forbid, never all of them.
inline ColouringProblem random_problem(Rng &rng, std::size_t n, Colour b, std::size_t max_arity = 3,
                                       double p_forbid = 0.15, std::size_t spread = 3)
{
    std::vector<Edge> edges;
    for (Vertex x = 0; x < n; ++x) {
        const auto arity = rng.between(0, max_arity);
        for (std::size_t k = 0; k < arity; ++k) {
            const auto lo = x >= spread ? x - spread : 0;
            const auto hi = std::min<std::size_t>(n - 1, x + spread);
            edges.emplace_back(x, static_cast<Vertex>(rng.between(lo, hi)));
        }
    }
    Digraph g(n, edges);
    LocalRule rule;
    rule.forbidden.resize(n);
    for (Vertex x = 0; x < n; ++x) {
        const auto width = g.var(x).size();
        if (width == 0)
            continue;
        std::uint64_t space = 1;
        for (std::size_t k = 0; k < width; ++k)
            space *= b;
        for (std::uint64_t code = 0; code < space; ++code)
            if (rng.chance(p_forbid))
                rule.forbidden[x].push_back(code);
        if (rule.forbidden[x].size() == space)
            rule.forbidden[x].pop_back();
    }
    return ColouringProblem(std::move(g), b, std::move(rule));
}

/// One clause c = 1 reading v = 0, forbidding (0), b = 2.
inline ColouringProblem single_clause()
{
    std::vector<Edge> edges{{1, 0}};
    return ColouringProblem(Digraph(2, edges), 2, std::vector<std::vector<Assignment>>{{}, {{0}}});
}

inline std::uint32_t max_of(const std::vector<std::uint32_t> &v)
{
    return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
}

} // namespace rforge::testing
