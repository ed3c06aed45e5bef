#pragma once

#include <rforge/graph.hh>
#include <rforge/landscape.hh>
#include <rforge/rules.hh>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rforge {

class BudgetError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct TreeBudget {
    std::size_t max_delta = 4;
    std::size_t max_vertices = 6;
};

/// Number of iso-classes of Δ-labelled trees with i vertices (i = 0 gives 1, the empty
/// tree). Every tree is generated explicitly as a label-indexed tuple of optional
/// subtrees, and distinct encodings are counted.
std::uint64_t count_delta_trees(std::size_t delta, std::size_t i, TreeBudget budget = {});

/// Coefficients of Q_i with Q_0 = 1 + X, Q_{j+1} = 1 + X·Q_j^Δ, truncated to `terms`
/// coefficients. Throws BudgetError on 64-bit overflow.
std::vector<std::uint64_t> q_poly(std::size_t delta, std::size_t i, std::size_t terms);

/// Q_i(x) by the same recursion in floating point.
double q_value(std::size_t delta, std::size_t i, double x);

/// (Δ-1)^{Δ-1} / Δ^Δ.
double q_rho(std::size_t delta);

struct ForestBudget {
    std::size_t max_vertices = 5;
    std::size_t max_nodes = 4;
};

/// Exact number of grounded independent G-forests with m nodes: level sets that are
/// independent in Rel(G), each node above level 0 choosing its parent among its Rel
/// neighbours one level down.
std::uint64_t enumerate_grounded_forests(const Digraph &g, std::size_t m, ForestBudget budget = {});

/// (m+1)^{n-1} (eΔ)^m with Δ = maxdeg(Rel(g)), floored at 1.
double grounded_forest_bound(const Digraph &g, std::size_t m);

/// Number of Viol decorations of f, by checking every tuple over Var(x) for every node.
std::uint64_t count_decorations(const ColouringProblem &p, const GForest &f);

} // namespace rforge
