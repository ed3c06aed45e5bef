#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rforge {

using Vertex = std::uint32_t;

/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

using Edge = std::pair<Vertex, Vertex>;

class GraphError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Finite digraph on vertices 0..n-1. Self-loops are allowed, parallel edges are not.
///
/// out-neighbours are the variables Var(x) of x read as a clause, in-neighbours are
/// the clauses Cl(x) in which x appears as a variable.
class Digraph {
  public:
    Digraph() = default;
    explicit Digraph(std::size_t n);
    /// Duplicate edges are merged; an out-of-range endpoint throws GraphError.
    Digraph(std::size_t n, std::span<const Edge> edges);

    std::size_t size() const { return out_.size(); }
    std::size_t num_edges() const;

    std::span<const Vertex> var(Vertex x) const { return out_[x]; }
    std::span<const Vertex> cl(Vertex x) const { return in_[x]; }

    bool has_edge(Vertex x, Vertex y) const;
    bool has_loop(Vertex x) const { return has_edge(x, x); }

    /// |Var(x) ∪ Cl(x)|; a self-loop contributes 1.
    std::size_t degree(Vertex x) const;
    std::size_t max_degree() const;
    std::size_t max_out_degree() const;

    /// Var(x) ∪ Cl(x) without x itself, sorted.
    VertexSet undirected_neighbours(Vertex x) const;

    bool is_symmetric() const;
    std::vector<Edge> edges() const;

    friend bool operator==(const Digraph &, const Digraph &) = default;

  private:
    std::vector<std::vector<Vertex>> out_;
    std::vector<std::vector<Vertex>> in_;
};

/// Total order on vertices used for every "minimal element" tie-break.
class VertexOrder {
  public:
    VertexOrder() = default;
    /// rank must be a permutation of 0..n-1.
    explicit VertexOrder(std::vector<std::size_t> rank);

    static VertexOrder identity(std::size_t n);
    /// Order in which `sequence[0]` comes first, then `sequence[1]`, ...; vertices not in
    /// the sequence follow in ascending index.
    static VertexOrder from_sequence(std::size_t n, std::span<const Vertex> sequence);

    std::size_t size() const { return rank_.size(); }
    std::size_t rank(Vertex x) const { return rank_.empty() ? x : rank_[x]; }
    bool less(Vertex a, Vertex b) const { return rank(a) < rank(b); }

  private:
    std::vector<std::size_t> rank_;
};

/// Dependency graph: (x,y) is an edge iff Var(x) ∩ Var(y) ≠ ∅. Symmetric; loop at x iff
/// Var(x) ≠ ∅.
Digraph build_rel(const Digraph &g);

/// Vertices at undirected distance ≤ r from x, sorted.
VertexSet ball(const Digraph &g, Vertex x, std::size_t r);

/// Entry r is |ball(x, r)| for r = 0..max_radius.
std::vector<std::size_t> ball_profile(const Digraph &g, Vertex x, std::size_t max_radius);

/// Undirected BFS distances from x; unreachable vertices get SIZE_MAX.
std::vector<std::size_t> distances_from(const Digraph &g, Vertex x);

/// Symmetric loopless graph with {x,y} an edge iff 0 < dist(x,y) ≤ r.
Digraph power_graph(const Digraph &g, std::size_t r);

/// Scan `candidates` by ascending rank and keep each vertex with no already-kept
/// neighbour. Self-loops never disqualify. Returns the kept set sorted by index.
VertexSet greedy_mis(const Digraph &g_sym, std::span<const Vertex> candidates,
                     const VertexOrder &order);

/// True iff no non-loop edge of g_sym joins two members of s.
bool is_independent(const Digraph &g_sym, std::span<const Vertex> s);

/// True iff s ⊆ candidates is independent and every candidate outside s has a
/// neighbour in s.
bool is_maximal_independent(const Digraph &g_sym, std::span<const Vertex> candidates,
                            std::span<const Vertex> s);

/// Membership test in subexp(R, eps, d): maxdeg ≤ d and every radius-3R ball has at
/// most (1+eps)^R vertices (compared in log space with 1e-9 slack).
bool check_subexp(const Digraph &g, std::size_t R, double eps, std::size_t d);

} // namespace rforge
