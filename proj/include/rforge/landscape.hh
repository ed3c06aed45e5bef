#pragma once

#include <rforge/graph.hh>
#include <rforge/mta.hh>
#include <rforge/partition.hh>
#include <rforge/rules.hh>
#include <rforge/tape.hh>

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace rforge {

/// A vertex of V(G)×ℕ.
struct ForestNode {
    Vertex vertex = 0;
    std::uint32_t level = 0;

    friend auto operator<=>(const ForestNode &, const ForestNode &) = default;
};

/// Sub-digraph of Canvas(G) with in-degree ≤ 1: nodes plus an optional parent index
/// per node. Edges run from level i to level i+1.
struct GForest {
    std::vector<ForestNode> nodes;
    std::vector<std::optional<std::size_t>> parent;

    std::size_t size() const { return nodes.size(); }
    /// 1 + highest level, 0 when empty.
    std::size_t height() const;
    std::optional<std::size_t> find(Vertex x, std::uint32_t level) const;
    /// Index of the root of the tree containing node i.
    std::size_t root_of(std::size_t i) const;
    /// Every tree rooted at level 0.
    bool grounded() const;
};

/// (F, Viol): viol[i] is an assignment over Var(nodes[i].vertex).
struct Landscape {
    GForest forest;
    std::vector<Assignment> viol;
};

/// (F, Viol, Fin).
struct FinalisedLandscape {
    Landscape landscape;
    Colouring fin;

    const GForest &forest() const { return landscape.forest; }
};

class LandscapeError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Parent edges go one level up along an edge of Rel(G) and nodes are distinct.
bool is_g_forest(const ColouringProblem &p, const GForest &f);
/// Every level is independent in Rel(G).
bool is_independent_forest(const ColouringProblem &p, const GForest &f);
/// Independent G-forest whose decorations lie in R^c.
bool is_landscape(const ColouringProblem &p, const Landscape &l);

/// Sorts nodes by (level, vertex) and remaps parents; used to compare landscapes.
FinalisedLandscape canonical(FinalisedLandscape l);

/// L^k: nodes IB(MT^i)×{i} for i < k, each (x,i+1) hanging from the order-minimal
/// y ∈ N_Rel(x) ∩ IB(MT^i), Viol(x,i) = res_x(MT^i), Fin = MT^k.
FinalisedLandscape build_landscape(const ColouringProblem &p, const RunTrace &trace, std::size_t k,
                                   const VertexOrder &order);

/// Used_L(x): the Viol entries at x of all nodes whose clause contains x, by level, then
/// Fin(x).
std::vector<SymbolSeq> used_of(const ColouringProblem &p, const FinalisedLandscape &l);

/// |V(G)| + Σ_{(x,i)} |Var(x)|.
std::size_t varcount(const ColouringProblem &p, const GForest &f);

struct GroundingStats {
    std::size_t pushes = 0;
    std::size_t reattachments = 0; ///< parent replaced inside an airborne tree
    std::size_t joins = 0;         ///< airborne root attached below another tree
    std::size_t steps() const { return pushes + reattachments + joins; }
};

/// Rewrites l into an equivalent grounded landscape (same node count, same Used).
/// Throws LandscapeError if more than step_cap elementary steps are needed.
FinalisedLandscape ground(const ColouringProblem &p, const FinalisedLandscape &l,
                          std::size_t step_cap = 1000000, GroundingStats *stats = nullptr);

/// Res_U of a Moser-Tardos tuple: a problem on the part set.
struct RestrictedProblem {
    ColouringProblem problem;
    SparsePartition partition;            ///< singletons
    std::vector<std::optional<Vertex>> preimage; ///< T_U, per part
};

/// Vertex set π; edges are the image of G|U under S_π; clauses with Var(x) ⊆ U keep their
/// relabelled forbidden tuples, all other parts are unconstrained. Throws
/// LandscapeError unless U is π-unique.
RestrictedProblem restrict_problem(const ColouringProblem &p, const SparsePartition &pi,
                                   std::span<const Vertex> u);

/// Res_U(L) over restrict_problem(p, pi, u).problem. Nodes outside U are dropped; Viol of
/// clauses not contained in U becomes all zeros; Fin is 0 outside S_π(U).
FinalisedLandscape restrict_landscape(const ColouringProblem &p, const SparsePartition &pi,
                                      const FinalisedLandscape &l, std::span<const Vertex> u);

/// Smallest r ∈ {3,…,3R} with Σ_{N(y,r)} h ≤ (1+eps) Σ_{N(y,r-3)} h. Throws
/// LandscapeError when no radius qualifies.
std::size_t stable_radius(const Digraph &g, std::span<const std::uint32_t> h, Vertex y,
                          std::size_t R, double eps);

} // namespace rforge
