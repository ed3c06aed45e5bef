#pragma once

#include <rforge/graph.hh>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace rforge {

using Colour = std::uint32_t;

/// Colour tuple over Var(x), positions follow Var(x) in ascending vertex order.
using Assignment = std::vector<Colour>;

/// A colour for every vertex.
using Colouring = std::vector<Colour>;

class ProblemError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Tuples are stored as b-ary numbers with the first variable most significant, so
/// numeric order on codes equals lexicographic order on tuples.
std::uint64_t encode_assignment(std::span<const Colour> tuple, Colour b);
Assignment decode_assignment(std::uint64_t code, std::size_t length, Colour b);

/// Forbidden tuples R^c(x) per vertex, as sorted duplicate-free code lists.
struct LocalRule {
    std::vector<std::vector<std::uint64_t>> forbidden;

    friend bool operator==(const LocalRule &, const LocalRule &) = default;
};

/// Digraph + colour count + local rule. Construction validates the rule against the
/// graph and throws ProblemError on inconsistency.
class ColouringProblem {
  public:
    ColouringProblem() = default;
    ColouringProblem(Digraph graph, Colour b, LocalRule rule);
    /// Convenience: forbidden tuples given explicitly; duplicates are merged.
    ColouringProblem(Digraph graph, Colour b,
                     const std::vector<std::vector<Assignment>> &forbidden_tuples);

    const Digraph &graph() const { return graph_; }
    const Digraph &rel() const { return rel_; }
    Colour colours() const { return b_; }
    const LocalRule &rule() const { return rule_; }
    std::size_t size() const { return graph_.size(); }

    std::span<const std::uint64_t> forbidden(Vertex x) const { return rule_.forbidden[x]; }
    std::vector<Assignment> forbidden_tuples(Vertex x) const;

    /// Restriction of f to Var(x), encoded.
    std::uint64_t restriction_code(const Colouring &f, Vertex x) const;
    Assignment restriction(const Colouring &f, Vertex x) const;

    /// maxdeg(Rel(G)) with a self-loop contributing 1.
    std::size_t rel_max_degree() const { return rel_max_degree_; }

    friend bool operator==(const ColouringProblem &a, const ColouringProblem &b)
    {
        return a.graph_ == b.graph_ && a.b_ == b.b_ && a.rule_ == b.rule_;
    }

  private:
    Digraph graph_;
    Digraph rel_;
    Colour b_ = 2;
    LocalRule rule_;
    std::size_t rel_max_degree_ = 0;
};

bool is_violated(const ColouringProblem &p, const Colouring &f, Vertex x);
VertexSet bad_set(const ColouringProblem &p, const Colouring &f);
bool satisfies(const ColouringProblem &p, const Colouring &f);

/// β = max_x |R^c(x)| / b^{|Var(x)|}.
double lll_margin(const ColouringProblem &p);

/// Threshold 1/((eΔ)^{1+delta} b^{eps d}) of the main growth condition.
double condition_threshold(const ColouringProblem &p, double delta, double eps, std::size_t d);

/// lll_margin(p) ≤ condition_threshold(...) up to a 1e-12 relative tolerance.
bool check_condition(const ColouringProblem &p, double delta, double eps, std::size_t d);

} // namespace rforge
