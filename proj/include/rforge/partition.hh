#pragma once

#include <rforge/graph.hh>

#include <cstdint>
#include <span>
#include <vector>

namespace rforge {

using PartIndex = std::uint32_t;

/// Finite partition of V(G) given by the projection S_π (part_of).
struct SparsePartition {
    std::size_t num_parts = 0;
    std::vector<PartIndex> part_of;
    std::size_t sparsity_r = 0;

    /// Members of each part, ascending.
    std::vector<VertexSet> parts() const;

    friend bool operator==(const SparsePartition &, const SparsePartition &) = default;
};

/// Greedy proper colouring of power_graph(g, 2r) in ascending vertex order, with
/// unused colours compacted away. The result is r-sparse.
SparsePartition sparse_partition(const Digraph &g, std::size_t r);

/// Every vertex in its own part (classic Moser-Tardos mode).
SparsePartition singleton_partition(std::size_t n);

/// All vertices in one part.
SparsePartition trivial_partition(std::size_t n);

/// For every x the members of ball(g, x, r) lie in pairwise distinct parts.
bool is_r_sparse(const Digraph &g, const SparsePartition &pi, std::size_t r);

/// S_π restricted to u is injective.
bool is_pi_unique(const SparsePartition &pi, std::span<const Vertex> u);

} // namespace rforge
