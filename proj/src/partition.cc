#include <rforge/partition.hh>

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace rforge {

std::vector<VertexSet> SparsePartition::parts() const
{
    std::vector<VertexSet> result(num_parts);
    for (Vertex x = 0; x < part_of.size(); ++x)
        result[part_of[x]].push_back(x);
    return result;
}

SparsePartition sparse_partition(const Digraph &g, std::size_t r)
{
    const auto n = g.size();
    auto conflict = power_graph(g, 2 * r);

    constexpr auto none = static_cast<PartIndex>(-1);
    std::vector<PartIndex> colour(n, none);
    std::vector<bool> taken;
    for (Vertex x = 0; x < n; ++x) {
        taken.assign(conflict.var(x).size() + 1, false);
        for (Vertex y : conflict.var(x))
            if (colour[y] != none && colour[y] < taken.size())
                taken[colour[y]] = true;
        PartIndex c = 0;
        while (taken[c])
            ++c;
        colour[x] = c;
    }

    // compact: renumber colours in order of first use
    std::vector<PartIndex> remap;
    SparsePartition result;
    result.sparsity_r = r;
    result.part_of.resize(n);
    for (Vertex x = 0; x < n; ++x) {
        if (colour[x] >= remap.size())
            remap.resize(colour[x] + 1, none);
        if (remap[colour[x]] == none)
            remap[colour[x]] = static_cast<PartIndex>(result.num_parts++);
        result.part_of[x] = remap[colour[x]];
    }
    return result;
}

SparsePartition singleton_partition(std::size_t n)
{
    SparsePartition result;
    result.num_parts = n;
    result.part_of.resize(n);
    std::iota(result.part_of.begin(), result.part_of.end(), PartIndex{0});
    result.sparsity_r = n;
    return result;
}

SparsePartition trivial_partition(std::size_t n)
{
    SparsePartition result;
    result.num_parts = n == 0 ? 0 : 1;
    result.part_of.assign(n, 0);
    return result;
}

bool is_r_sparse(const Digraph &g, const SparsePartition &pi, std::size_t r)
{
    for (Vertex x = 0; x < g.size(); ++x)
        if (!is_pi_unique(pi, ball(g, x, r)))
            return false;
    return true;
}

bool is_pi_unique(const SparsePartition &pi, std::span<const Vertex> u)
{
    std::unordered_set<PartIndex> seen;
    for (Vertex x : u)
        if (!seen.insert(pi.part_of[x]).second)
            return false;
    return true;
}

} // namespace rforge
