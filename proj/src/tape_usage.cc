#include <rforge/mta.hh>

#include <algorithm>
#include <cmath>

namespace rforge {

UsedUnused used_unused(const ColouringProblem &p, const RunTrace &trace, const SparsePartition &pi,
                       const RandomTape &tape, std::size_t k)
{
    if (!trace.succeeded() && k > trace.steps)
        throw TraceError("Used^" + std::to_string(k) + " needs more rounds than the trace ran");
    auto h = trace.h_at(p, k);
    UsedUnused result;
    result.used.resize(p.size());
    result.unused.resize(p.size());
    for (Vertex x = 0; x < p.size(); ++x) {
        const auto part = pi.part_of[x];
        for (RoundIndex t = 0; t < h[x]; ++t)
            result.used[x].push_back(tape.peek(part, t));
        for (RoundIndex t = h[x]; t < k; ++t)
            result.unused[x].push_back(tape.peek(part, t));
    }
    return result;
}

double SymbolCount::bits(Colour b) const { return static_cast<double>(symbols) * std::log2(b); }

SymbolCount symbols_consumed(const RunTrace &trace, const SparsePartition &pi)
{
    std::vector<std::uint32_t> per_part(pi.num_parts, 0);
    const auto &h = trace.final_h();
    for (Vertex x = 0; x < h.size(); ++x)
        per_part[pi.part_of[x]] = std::max(per_part[pi.part_of[x]], h[x]);
    SymbolCount count;
    for (auto v : per_part)
        count.symbols += v;
    count.exact = trace.succeeded();
    return count;
}

} // namespace rforge
