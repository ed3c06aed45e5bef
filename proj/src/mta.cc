#include <rforge/mta.hh>

#include <algorithm>
#include <string>

namespace rforge {

IndependenceFn greedy_independence(VertexOrder order)
{
    return [order = std::move(order)](const ColouringProblem &p, const VertexSet &bad, std::size_t) {
        return greedy_mis(p.rel(), bad, order);
    };
}

Colouring initial_colouring(const ColouringProblem &p, const SparsePartition &pi, SymbolSource &tape)
{
    Colouring f(p.size());
    for (Vertex x = 0; x < p.size(); ++x)
        f[x] = tape.symbol(pi.part_of[x], 0);
    return f;
}

MtaState initial_state(const ColouringProblem &p, const SparsePartition &pi, SymbolSource &tape)
{
    return MtaState{initial_colouring(p, pi, tape), std::vector<std::uint32_t>(p.size(), 1), 0};
}

namespace {

// Var(IB) as a sorted list; IB is independent so the Var sets are disjoint.
VertexSet variables_of(const ColouringProblem &p, std::span<const Vertex> clauses)
{
    VertexSet vars;
    for (Vertex c : clauses)
        for (Vertex v : p.graph().var(c))
            vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

} // namespace

VertexSet step(const ColouringProblem &p, const SparsePartition &pi, SymbolSource &tape,
               MtaState &state, const IndependenceFn &independence)
{
    auto bad = bad_set(p, state.colouring);
    auto ib = independence(p, bad, state.round);
    for (Vertex v : variables_of(p, ib)) {
        state.colouring[v] = tape.symbol(pi.part_of[v], state.h[v]);
        ++state.h[v];
    }
    ++state.round;
    return ib;
}

const Colouring &RunTrace::colouring(std::size_t j) const
{
    const auto last = last_index();
    if (j > last) {
        if (!succeeded())
            throw TraceError("colouring MT^" + std::to_string(j) + " was never computed");
        j = last;
    }
    if (j < first_stored_)
        throw TraceError("colouring MT^" + std::to_string(j) + " is outside the stored window");
    return colourings_[j - first_stored_];
}

std::span<const Vertex> RunTrace::ib(std::size_t j) const
{
    if (j < ib_sets_.size())
        return ib_sets_[j];
    if (!succeeded())
        throw TraceError("IB(MT^" + std::to_string(j) + ") was never computed");
    return {};
}

std::span<const std::uint64_t> RunTrace::ib_violations(std::size_t j) const
{
    if (j < ib_viol_.size())
        return ib_viol_[j];
    if (!succeeded())
        throw TraceError("IB(MT^" + std::to_string(j) + ") was never computed");
    return {};
}

std::vector<std::uint32_t> RunTrace::h_at(const ColouringProblem &p, std::size_t k) const
{
    std::vector<std::uint32_t> h(p.size(), k == 0 ? 0 : 1);
    // h^{j+2} = h^{j+1} + [x ∈ Var(IB(MT^j))]
    for (std::size_t j = 0; j + 2 <= k; ++j) {
        if (j >= ib_sets_.size()) {
            if (!succeeded())
                throw TraceError("h^" + std::to_string(k) + " needs rounds beyond the trace");
            break;
        }
        for (Vertex c : ib_sets_[j])
            for (Vertex v : p.graph().var(c))
                ++h[v];
    }
    return h;
}

std::size_t RunTrace::reevaluations() const
{
    std::size_t total = 0;
    for (const auto &s : stats_)
        total += s.reevaluations;
    return total;
}

RunTrace run(const ColouringProblem &p, const SparsePartition &pi, SymbolSource &tape,
             const RunOptions &options)
{
    if (options.max_steps == 0)
        throw TraceError("max_steps must be at least 1");
    const auto n = p.size();
    const bool full = options.keep_history.value_or(n <= 10000);
    IndependenceFn independence = options.independence
                                      ? options.independence
                                      : greedy_independence(options.order.size() == n
                                                                ? options.order
                                                                : VertexOrder::identity(n));

    RunTrace trace;
    auto state = initial_state(p, pi, tape);
    trace.colourings_.push_back(state.colouring);

    std::vector<char> violated(n, 0);
    VertexSet bad;
    for (Vertex x = 0; x < n; ++x)
        if (is_violated(p, state.colouring, x)) {
            violated[x] = 1;
            bad.push_back(x);
        }
    trace.initial_evaluations_ = n;

    std::vector<std::size_t> stamp(n, 0);
    std::size_t epoch = 0;

    for (std::size_t j = 0;; ++j) {
        if (bad.empty()) {
            trace.status = RunStatus::Succeeded;
            trace.steps = j + 1;
            break;
        }
        if (j + 1 >= options.max_steps) {
            trace.status = RunStatus::BudgetExhausted;
            trace.steps = j + 1;
            break;
        }

        auto ib = independence(p, bad, j);
        RoundStats stats;
        stats.bad = bad.size();
        stats.independent = ib.size();

        std::vector<std::uint64_t> viol;
        viol.reserve(ib.size());
        for (Vertex c : ib)
            viol.push_back(p.restriction_code(state.colouring, c));

        ++epoch;
        std::vector<Vertex> affected;
        for (Vertex c : ib)
            for (Vertex v : p.graph().var(c)) {
                state.colouring[v] = tape.symbol(pi.part_of[v], state.h[v]);
                ++state.h[v];
                ++stats.resampled;
                for (Vertex d : p.graph().cl(v))
                    if (stamp[d] != epoch) {
                        stamp[d] = epoch;
                        affected.push_back(d);
                    }
            }
        for (Vertex d : affected)
            violated[d] = is_violated(p, state.colouring, d) ? 1 : 0;
        stats.reevaluations = affected.size();

        // B(MT^{j+1}) ⊆ B(MT^j) ∪ affected
        ++epoch;
        VertexSet next;
        for (Vertex x : bad)
            if (violated[x] && stamp[x] != epoch) {
                stamp[x] = epoch;
                next.push_back(x);
            }
        for (Vertex x : affected)
            if (violated[x] && stamp[x] != epoch) {
                stamp[x] = epoch;
                next.push_back(x);
            }
        std::sort(next.begin(), next.end());
        bad = std::move(next);

        trace.ib_sets_.push_back(std::move(ib));
        trace.ib_viol_.push_back(std::move(viol));
        trace.stats_.push_back(stats);
        trace.colourings_.push_back(state.colouring);
        if (!full && trace.colourings_.size() > 2) {
            trace.colourings_.erase(trace.colourings_.begin());
            ++trace.first_stored_;
        }
        state.round = j + 1;
    }
    trace.h_ = std::move(state.h);

    if (trace.succeeded() && !satisfies(p, trace.final_colouring()))
        throw TraceError("internal error: run reported success on a violating colouring");
    return trace;
}

std::vector<std::uint32_t> h_infinity(const RunTrace &trace)
{
    if (!trace.succeeded())
        throw TraceError("h^infinity requires a converged run");
    return trace.final_h();
}

} // namespace rforge
