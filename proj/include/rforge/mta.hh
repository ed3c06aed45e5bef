#pragma once

#include <rforge/graph.hh>
#include <rforge/partition.hh>
#include <rforge/rules.hh>
#include <rforge/tape.hh>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace rforge {

/// Chooses a maximal independent subset of the bad set in Rel(G) for a given round.
using IndependenceFn =
    std::function<VertexSet(const ColouringProblem &, const VertexSet &bad, std::size_t round)>;

/// greedy_mis over Rel(G) with a fixed order.
IndependenceFn greedy_independence(VertexOrder order);

/// MT^j together with the counters h^{j+1}.
struct MtaState {
    Colouring colouring;
    std::vector<std::uint32_t> h;
    std::size_t round = 0;
};

/// MT^0(x) = rnd(S_π(x), 0).
Colouring initial_colouring(const ColouringProblem &p, const SparsePartition &pi, SymbolSource &tape);

/// MT^0 with h^1 ≡ 1.
MtaState initial_state(const ColouringProblem &p, const SparsePartition &pi, SymbolSource &tape);

/// One round from the definition: B = bad set of MT^j, IB = independence(B), and every
/// x ∈ Var(IB) reads rnd(S_π(x), h^{j+1}(x)). Evaluates every clause; run() is the
/// incremental equivalent. Returns IB.
VertexSet step(const ColouringProblem &p, const SparsePartition &pi, SymbolSource &tape,
               MtaState &state, const IndependenceFn &independence);

enum class RunStatus { Succeeded, BudgetExhausted };

class TraceError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

struct RoundStats {
    std::size_t bad = 0;           ///< |B(MT^j)|
    std::size_t independent = 0;   ///< |IB(MT^j)|
    std::size_t resampled = 0;     ///< |Var(IB(MT^j))|
    std::size_t reevaluations = 0; ///< clause checks needed to refresh B afterwards
};

struct RunOptions {
    std::size_t max_steps = 100000;
    VertexOrder order;
    /// Overrides the greedy rule built from `order` when set.
    IndependenceFn independence;
    /// Full colouring history; default: only when n ≤ 10^4.
    std::optional<bool> keep_history;
};

/// Record of MT^0..MT^J with IB(MT^0)..IB(MT^{J-1}).
///
/// On success J = steps - 1 and B(MT^J) = ∅, so later rounds repeat MT^J with empty
/// independent sets; colouring(j) and ib(j) answer for those rounds too.
class RunTrace {
  public:
    RunStatus status = RunStatus::BudgetExhausted;
    /// i for "succeeded after i steps"; number of colourings computed otherwise.
    std::size_t steps = 0;

    std::size_t last_index() const { return steps == 0 ? 0 : steps - 1; }
    bool succeeded() const { return status == RunStatus::Succeeded; }
    bool has_full_history() const { return first_stored_ == 0; }

    const Colouring &colouring(std::size_t j) const;
    const Colouring &final_colouring() const { return colourings_.back(); }
    std::span<const Vertex> ib(std::size_t j) const;
    /// Restriction codes res_x(MT^j) for x ∈ IB(MT^j), aligned with ib(j).
    std::span<const std::uint64_t> ib_violations(std::size_t j) const;
    std::size_t recorded_rounds() const { return ib_sets_.size(); }

    /// h^k for any k (h^0 ≡ 0, h^1 ≡ 1).
    std::vector<std::uint32_t> h_at(const ColouringProblem &p, std::size_t k) const;
    /// h^{J+1}.
    const std::vector<std::uint32_t> &final_h() const { return h_; }

    const std::vector<RoundStats> &round_stats() const { return stats_; }
    std::size_t initial_evaluations() const { return initial_evaluations_; }
    /// Clause re-evaluations after MT^0 and B(MT^0) were computed.
    std::size_t reevaluations() const;

  private:
    friend RunTrace run(const ColouringProblem &, const SparsePartition &, SymbolSource &,
                        const RunOptions &);
    std::size_t first_stored_ = 0;
    std::vector<Colouring> colourings_;
    std::vector<VertexSet> ib_sets_;
    std::vector<std::vector<std::uint64_t>> ib_viol_;
    std::vector<std::uint32_t> h_;
    std::vector<RoundStats> stats_;
    std::size_t initial_evaluations_ = 0;
};

/// Iterate step() until B(MT^{i-1}) = ∅ or max_steps colourings have been produced.
/// A succeeded run's final colouring is re-checked with satisfies().
RunTrace run(const ColouringProblem &p, const SparsePartition &pi, SymbolSource &tape,
             const RunOptions &options = {});

/// h^∞ of a succeeded run; throws TraceError otherwise.
std::vector<std::uint32_t> h_infinity(const RunTrace &trace);

/// Used^k and Unused^k per vertex.
struct UsedUnused {
    std::vector<SymbolSeq> used;
    std::vector<SymbolSeq> unused;
};

/// Used^k(x) = rnd(S_π(x), 0..h^k(x)-1), Unused^k(x) = rnd(S_π(x), h^k(x)..k-1).
/// Reads the tape through peek() so highwater marks are left alone.
UsedUnused used_unused(const ColouringProblem &p, const RunTrace &trace, const SparsePartition &pi,
                       const RandomTape &tape, std::size_t k);

struct SymbolCount {
    std::uint64_t symbols = 0;
    /// False when the run did not converge; `symbols` is then a lower bound.
    bool exact = true;
    double bits(Colour b) const;
};

/// Σ over parts α of max_{x ∈ α} h^∞(x): the number of distinct tape cells read.
SymbolCount symbols_consumed(const RunTrace &trace, const SparsePartition &pi);

} // namespace rforge
