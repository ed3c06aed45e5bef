#pragma once

#include <rforge/graph.hh>
#include <rforge/partition.hh>
#include <rforge/rules.hh>
#include <rforge/tape.hh>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rforge {

/// log K for K = d (|π|^d 2^{b^d+1} b)^{|π|} |π|! / (1 - (eΔ)^{-δ})^{|π|}.
double explicit_log_K(Colour b, double delta, std::size_t d, std::size_t num_parts, double Delta);

/// The same constant evaluated directly; nullopt when it is not a finite double.
std::optional<double> explicit_K(Colour b, double delta, std::size_t d, std::size_t num_parts,
                                 double Delta);

/// Smallest m ≥ 1 with log K + |π| log(m+1) - δ m log(eΔ) < 0.
std::size_t threshold_m(double log_K, std::size_t num_parts, double Delta, double delta);

struct DerandBudget {
    std::size_t m = 1;
    double log_K = 0.0;
    /// b^{|π|·m}; nullopt when it does not fit in 64 bits.
    std::optional<std::uint64_t> num_tapes;
    bool infeasible = false;
};

/// Theoretical m for the given parameters, with the tape count checked against tape_cap.
DerandBudget derand_budget(Colour b, double delta, std::size_t d, std::size_t num_parts, double Delta,
                           std::uint64_t tape_cap = std::uint64_t{1} << 24);

/// b^{parts·m} if it fits in 64 bits.
std::optional<std::uint64_t> tape_count(Colour b, std::size_t num_parts, std::size_t m);

struct PassLists {
    std::vector<Vertex> currently_violated;
    std::vector<Vertex> potentially_violated;
};

struct PassState {
    Colouring colouring;
    std::vector<std::uint32_t> h;
    PassLists lists;
    std::size_t passes = 0;
    std::size_t reevaluations = 0;
};

enum class PassOutcome { Continue, Success, TapeExhausted };

/// What one pass did: the scan list and the clauses it resampled, in scan order.
struct PassRecord {
    std::vector<Vertex> scanned;
    std::vector<Vertex> resampled;
};

/// MT^0 from the tape and the initial lists (every clause checked once).
/// Throws TapeExhausted if the tape has no round 0.
PassState init_pass_state(const ColouringProblem &p, const SparsePartition &pi, SymbolSource &tape);

/// One pass of the internal loop. A clause of currently_violated is resampled iff it is
/// still violated and no clause resampled earlier in this pass is a Rel-neighbour. The
/// lists are then rebuilt from potentially_violated. Returns Success when
/// currently_violated is empty (before or after the pass) and TapeExhausted when a read
/// past the tape happened; the state is then unspecified.
PassOutcome internal_pass(const ColouringProblem &p, const SparsePartition &pi, SymbolSource &tape,
                          PassState &state, PassRecord *record = nullptr);

struct TapeAttempt {
    std::uint64_t index = 0;
    std::size_t passes = 0;
    std::size_t reevaluations = 0;
    bool success = false;
};

class DerandError : public std::runtime_error {
  public:
    enum class Kind { Infeasible, Exhausted };
    DerandError(Kind kind, const std::string &what, std::vector<TapeAttempt> attempts = {})
        : std::runtime_error(what), kind(kind), attempts(std::move(attempts))
    {
    }
    Kind kind;
    std::vector<TapeAttempt> attempts; ///< every tape tried, for Exhausted
};

struct DerandResult {
    Colouring colouring;
    std::uint64_t tape_index = 0;
    std::vector<TapeAttempt> attempts;
};

/// Tries finite tapes rnd_m in index order (see FiniteTape::from_index) and returns the
/// first verified satisfying colouring. Throws DerandError.
DerandResult derand_solve(const ColouringProblem &p, const SparsePartition &pi, std::size_t m,
                          std::uint64_t tape_cap = std::uint64_t{1} << 24);

/// d^4 m n, saturating.
std::uint64_t work_bound(std::size_t d, std::size_t m, std::size_t n);

} // namespace rforge
