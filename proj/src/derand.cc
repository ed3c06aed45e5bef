#include <rforge/derand.hh>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace rforge {

double explicit_log_K(Colour b, double delta, std::size_t d, std::size_t num_parts, double Delta)
{
    if (!(delta > 0.0) || !(Delta >= 1.0) || d == 0 || num_parts == 0 || b < 2)
        throw std::invalid_argument("explicit_K needs delta > 0, Delta >= 1, d >= 1, |pi| >= 1, b >= 2");
    const double parts = static_cast<double>(num_parts);
    const double log_e_delta = 1.0 + std::log(Delta);
    // log(1 - (eΔ)^{-δ})
    const double log_gap = std::log1p(-std::exp(-delta * log_e_delta));
    const double b_pow_d = std::pow(static_cast<double>(b), static_cast<double>(d));
    const double inner = static_cast<double>(d) * std::log(parts) + (b_pow_d + 1.0) * std::numbers::ln2 +
                         std::log(static_cast<double>(b));
    return std::log(static_cast<double>(d)) + parts * inner + std::lgamma(parts + 1.0) - parts * log_gap;
}

std::optional<double> explicit_K(Colour b, double delta, std::size_t d, std::size_t num_parts,
                                 double Delta)
{
    explicit_log_K(b, delta, d, num_parts, Delta); // argument checks
    const double parts = static_cast<double>(num_parts);
    const double inner = std::pow(parts, static_cast<double>(d)) *
                         std::exp2(std::pow(static_cast<double>(b), static_cast<double>(d)) + 1.0) *
                         static_cast<double>(b);
    double factorial = 1.0;
    for (std::size_t k = 2; k <= num_parts; ++k)
        factorial *= static_cast<double>(k);
    const double gap = 1.0 - std::pow(std::numbers::e * Delta, -delta);
    const double k = static_cast<double>(d) * std::pow(inner, parts) * factorial / std::pow(gap, parts);
    if (!std::isfinite(k))
        return std::nullopt;
    return k;
}

std::size_t threshold_m(double log_K, std::size_t num_parts, double Delta, double delta)
{
    const double rate = delta * (1.0 + std::log(Delta));
    if (!(rate > 0.0))
        throw std::invalid_argument("threshold_m needs delta * log(e Delta) > 0");
    const double parts = static_cast<double>(num_parts);
    for (std::size_t m = 1;; ++m) {
        const double md = static_cast<double>(m);
        if (log_K + parts * std::log(md + 1.0) - rate * md < 0.0)
            return m;
        if (m == std::numeric_limits<std::size_t>::max())
            throw std::overflow_error("threshold_m scan overflowed");
    }
}

std::optional<std::uint64_t> tape_count(Colour b, std::size_t num_parts, std::size_t m)
{
    std::uint64_t count = 1;
    for (std::size_t k = 0; k < num_parts * m; ++k)
        if (__builtin_mul_overflow(count, std::uint64_t{b}, &count))
            return std::nullopt;
    return count;
}

DerandBudget derand_budget(Colour b, double delta, std::size_t d, std::size_t num_parts, double Delta,
                           std::uint64_t tape_cap)
{
    DerandBudget budget;
    budget.log_K = explicit_log_K(b, delta, d, num_parts, Delta);
    budget.m = threshold_m(budget.log_K, num_parts, Delta, delta);
    budget.num_tapes = tape_count(b, num_parts, budget.m);
    budget.infeasible = !budget.num_tapes || *budget.num_tapes > tape_cap;
    return budget;
}

namespace {

// CV followed by its Rel-neighbours, first occurrence kept.
std::vector<Vertex> widen(const ColouringProblem &p, const std::vector<Vertex> &cv, std::vector<char> &seen)
{
    std::vector<Vertex> pv;
    auto add = [&](Vertex x) {
        if (!seen[x]) {
            seen[x] = 1;
            pv.push_back(x);
        }
    };
    for (Vertex c : cv)
        add(c);
    for (Vertex c : cv)
        for (Vertex y : p.rel().var(c))
            add(y);
    for (Vertex x : pv)
        seen[x] = 0;
    return pv;
}

} // namespace

PassState init_pass_state(const ColouringProblem &p, const SparsePartition &pi, SymbolSource &tape)
{
    PassState state;
    state.colouring.resize(p.size());
    for (Vertex x = 0; x < p.size(); ++x)
        state.colouring[x] = tape.symbol(pi.part_of[x], 0);
    state.h.assign(p.size(), 1);
    for (Vertex x = 0; x < p.size(); ++x)
        if (is_violated(p, state.colouring, x))
            state.lists.currently_violated.push_back(x);
    std::vector<char> seen(p.size(), 0);
    state.lists.potentially_violated = widen(p, state.lists.currently_violated, seen);
    return state;
}

PassOutcome internal_pass(const ColouringProblem &p, const SparsePartition &pi, SymbolSource &tape,
                          PassState &state, PassRecord *record)
{
    auto &cv = state.lists.currently_violated;
    if (cv.empty())
        return PassOutcome::Success;
#ifndef NDEBUG
    for (Vertex x : bad_set(p, state.colouring))
        assert(std::find(cv.begin(), cv.end(), x) != cv.end());
#endif
    if (record) {
        record->scanned = cv;
        record->resampled.clear();
    }

    // variables touched by clauses resampled in this pass
    std::vector<char> touched(p.size(), 0);
    try {
        for (Vertex c : cv) {
            auto vars = p.graph().var(c);
            if (std::any_of(vars.begin(), vars.end(), [&](Vertex v) { return touched[v] != 0; }))
                continue;
            for (Vertex v : vars) {
                touched[v] = 1;
                state.colouring[v] = tape.symbol(pi.part_of[v], state.h[v]);
                ++state.h[v];
            }
            if (record)
                record->resampled.push_back(c);
        }
    }
    catch (const TapeExhausted &) {
        return PassOutcome::TapeExhausted;
    }
    ++state.passes;

    std::vector<Vertex> next_cv;
    for (Vertex x : state.lists.potentially_violated) {
        ++state.reevaluations;
        if (is_violated(p, state.colouring, x))
            next_cv.push_back(x);
    }
    std::vector<char> seen(p.size(), 0);
    state.lists.potentially_violated = widen(p, next_cv, seen);
    cv = std::move(next_cv);
    return cv.empty() ? PassOutcome::Success : PassOutcome::Continue;
}

DerandResult derand_solve(const ColouringProblem &p, const SparsePartition &pi, std::size_t m,
                          std::uint64_t tape_cap)
{
    if (m == 0)
        throw DerandError(DerandError::Kind::Infeasible, "m must be at least 1");
    const auto count = tape_count(p.colours(), pi.num_parts, m);
    if (!count || *count > tape_cap)
        throw DerandError(DerandError::Kind::Infeasible,
                          "b^(|pi|*m) tapes exceed the cap of " + std::to_string(tape_cap));

    DerandResult result;
    for (std::uint64_t index = 0; index < *count; ++index) {
        auto tape = FiniteTape::from_index(p.colours(), pi.num_parts, m, index);
        TapeAttempt attempt;
        attempt.index = index;
        PassState state = init_pass_state(p, pi, tape);
        PassOutcome outcome = state.lists.currently_violated.empty() ? PassOutcome::Success
                                                                      : PassOutcome::Continue;
        while (outcome == PassOutcome::Continue)
            outcome = internal_pass(p, pi, tape, state);
        attempt.passes = state.passes;
        attempt.reevaluations = state.reevaluations;
        attempt.success = outcome == PassOutcome::Success;
        result.attempts.push_back(attempt);
        if (attempt.success) {
            if (!satisfies(p, state.colouring))
                throw std::logic_error("internal error: derandomised colouring violates a clause");
            result.colouring = std::move(state.colouring);
            result.tape_index = index;
            return result;
        }
    }
    throw DerandError(DerandError::Kind::Exhausted,
                      "no tape among " + std::to_string(*count) + " succeeded within m = " +
                          std::to_string(m),
                      std::move(result.attempts));
}

std::uint64_t work_bound(std::size_t d, std::size_t m, std::size_t n)
{
    std::uint64_t out = 1;
    for (std::uint64_t f : {std::uint64_t{d}, std::uint64_t{d}, std::uint64_t{d}, std::uint64_t{d},
                            std::uint64_t{m}, std::uint64_t{n}})
        if (__builtin_mul_overflow(out, f, &out))
            return std::numeric_limits<std::uint64_t>::max();
    return out;
}

} // namespace rforge
