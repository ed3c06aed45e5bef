#pragma once

#include <rforge/mta.hh>
#include <rforge/partition.hh>
#include <rforge/rules.hh>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rforge {

struct TrialResult {
    std::uint64_t seed = 0;
    bool succeeded = false;
    bool verified = false; ///< satisfies() on the final colouring
    std::size_t rounds = 0;
    std::uint32_t max_h = 0;
    std::uint64_t symbols = 0;
    std::size_t reevaluations = 0;
    double wall_ms = 0.0;
};

/// Worker count from RESAMPLE_FORGE_THREADS (default: hardware concurrency, at least 1).
std::size_t configured_threads();

/// One run per seed with a RandomTape(seed). Trials are spread over `threads` workers;
/// results come back in seed order.
std::vector<TrialResult> run_trials(const ColouringProblem &p, const SparsePartition &pi,
                                    std::span<const std::uint64_t> seeds, std::size_t max_steps = 100000,
                                    std::size_t threads = 0);

/// tail[m] = fraction of samples ≥ m, for m = 0..max.
std::vector<double> tail_table(std::span<const std::uint32_t> samples);

/// exp(slope) of a least-squares line through (m, log tail[m]) over m ≥ 1 with
/// tail[m] > 0; nullopt with fewer than two such points.
std::optional<double> decay_ratio(std::span<const double> tail);

double median(std::vector<double> values);

} // namespace rforge
