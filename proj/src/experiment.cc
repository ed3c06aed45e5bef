#include <rforge/experiment.hh>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace rforge {

std::size_t configured_threads()
{
    if (const char *env = std::getenv("RESAMPLE_FORGE_THREADS")) {
        try {
            const auto v = std::stoul(env);
            if (v > 0)
                return v;
        }
        catch (const std::exception &) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<TrialResult> run_trials(const ColouringProblem &p, const SparsePartition &pi,
                                    std::span<const std::uint64_t> seeds, std::size_t max_steps,
                                    std::size_t threads)
{
    std::vector<TrialResult> results(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        RunOptions options;
        options.max_steps = max_steps;
        options.keep_history = false;
        for (std::size_t i; (i = next.fetch_add(1)) < seeds.size();) {
            const auto start = std::chrono::steady_clock::now();
            RandomTape tape(seeds[i], p.colours(), pi.num_parts);
            auto trace = run(p, pi, tape, options);
            auto &r = results[i];
            r.seed = seeds[i];
            r.succeeded = trace.succeeded();
            r.verified = r.succeeded && satisfies(p, trace.final_colouring());
            r.rounds = trace.steps;
            const auto &h = trace.final_h();
            r.max_h = h.empty() ? 0 : *std::max_element(h.begin(), h.end());
            r.symbols = symbols_consumed(trace, pi).symbols;
            r.reevaluations = trace.reevaluations();
            r.wall_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
    };
    const auto count = std::min(threads ? threads : configured_threads(), std::max<std::size_t>(seeds.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < count; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
    std::sort(results.begin(), results.end(),
              [](const TrialResult &a, const TrialResult &b) { return a.seed < b.seed; });
    return results;
}

std::vector<double> tail_table(std::span<const std::uint32_t> samples)
{
    if (samples.empty())
        return {};
    const auto top = *std::max_element(samples.begin(), samples.end());
    std::vector<std::size_t> at_least(top + 2, 0);
    for (auto s : samples)
        ++at_least[s];
    for (std::size_t m = top; m-- > 0;)
        at_least[m] += at_least[m + 1];
    std::vector<double> tail(top + 1);
    for (std::size_t m = 0; m <= top; ++m)
        tail[m] = static_cast<double>(at_least[m]) / static_cast<double>(samples.size());
    return tail;
}

std::optional<double> decay_ratio(std::span<const double> tail)
{
    std::vector<std::pair<double, double>> pts;
    for (std::size_t m = 1; m < tail.size(); ++m)
        if (tail[m] > 0.0)
            pts.emplace_back(static_cast<double>(m), std::log(tail[m]));
    if (pts.size() < 2)
        return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = static_cast<double>(pts.size());
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return std::exp(slope);
}

double median(std::vector<double> values)
{
    if (values.empty())
        return 0.0;
    const auto mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    double upper = values[mid];
    if (values.size() % 2 == 1)
        return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lower + upper) / 2.0;
}

} // namespace rforge
