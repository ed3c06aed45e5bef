#include <rforge/rules.hh>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace rforge {

namespace {

// b^len, or nullopt-like sentinel 0 if it does not fit in 64 bits.
std::uint64_t checked_power(Colour b, std::size_t len)
{
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < len; ++i) {
        if (result > std::numeric_limits<std::uint64_t>::max() / b)
            return 0;
        result *= b;
    }
    return result;
}

} // namespace

std::uint64_t encode_assignment(std::span<const Colour> tuple, Colour b)
{
    std::uint64_t code = 0;
    for (Colour c : tuple)
        code = code * b + c;
    return code;
}

Assignment decode_assignment(std::uint64_t code, std::size_t length, Colour b)
{
    Assignment tuple(length);
    for (std::size_t i = length; i-- > 0;) {
        tuple[i] = static_cast<Colour>(code % b);
        code /= b;
    }
    return tuple;
}

ColouringProblem::ColouringProblem(Digraph graph, Colour b, LocalRule rule) :
    graph_(std::move(graph)), b_(b), rule_(std::move(rule))
{
    if (b_ < 2)
        throw ProblemError("colour count must be at least 2, got " + std::to_string(b_));
    if (rule_.forbidden.size() != graph_.size())
        throw ProblemError("local rule covers " + std::to_string(rule_.forbidden.size()) +
                           " vertices, graph has " + std::to_string(graph_.size()));
    for (Vertex x = 0; x < graph_.size(); ++x) {
        auto &list = rule_.forbidden[x];
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        const auto arity = graph_.var(x).size();
        if (arity == 0) {
            if (!list.empty())
                throw ProblemError("vertex " + std::to_string(x) +
                                   " has no variables but forbids a tuple");
            continue;
        }
        auto space = checked_power(b_, arity);
        if (space == 0)
            throw ProblemError("vertex " + std::to_string(x) + ": b^|Var| exceeds 2^64");
        if (!list.empty() && list.back() >= space)
            throw ProblemError("vertex " + std::to_string(x) + ": forbidden code out of range");
    }
    rel_ = build_rel(graph_);
    rel_max_degree_ = rel_.max_degree();
}

ColouringProblem::ColouringProblem(Digraph graph, Colour b,
                                   const std::vector<std::vector<Assignment>> &forbidden_tuples)
{
    if (forbidden_tuples.size() != graph.size())
        throw ProblemError("forbidden tuple table has wrong vertex count");
    LocalRule rule;
    rule.forbidden.resize(graph.size());
    for (Vertex x = 0; x < graph.size(); ++x)
        for (const auto &t : forbidden_tuples[x]) {
            if (t.size() != graph.var(x).size())
                throw ProblemError("vertex " + std::to_string(x) + ": tuple length " +
                                   std::to_string(t.size()) + ", expected " +
                                   std::to_string(graph.var(x).size()));
            for (Colour c : t)
                if (c >= b)
                    throw ProblemError("vertex " + std::to_string(x) + ": colour " +
                                       std::to_string(c) + " out of range");
            rule.forbidden[x].push_back(encode_assignment(t, b));
        }
    *this = ColouringProblem(std::move(graph), b, std::move(rule));
}

std::vector<Assignment> ColouringProblem::forbidden_tuples(Vertex x) const
{
    std::vector<Assignment> result;
    for (auto code : rule_.forbidden[x])
        result.push_back(decode_assignment(code, graph_.var(x).size(), b_));
    return result;
}

std::uint64_t ColouringProblem::restriction_code(const Colouring &f, Vertex x) const
{
    std::uint64_t code = 0;
    for (Vertex v : graph_.var(x))
        code = code * b_ + f[v];
    return code;
}

Assignment ColouringProblem::restriction(const Colouring &f, Vertex x) const
{
    Assignment tuple;
    for (Vertex v : graph_.var(x))
        tuple.push_back(f[v]);
    return tuple;
}

bool is_violated(const ColouringProblem &p, const Colouring &f, Vertex x)
{
    auto list = p.forbidden(x);
    if (list.empty())
        return false;
    return std::binary_search(list.begin(), list.end(), p.restriction_code(f, x));
}

VertexSet bad_set(const ColouringProblem &p, const Colouring &f)
{
    VertexSet result;
    for (Vertex x = 0; x < p.size(); ++x)
        if (is_violated(p, f, x))
            result.push_back(x);
    return result;
}

bool satisfies(const ColouringProblem &p, const Colouring &f)
{
    if (f.size() != p.size())
        return false;
    for (Colour c : f)
        if (c >= p.colours())
            return false;
    for (Vertex x = 0; x < p.size(); ++x)
        if (is_violated(p, f, x))
            return false;
    return true;
}

double lll_margin(const ColouringProblem &p)
{
    double best = 0.0;
    for (Vertex x = 0; x < p.size(); ++x) {
        auto count = p.forbidden(x).size();
        if (count == 0)
            continue;
        double arity = static_cast<double>(p.graph().var(x).size());
        best = std::max(best, static_cast<double>(count) / std::pow(p.colours(), arity));
    }
    return best;
}

double condition_threshold(const ColouringProblem &p, double delta, double eps, std::size_t d)
{
    const double big_delta = static_cast<double>(p.rel_max_degree());
    if (big_delta == 0.0)
        return std::numeric_limits<double>::infinity();
    const double log_denominator = (1.0 + delta) * std::log(std::numbers::e * big_delta) +
                                   eps * static_cast<double>(d) * std::log(p.colours());
    return std::exp(-log_denominator);
}

bool check_condition(const ColouringProblem &p, double delta, double eps, std::size_t d)
{
    const double margin = lll_margin(p);
    if (p.rel_max_degree() == 0 && margin > 0.0)
        throw ProblemError("malformed problem: forbidden tuples present but Rel(G) has no edges");
    if (margin == 0.0)
        return true;
    return margin <= condition_threshold(p, delta, eps, d) * (1.0 + 1e-12);
}

} // namespace rforge
