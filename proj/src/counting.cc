#include <rforge/counting.hh>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>

namespace rforge {

namespace {

using Encodings = std::vector<std::string>;

// All Δ-labelled trees with `size` vertices. "-" is the absent subtree.
class TreeGenerator {
  public:
    explicit TreeGenerator(std::size_t delta) : delta_(delta) {}

    const Encodings &trees(std::size_t size)
    {
        if (auto it = memo_.find(size); it != memo_.end())
            return it->second;
        Encodings out;
        if (size == 0)
            out.push_back("-");
        else {
            std::vector<std::size_t> split(delta_, 0);
            distribute(size - 1, 0, split, out);
        }
        return memo_[size] = std::move(out);
    }

  private:
    // every way to hand `left` vertices to the labels slot..Δ-1
    void distribute(std::size_t left, std::size_t slot, std::vector<std::size_t> &split, Encodings &out)
    {
        if (slot + 1 == delta_) {
            split[slot] = left;
            std::string prefix = "(";
            combine(split, 0, prefix, out);
            return;
        }
        for (std::size_t k = 0; k <= left; ++k) {
            split[slot] = k;
            distribute(left - k, slot + 1, split, out);
        }
    }

    void combine(const std::vector<std::size_t> &split, std::size_t slot, std::string &prefix,
                 Encodings &out)
    {
        if (slot == delta_) {
            out.push_back(prefix + ")");
            return;
        }
        // copy: trees() may rehash the memo while recursing
        const Encodings children = trees(split[slot]);
        for (const auto &child : children) {
            auto saved = prefix.size();
            prefix += child;
            if (slot + 1 < delta_)
                prefix += ',';
            combine(split, slot + 1, prefix, out);
            prefix.resize(saved);
        }
    }

    std::size_t delta_;
    std::map<std::size_t, Encodings> memo_;
};

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        throw BudgetError("coefficient overflow");
    return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r))
        throw BudgetError("coefficient overflow");
    return r;
}

std::vector<std::uint64_t> truncated_product(const std::vector<std::uint64_t> &a,
                                             const std::vector<std::uint64_t> &b, std::size_t terms)
{
    std::vector<std::uint64_t> out(terms, 0);
    for (std::size_t i = 0; i < a.size() && i < terms; ++i)
        for (std::size_t j = 0; j < b.size() && i + j < terms; ++j)
            out[i + j] = checked_add(out[i + j], checked_mul(a[i], b[j]));
    return out;
}

} // namespace

std::uint64_t count_delta_trees(std::size_t delta, std::size_t i, TreeBudget budget)
{
    if (delta < 1)
        throw BudgetError("delta must be at least 1");
    if (delta > budget.max_delta || i > budget.max_vertices)
        throw BudgetError("tree enumeration budget exceeded (delta " + std::to_string(delta) +
                          ", vertices " + std::to_string(i) + ")");
    if (i == 0)
        return 1;
    TreeGenerator gen(delta);
    const auto &all = gen.trees(i);
    std::set<std::string> distinct(all.begin(), all.end());
    return distinct.size();
}

std::vector<std::uint64_t> q_poly(std::size_t delta, std::size_t i, std::size_t terms)
{
    if (delta < 1)
        throw BudgetError("delta must be at least 1");
    std::vector<std::uint64_t> q{1, 1};
    q.resize(std::max<std::size_t>(terms, 2), 0);
    q.resize(terms);
    for (std::size_t step = 0; step < i; ++step) {
        std::vector<std::uint64_t> power(terms, 0);
        if (terms > 0)
            power[0] = 1;
        for (std::size_t k = 0; k < delta; ++k)
            power = truncated_product(power, q, terms);
        std::vector<std::uint64_t> next(terms, 0);
        if (terms > 0)
            next[0] = 1;
        for (std::size_t k = 1; k < terms; ++k)
            next[k] = power[k - 1];
        q = std::move(next);
    }
    return q;
}

double q_value(std::size_t delta, std::size_t i, double x)
{
    double q = 1.0 + x;
    for (std::size_t step = 0; step < i; ++step)
        q = 1.0 + x * std::pow(q, static_cast<double>(delta));
    return q;
}

double q_rho(std::size_t delta)
{
    const double d = static_cast<double>(delta);
    return std::pow(d - 1.0, d - 1.0) / std::pow(d, d);
}

std::uint64_t enumerate_grounded_forests(const Digraph &g, std::size_t m, ForestBudget budget)
{
    const auto n = g.size();
    if (n > budget.max_vertices || m > budget.max_nodes)
        throw BudgetError("forest enumeration budget exceeded (n " + std::to_string(n) + ", m " +
                          std::to_string(m) + ")");
    const auto rel = build_rel(g);
    std::vector<std::uint32_t> adj(n, 0); // Rel neighbours without the loop
    for (Vertex x = 0; x < n; ++x)
        for (Vertex y : rel.var(x))
            if (y != x)
                adj[x] |= 1u << y;

    const std::uint32_t full = (1u << n) - 1;
    auto independent = [&](std::uint32_t s) {
        for (Vertex x = 0; x < n; ++x)
            if ((s >> x & 1) && (adj[x] & s))
                return false;
        return true;
    };
    auto parent_choices = [&](Vertex x, std::uint32_t below) {
        std::uint64_t c = 0;
        for (Vertex y : rel.var(x))
            c += below >> y & 1;
        return c;
    };

    // ways to place `left` more nodes on the levels above `below`
    auto extend = [&](auto &self, std::uint32_t below, std::size_t left) -> std::uint64_t {
        if (left == 0)
            return 1;
        std::uint64_t total = 0;
        for (std::uint32_t s = 1; s <= full; ++s) {
            const auto size = static_cast<std::size_t>(std::popcount(s));
            if (size > left || !independent(s))
                continue;
            std::uint64_t weight = 1;
            for (Vertex x = 0; x < n && weight; ++x)
                if (s >> x & 1)
                    weight *= parent_choices(x, below);
            if (weight)
                total += weight * self(self, s, left - size);
        }
        return total;
    };

    if (m == 0)
        return 1;
    std::uint64_t total = 0;
    for (std::uint32_t s = 1; s <= full; ++s) {
        const auto size = static_cast<std::size_t>(std::popcount(s));
        if (size <= m && independent(s))
            total += extend(extend, s, m - size);
    }
    return total;
}

double grounded_forest_bound(const Digraph &g, std::size_t m)
{
    const double delta = static_cast<double>(std::max<std::size_t>(build_rel(g).max_degree(), 1));
    const double n = static_cast<double>(g.size());
    return std::pow(static_cast<double>(m) + 1.0, n - 1.0) *
           std::pow(std::numbers::e * delta, static_cast<double>(m));
}

std::uint64_t count_decorations(const ColouringProblem &p, const GForest &f)
{
    std::uint64_t total = 1;
    for (const auto &node : f.nodes) {
        const auto width = p.graph().var(node.vertex).size();
        std::uint64_t tuples = 1;
        for (std::size_t k = 0; k < width; ++k)
            tuples = checked_mul(tuples, p.colours());
        std::uint64_t allowed_viol = 0;
        for (std::uint64_t code = 0; code < tuples; ++code) {
            Colouring f_local(p.size(), 0);
            auto tuple = decode_assignment(code, width, p.colours());
            auto vars = p.graph().var(node.vertex);
            for (std::size_t k = 0; k < width; ++k)
                f_local[vars[k]] = tuple[k];
            allowed_viol += is_violated(p, f_local, node.vertex) ? 1 : 0;
        }
        total = checked_mul(total, allowed_viol);
    }
    return total;
}

} // namespace rforge
