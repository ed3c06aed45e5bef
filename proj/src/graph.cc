#include <rforge/graph.hh>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace rforge {

namespace {

void sort_unique(std::vector<Vertex> &v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool contains(std::span<const Vertex> sorted, Vertex x)
{
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

} // namespace

Digraph::Digraph(std::size_t n) : out_(n), in_(n) {}

Digraph::Digraph(std::size_t n, std::span<const Edge> edges) : out_(n), in_(n)
{
    for (auto [x, y] : edges) {
        if (x >= n || y >= n)
            throw GraphError("edge (" + std::to_string(x) + "," + std::to_string(y) +
                             ") has an endpoint outside 0.." + std::to_string(n - 1));
        out_[x].push_back(y);
        in_[y].push_back(x);
    }
    for (auto &l : out_)
        sort_unique(l);
    for (auto &l : in_)
        sort_unique(l);
}

std::size_t Digraph::num_edges() const
{
    std::size_t total = 0;
    for (const auto &l : out_)
        total += l.size();
    return total;
}

bool Digraph::has_edge(Vertex x, Vertex y) const { return contains(out_[x], y); }

std::size_t Digraph::degree(Vertex x) const
{
    // |A ∪ B| for two sorted lists
    const auto &a = out_[x];
    const auto &b = in_[x];
    std::size_t common = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else {
            ++common;
            ++i;
            ++j;
        }
    }
    return a.size() + b.size() - common;
}

std::size_t Digraph::max_degree() const
{
    std::size_t best = 0;
    for (Vertex x = 0; x < size(); ++x)
        best = std::max(best, degree(x));
    return best;
}

std::size_t Digraph::max_out_degree() const
{
    std::size_t best = 0;
    for (const auto &l : out_)
        best = std::max(best, l.size());
    return best;
}

VertexSet Digraph::undirected_neighbours(Vertex x) const
{
    VertexSet result;
    std::set_union(out_[x].begin(), out_[x].end(), in_[x].begin(), in_[x].end(),
                   std::back_inserter(result));
    auto it = std::lower_bound(result.begin(), result.end(), x);
    if (it != result.end() && *it == x)
        result.erase(it);
    return result;
}

bool Digraph::is_symmetric() const { return out_ == in_; }

std::vector<Edge> Digraph::edges() const
{
    std::vector<Edge> result;
    for (Vertex x = 0; x < size(); ++x)
        for (Vertex y : out_[x])
            result.emplace_back(x, y);
    return result;
}

VertexOrder::VertexOrder(std::vector<std::size_t> rank) : rank_(std::move(rank))
{
    std::vector<bool> seen(rank_.size(), false);
    for (auto r : rank_) {
        if (r >= rank_.size() || seen[r])
            throw GraphError("vertex order is not a permutation");
        seen[r] = true;
    }
}

VertexOrder VertexOrder::identity(std::size_t n)
{
    std::vector<std::size_t> rank(n);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    return VertexOrder(std::move(rank));
}

VertexOrder VertexOrder::from_sequence(std::size_t n, std::span<const Vertex> sequence)
{
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> rank(n, unset);
    std::size_t next = 0;
    for (Vertex x : sequence)
        if (x < n && rank[x] == unset)
            rank[x] = next++;
    for (Vertex x = 0; x < n; ++x)
        if (rank[x] == unset)
            rank[x] = next++;
    return VertexOrder(std::move(rank));
}

Digraph build_rel(const Digraph &g)
{
    std::vector<Edge> edges;
    for (Vertex v = 0; v < g.size(); ++v) {
        auto clauses = g.cl(v);
        for (Vertex x : clauses)
            for (Vertex y : clauses)
                edges.emplace_back(x, y);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Digraph(g.size(), edges);
}

std::vector<std::size_t> distances_from(const Digraph &g, Vertex x)
{
    constexpr auto inf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(g.size(), inf);
    std::deque<Vertex> queue{x};
    dist[x] = 0;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        auto relax = [&](Vertex w) {
            if (dist[w] == inf) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        };
        for (Vertex w : g.var(u))
            relax(w);
        for (Vertex w : g.cl(u))
            relax(w);
    }
    return dist;
}

namespace {

// BFS truncated at radius r; returns the visited vertices grouped by layer.
std::vector<std::vector<Vertex>> bfs_layers(const Digraph &g, Vertex x, std::size_t r)
{
    std::vector<std::vector<Vertex>> layers{{x}};
    std::unordered_set<Vertex> seen{x};
    for (std::size_t d = 0; d < r; ++d) {
        std::vector<Vertex> next;
        for (Vertex u : layers.back()) {
            auto visit = [&](Vertex w) {
                if (seen.insert(w).second)
                    next.push_back(w);
            };
            for (Vertex w : g.var(u))
                visit(w);
            for (Vertex w : g.cl(u))
                visit(w);
        }
        if (next.empty())
            break;
        layers.push_back(std::move(next));
    }
    return layers;
}

} // namespace

VertexSet ball(const Digraph &g, Vertex x, std::size_t r)
{
    VertexSet result;
    for (const auto &layer : bfs_layers(g, x, r))
        result.insert(result.end(), layer.begin(), layer.end());
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<std::size_t> ball_profile(const Digraph &g, Vertex x, std::size_t max_radius)
{
    auto layers = bfs_layers(g, x, max_radius);
    std::vector<std::size_t> profile(max_radius + 1);
    std::size_t total = 0;
    for (std::size_t r = 0; r <= max_radius; ++r) {
        if (r < layers.size())
            total += layers[r].size();
        profile[r] = total;
    }
    return profile;
}

Digraph power_graph(const Digraph &g, std::size_t r)
{
    std::vector<Edge> edges;
    for (Vertex x = 0; x < g.size(); ++x)
        for (Vertex y : ball(g, x, r))
            if (y != x)
                edges.emplace_back(x, y);
    return Digraph(g.size(), edges);
}

VertexSet greedy_mis(const Digraph &g_sym, std::span<const Vertex> candidates,
                     const VertexOrder &order)
{
    std::vector<Vertex> scan(candidates.begin(), candidates.end());
    std::sort(scan.begin(), scan.end(),
              [&](Vertex a, Vertex b) { return order.less(a, b); });
    scan.erase(std::unique(scan.begin(), scan.end()), scan.end());

    std::unordered_set<Vertex> kept;
    VertexSet result;
    for (Vertex x : scan) {
        bool blocked = false;
        for (Vertex y : g_sym.var(x))
            if (y != x && kept.contains(y)) {
                blocked = true;
                break;
            }
        if (!blocked) {
            kept.insert(x);
            result.push_back(x);
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

bool is_independent(const Digraph &g_sym, std::span<const Vertex> s)
{
    std::unordered_set<Vertex> members(s.begin(), s.end());
    for (Vertex x : s)
        for (Vertex y : g_sym.var(x))
            if (y != x && members.contains(y))
                return false;
    return true;
}

bool is_maximal_independent(const Digraph &g_sym, std::span<const Vertex> candidates,
                            std::span<const Vertex> s)
{
    std::unordered_set<Vertex> pool(candidates.begin(), candidates.end());
    for (Vertex x : s)
        if (!pool.contains(x))
            return false;
    if (!is_independent(g_sym, s))
        return false;
    std::unordered_set<Vertex> members(s.begin(), s.end());
    for (Vertex c : candidates) {
        if (members.contains(c))
            continue;
        bool dominated = false;
        for (Vertex y : g_sym.var(c))
            if (y != c && members.contains(y)) {
                dominated = true;
                break;
            }
        if (!dominated)
            return false;
    }
    return true;
}

bool check_subexp(const Digraph &g, std::size_t R, double eps, std::size_t d)
{
    if (g.max_degree() > d)
        return false;
    const double log_limit = static_cast<double>(R) * std::log1p(eps) + 1e-9;
    for (Vertex x = 0; x < g.size(); ++x) {
        auto size = ball_profile(g, x, 3 * R).back();
        if (std::log(static_cast<double>(size)) > log_limit)
            return false;
    }
    return true;
}

} // namespace rforge
