#include <rforge/landscape.hh>

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace rforge {

namespace {

std::uint64_t node_key(Vertex x, std::uint32_t level)
{
    return (std::uint64_t{level} << 32) | x;
}

bool vars_meet(const Digraph &g, Vertex x, Vertex y)
{
    auto a = g.var(x);
    auto b = g.var(y);
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else
            return true;
    }
    return false;
}

} // namespace

std::size_t GForest::height() const
{
    std::size_t h = 0;
    for (const auto &node : nodes)
        h = std::max<std::size_t>(h, node.level + 1);
    return h;
}

std::optional<std::size_t> GForest::find(Vertex x, std::uint32_t level) const
{
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].vertex == x && nodes[i].level == level)
            return i;
    return std::nullopt;
}

std::size_t GForest::root_of(std::size_t i) const
{
    std::size_t guard = 0;
    while (parent[i]) {
        i = *parent[i];
        if (++guard > nodes.size())
            throw LandscapeError("parent links contain a cycle");
    }
    return i;
}

bool GForest::grounded() const
{
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!parent[i] && nodes[i].level != 0)
            return false;
    return true;
}

bool is_g_forest(const ColouringProblem &p, const GForest &f)
{
    if (f.parent.size() != f.nodes.size())
        return false;
    std::unordered_set<std::uint64_t> keys;
    for (const auto &node : f.nodes) {
        if (node.vertex >= p.size() || !keys.insert(node_key(node.vertex, node.level)).second)
            return false;
    }
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
        if (!f.parent[i])
            continue;
        auto j = *f.parent[i];
        if (j >= f.nodes.size())
            return false;
        if (f.nodes[j].level + 1 != f.nodes[i].level)
            return false;
        if (!p.rel().has_edge(f.nodes[j].vertex, f.nodes[i].vertex))
            return false;
    }
    return true;
}

bool is_independent_forest(const ColouringProblem &p, const GForest &f)
{
    std::map<std::uint32_t, VertexSet> levels;
    for (const auto &node : f.nodes)
        levels[node.level].push_back(node.vertex);
    for (auto &[level, members] : levels) {
        std::sort(members.begin(), members.end());
        if (!is_independent(p.rel(), members))
            return false;
    }
    return true;
}

bool is_landscape(const ColouringProblem &p, const Landscape &l)
{
    if (l.viol.size() != l.forest.size() || !is_g_forest(p, l.forest) ||
        !is_independent_forest(p, l.forest))
        return false;
    for (std::size_t i = 0; i < l.forest.size(); ++i) {
        Vertex x = l.forest.nodes[i].vertex;
        if (l.viol[i].size() != p.graph().var(x).size())
            return false;
        auto list = p.forbidden(x);
        if (!std::binary_search(list.begin(), list.end(), encode_assignment(l.viol[i], p.colours())))
            return false;
    }
    return true;
}

FinalisedLandscape canonical(FinalisedLandscape l)
{
    auto &f = l.landscape.forest;
    std::vector<std::size_t> perm(f.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(f.nodes[a].level, f.nodes[a].vertex) <
               std::tie(f.nodes[b].level, f.nodes[b].vertex);
    });
    std::vector<std::size_t> where(f.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        where[perm[i]] = i;

    GForest sorted;
    std::vector<Assignment> viol;
    for (auto old : perm) {
        sorted.nodes.push_back(f.nodes[old]);
        sorted.parent.push_back(f.parent[old] ? std::optional<std::size_t>(where[*f.parent[old]])
                                              : std::nullopt);
        viol.push_back(std::move(l.landscape.viol[old]));
    }
    l.landscape.forest = std::move(sorted);
    l.landscape.viol = std::move(viol);
    return l;
}

FinalisedLandscape build_landscape(const ColouringProblem &p, const RunTrace &trace, std::size_t k,
                                   const VertexOrder &order)
{
    const auto n = p.size();
    const VertexOrder ord = order.size() == n ? order : VertexOrder::identity(n);

    FinalisedLandscape result;
    auto &forest = result.landscape.forest;
    std::vector<std::size_t> previous_level; // node indices at level i-1
    for (std::size_t i = 0; i < k; ++i) {
        auto ib = trace.ib(i);
        auto codes = trace.ib_violations(i);
        std::vector<std::size_t> this_level;
        for (std::size_t j = 0; j < ib.size(); ++j) {
            Vertex x = ib[j];
            std::optional<std::size_t> parent;
            if (i > 0) {
                for (auto cand : previous_level) {
                    Vertex y = forest.nodes[cand].vertex;
                    if (!p.rel().has_edge(x, y))
                        continue;
                    if (!parent || ord.less(y, forest.nodes[*parent].vertex))
                        parent = cand;
                }
                if (!parent)
                    throw LandscapeError("node (" + std::to_string(x) + "," + std::to_string(i) +
                                         ") has no Rel-neighbour one level down");
            }
            this_level.push_back(forest.nodes.size());
            forest.nodes.push_back({x, static_cast<std::uint32_t>(i)});
            forest.parent.push_back(parent);
            result.landscape.viol.push_back(
                decode_assignment(codes[j], p.graph().var(x).size(), p.colours()));
        }
        previous_level = std::move(this_level);
    }
    result.fin = trace.colouring(k);
    return result;
}

std::vector<SymbolSeq> used_of(const ColouringProblem &p, const FinalisedLandscape &l)
{
    const auto &f = l.forest();
    std::vector<std::vector<std::pair<std::uint32_t, Colour>>> entries(p.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto vars = p.graph().var(f.nodes[i].vertex);
        const auto &tuple = l.landscape.viol[i];
        for (std::size_t j = 0; j < vars.size(); ++j)
            entries[vars[j]].emplace_back(f.nodes[i].level, tuple[j]);
    }
    std::vector<SymbolSeq> used(p.size());
    for (Vertex x = 0; x < p.size(); ++x) {
        auto &e = entries[x];
        std::sort(e.begin(), e.end());
        for (auto [level, colour] : e)
            used[x].push_back(colour);
        used[x].push_back(l.fin[x]);
    }
    return used;
}

std::size_t varcount(const ColouringProblem &p, const GForest &f)
{
    std::size_t total = p.size();
    for (const auto &node : f.nodes)
        total += p.graph().var(node.vertex).size();
    return total;
}

namespace {

struct Blocker {
    std::size_t tau_node;
    std::size_t other_node;
};

// The rewriting state for ground(): nodes with levels, parents and a key index.
class GroundingWork {
  public:
    GroundingWork(const ColouringProblem &p, const FinalisedLandscape &l) :
        p_(p), nodes_(l.forest().nodes), parent_(l.forest().parent), viol_(l.landscape.viol)
    {
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            index_[node_key(nodes_[i].vertex, nodes_[i].level)] = i;
    }

    // root index per node
    std::vector<std::size_t> roots() const
    {
        std::vector<std::size_t> r(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            std::size_t j = i;
            while (parent_[j])
                j = *parent_[j];
            r[i] = j;
        }
        return r;
    }

    // smallest airborne tree by (size, root vertex, root level); empty if grounded
    std::vector<std::size_t> pick_airborne() const
    {
        auto r = roots();
        std::map<std::size_t, std::vector<std::size_t>> trees;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[r[i]].level > 0)
                trees[r[i]].push_back(i);
        const std::vector<std::size_t> *best = nullptr;
        std::size_t best_root = 0;
        for (const auto &[root, members] : trees) {
            auto key = std::tuple(members.size(), nodes_[root].vertex, nodes_[root].level);
            if (!best || key < std::tuple(best->size(), nodes_[best_root].vertex,
                                          nodes_[best_root].level)) {
                best = &members;
                best_root = root;
            }
        }
        return best ? *best : std::vector<std::size_t>{};
    }

    // minimal (level, x, y) with (x,i) ∈ τ, (y,i-1) ∉ τ and x = y or Var(x) ∩ Var(y) ≠ ∅
    std::optional<Blocker> blocker(const std::vector<std::size_t> &tau) const
    {
        std::unordered_set<std::size_t> in_tau(tau.begin(), tau.end());
        std::optional<Blocker> best;
        std::tuple<std::uint32_t, Vertex, Vertex> best_key{};
        for (auto i : tau) {
            const auto [x, level] = nodes_[i];
            if (level == 0)
                continue;
            auto consider = [&](Vertex y) {
                auto it = index_.find(node_key(y, level - 1));
                if (it == index_.end() || in_tau.contains(it->second))
                    return;
                auto key = std::tuple(level, x, y);
                if (!best || key < best_key) {
                    best = Blocker{i, it->second};
                    best_key = key;
                }
            };
            consider(x);
            for (Vertex y : p_.rel().var(x))
                if (y != x && vars_meet(p_.graph(), x, y))
                    consider(y);
        }
        return best;
    }

    void push_down(const std::vector<std::size_t> &tau)
    {
        for (auto i : tau)
            index_.erase(node_key(nodes_[i].vertex, nodes_[i].level));
        for (auto i : tau) {
            --nodes_[i].level;
            index_[node_key(nodes_[i].vertex, nodes_[i].level)] = i;
        }
    }

    void attach(std::size_t child, std::size_t new_parent) { parent_[child] = new_parent; }
    bool is_root(std::size_t i) const { return !parent_[i]; }
    std::uint32_t level(std::size_t i) const { return nodes_[i].level; }

    FinalisedLandscape result(const Colouring &fin) &&
    {
        FinalisedLandscape out;
        out.landscape.forest.nodes = std::move(nodes_);
        out.landscape.forest.parent = std::move(parent_);
        out.landscape.viol = std::move(viol_);
        out.fin = fin;
        return canonical(std::move(out));
    }

  private:
    const ColouringProblem &p_;
    std::vector<ForestNode> nodes_;
    std::vector<std::optional<std::size_t>> parent_;
    std::vector<Assignment> viol_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

} // namespace

FinalisedLandscape ground(const ColouringProblem &p, const FinalisedLandscape &l, std::size_t step_cap,
                          GroundingStats *stats)
{
    GroundingStats local;
    GroundingWork work(p, l);
    auto charge = [&](std::size_t &counter) {
        ++counter;
        if (local.steps() > step_cap)
            throw LandscapeError("grounding exceeded " + std::to_string(step_cap) + " steps");
    };

    while (true) {
        auto tau = work.pick_airborne();
        if (tau.empty())
            break;
        std::size_t root = tau.front();
        for (auto i : tau)
            if (work.is_root(i))
                root = i;

        std::optional<Blocker> block;
        while (work.level(root) > 0 && !(block = work.blocker(tau))) {
            work.push_down(tau);
            charge(local.pushes);
        }
        if (work.level(root) == 0)
            continue;

        if (block->tau_node != root) {
            work.attach(block->tau_node, block->other_node);
            charge(local.reattachments);
        }
        else {
            work.attach(root, block->other_node);
            charge(local.joins);
        }
    }
    if (stats)
        *stats = local;
    return std::move(work).result(l.fin);
}

RestrictedProblem restrict_problem(const ColouringProblem &p, const SparsePartition &pi,
                                   std::span<const Vertex> u)
{
    if (!is_pi_unique(pi, u))
        throw LandscapeError("restriction set is not pi-unique");
    const auto parts = pi.num_parts;
    std::vector<char> in_u(p.size(), 0);
    RestrictedProblem result;
    result.preimage.assign(parts, std::nullopt);
    for (Vertex x : u) {
        in_u[x] = 1;
        result.preimage[pi.part_of[x]] = x;
    }

    std::vector<Edge> edges;
    for (Vertex x : u)
        for (Vertex y : p.graph().var(x))
            if (in_u[y])
                edges.emplace_back(pi.part_of[x], pi.part_of[y]);
    Digraph restricted(parts, edges);

    LocalRule rule;
    rule.forbidden.resize(parts);
    for (Vertex x : u) {
        auto vars = p.graph().var(x);
        if (!std::all_of(vars.begin(), vars.end(), [&](Vertex v) { return in_u[v] != 0; }))
            continue;
        const auto alpha = pi.part_of[x];
        auto new_vars = restricted.var(alpha);
        // position of S_π(v) inside Var'(alpha) for each v ∈ Var(x)
        std::vector<std::size_t> slot;
        for (Vertex v : vars)
            slot.push_back(static_cast<std::size_t>(
                std::lower_bound(new_vars.begin(), new_vars.end(), pi.part_of[v]) - new_vars.begin()));
        for (const auto &tuple : p.forbidden_tuples(x)) {
            Assignment moved(tuple.size());
            for (std::size_t j = 0; j < tuple.size(); ++j)
                moved[slot[j]] = tuple[j];
            rule.forbidden[alpha].push_back(encode_assignment(moved, p.colours()));
        }
    }
    result.problem = ColouringProblem(std::move(restricted), p.colours(), std::move(rule));
    result.partition = singleton_partition(parts);
    return result;
}

FinalisedLandscape restrict_landscape(const ColouringProblem &p, const SparsePartition &pi,
                                      const FinalisedLandscape &l, std::span<const Vertex> u)
{
    auto restricted = restrict_problem(p, pi, u);
    const auto &g2 = restricted.problem.graph();
    std::vector<char> in_u(p.size(), 0);
    for (Vertex x : u)
        in_u[x] = 1;

    const auto &f = l.forest();
    FinalisedLandscape out;
    auto &forest = out.landscape.forest;
    std::vector<std::optional<std::size_t>> new_index(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        Vertex x = f.nodes[i].vertex;
        if (!in_u[x])
            continue;
        new_index[i] = forest.nodes.size();
        const auto alpha = pi.part_of[x];
        forest.nodes.push_back({alpha, f.nodes[i].level});

        auto vars = p.graph().var(x);
        auto new_vars = g2.var(alpha);
        Assignment tuple(new_vars.size(), 0);
        if (std::all_of(vars.begin(), vars.end(), [&](Vertex v) { return in_u[v] != 0; })) {
            for (std::size_t j = 0; j < vars.size(); ++j) {
                auto slot = std::lower_bound(new_vars.begin(), new_vars.end(), pi.part_of[vars[j]]) -
                            new_vars.begin();
                tuple[static_cast<std::size_t>(slot)] = l.landscape.viol[i][j];
            }
        }
        out.landscape.viol.push_back(std::move(tuple));
    }
    forest.parent.resize(forest.nodes.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        if (new_index[i] && f.parent[i] && new_index[*f.parent[i]])
            forest.parent[*new_index[i]] = new_index[*f.parent[i]];

    out.fin.assign(pi.num_parts, 0);
    for (std::size_t alpha = 0; alpha < pi.num_parts; ++alpha)
        if (restricted.preimage[alpha])
            out.fin[alpha] = l.fin[*restricted.preimage[alpha]];
    return out;
}

std::size_t stable_radius(const Digraph &g, std::span<const std::uint32_t> h, Vertex y,
                          std::size_t R, double eps)
{
    auto dist = distances_from(g, y);
    auto mass_within = [&](std::size_t r) {
        double total = 0.0;
        for (Vertex x = 0; x < g.size(); ++x)
            if (dist[x] <= r)
                total += h[x];
        return total;
    };
    for (std::size_t r = 3; r <= 3 * R; ++r)
        if (mass_within(r) <= (1.0 + eps) * mass_within(r - 3))
            return r;
    throw LandscapeError("no stable radius in {3,...," + std::to_string(3 * R) + "}");
}

} // namespace rforge
