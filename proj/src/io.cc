#include <rforge/io.hh>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace rforge {

SchemaError::SchemaError(std::string where_, const std::string &message) :
    std::invalid_argument(where_ + ": " + message), where(std::move(where_))
{
}

namespace {

const Json &require(const Json &doc, const char *key)
{
    if (!doc.contains(key))
        throw SchemaError(std::string("/") + key, "missing field");
    return doc.at(key);
}

std::uint64_t require_uint(const Json &value, const std::string &where)
{
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0))
        throw SchemaError(where, "expected a non-negative integer");
    return value.get<std::uint64_t>();
}

// Mersenne Twister output is fixed by the standard; the reduction below is ours so the
// stream does not depend on the library's distributions.
std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t bound)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v = 0;
    do
        v = rng();
    while (v >= limit);
    return v % bound;
}

} // namespace

LoadedProblem parse_problem(const Json &doc)
{
    if (!doc.is_object())
        throw SchemaError("/", "expected a JSON object");
    LoadedProblem out;
    const auto version = require_uint(require(doc, "schema_version"), "/schema_version");
    if (version != problem_schema_version)
        throw SchemaError("/schema_version", "unsupported version " + std::to_string(version));
    const auto b = require_uint(require(doc, "b"), "/b");
    if (b < 2 || b > std::numeric_limits<Colour>::max())
        throw SchemaError("/b", "colour count must be at least 2");
    const auto n = require_uint(require(doc, "num_vertices"), "/num_vertices");
    if (n > std::numeric_limits<Vertex>::max())
        throw SchemaError("/num_vertices", "too many vertices");

    const auto &edges_doc = require(doc, "edges");
    if (!edges_doc.is_array())
        throw SchemaError("/edges", "expected an array");
    std::vector<Edge> edges;
    std::set<std::pair<Vertex, Vertex>> seen_edges;
    for (std::size_t i = 0; i < edges_doc.size(); ++i) {
        const auto where = "/edges/" + std::to_string(i);
        const auto &e = edges_doc[i];
        if (!e.is_array() || e.size() != 2)
            throw SchemaError(where, "expected [from, to]");
        const auto x = require_uint(e[0], where + "/0");
        const auto y = require_uint(e[1], where + "/1");
        if (x >= n || y >= n)
            throw SchemaError(where, "endpoint outside 0.." + std::to_string(n - 1));
        if (!seen_edges.emplace(x, y).second) {
            out.warnings.push_back(where + ": duplicate edge dropped");
            continue;
        }
        edges.emplace_back(static_cast<Vertex>(x), static_cast<Vertex>(y));
    }
    Digraph g(n, edges);

    std::vector<std::vector<Assignment>> forbidden(n);
    if (doc.contains("forbidden")) {
        const auto &fb = doc.at("forbidden");
        if (!fb.is_object())
            throw SchemaError("/forbidden", "expected an object keyed by vertex id");
        for (const auto &[key, tuples] : fb.items()) {
            const auto where = "/forbidden/" + key;
            std::size_t used = 0;
            unsigned long long id = 0;
            try {
                id = std::stoull(key, &used);
            }
            catch (const std::exception &) {
                used = 0;
            }
            if (used != key.size() || key.empty() || id >= n)
                throw SchemaError(where, "key is not a vertex id");
            const auto x = static_cast<Vertex>(id);
            const auto arity = g.var(x).size();
            if (!tuples.is_array())
                throw SchemaError(where, "expected a list of tuples");
            std::set<Assignment> distinct;
            for (std::size_t t = 0; t < tuples.size(); ++t) {
                const auto twhere = where + "/" + std::to_string(t);
                const auto &tuple = tuples[t];
                if (!tuple.is_array() || tuple.size() != arity)
                    throw SchemaError(twhere, "vertex " + key + " needs tuples of length " +
                                                  std::to_string(arity));
                Assignment a;
                for (std::size_t j = 0; j < tuple.size(); ++j) {
                    const auto c = require_uint(tuple[j], twhere + "/" + std::to_string(j));
                    if (c >= b)
                        throw SchemaError(twhere + "/" + std::to_string(j), "colour out of range");
                    a.push_back(static_cast<Colour>(c));
                }
                if (!distinct.insert(a).second) {
                    out.warnings.push_back(twhere + ": duplicate forbidden tuple of vertex " + key +
                                           " dropped");
                    continue;
                }
                forbidden[x].push_back(std::move(a));
            }
        }
    }
    try {
        out.problem = ColouringProblem(std::move(g), static_cast<Colour>(b), forbidden);
    }
    catch (const ProblemError &e) {
        throw SchemaError("/forbidden", e.what());
    }
    if (doc.contains("metadata"))
        out.metadata = doc.at("metadata");
    return out;
}

LoadedProblem read_problem(std::istream &in)
{
    Json doc;
    try {
        doc = Json::parse(in);
    }
    catch (const Json::parse_error &e) {
        throw SchemaError("byte " + std::to_string(e.byte), e.what());
    }
    return parse_problem(doc);
}

LoadedProblem load_problem(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return read_problem(in);
}

Json problem_to_json(const ColouringProblem &p, const Json &metadata)
{
    Json doc;
    doc["schema_version"] = problem_schema_version;
    doc["b"] = p.colours();
    doc["num_vertices"] = p.size();
    Json edges = Json::array();
    for (auto [x, y] : p.graph().edges())
        edges.push_back({x, y});
    doc["edges"] = std::move(edges);
    Json forbidden = Json::object();
    for (Vertex x = 0; x < p.size(); ++x)
        if (!p.forbidden(x).empty())
            forbidden[std::to_string(x)] = p.forbidden_tuples(x);
    doc["forbidden"] = std::move(forbidden);
    doc["metadata"] = metadata;
    return doc;
}

void save_problem(const ColouringProblem &p, const std::filesystem::path &path, const Json &metadata)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << problem_to_json(p, metadata).dump(1) << '\n';
}

LoadedProblem import_dimacs(std::istream &in)
{
    std::size_t num_vars = 0;
    std::size_t num_clauses = 0;
    bool header = false;
    std::vector<std::vector<long long>> clauses;
    std::vector<long long> current;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first == "c" || first == "%")
            continue;
        if (first == "p") {
            std::string fmt;
            if (!(ls >> fmt >> num_vars >> num_clauses) || fmt != "cnf")
                throw SchemaError("line " + std::to_string(line_no), "bad problem line");
            header = true;
            continue;
        }
        if (!header)
            throw SchemaError("line " + std::to_string(line_no), "clause before the p line");
        std::istringstream all(line);
        long long lit = 0;
        while (all >> lit) {
            if (lit == 0) {
                clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            if (static_cast<std::size_t>(std::llabs(lit)) > num_vars)
                throw SchemaError("line " + std::to_string(line_no),
                                  "literal " + std::to_string(lit) + " out of range");
            current.push_back(lit);
        }
        if (!all.eof())
            throw SchemaError("line " + std::to_string(line_no), "unparsable token");
    }
    if (!current.empty())
        clauses.push_back(std::move(current));
    if (!header)
        throw SchemaError("line 0", "missing p cnf line");

    LoadedProblem out;
    if (clauses.size() != num_clauses)
        out.warnings.push_back("header declares " + std::to_string(num_clauses) + " clauses, found " +
                               std::to_string(clauses.size()));
    const std::size_t n = num_vars + clauses.size();
    std::vector<Edge> edges;
    std::vector<std::vector<Assignment>> forbidden(n);
    for (std::size_t j = 0; j < clauses.size(); ++j) {
        const auto c = static_cast<Vertex>(num_vars + j);
        std::map<Vertex, Colour> falsifying; // variable → value making its literal false
        bool tautology = false;
        for (auto lit : clauses[j]) {
            const auto v = static_cast<Vertex>(std::llabs(lit) - 1);
            const Colour value = lit > 0 ? 0 : 1;
            auto [it, fresh] = falsifying.emplace(v, value);
            if (!fresh && it->second != value)
                tautology = true;
        }
        for (auto [v, value] : falsifying)
            edges.emplace_back(c, v);
        if (tautology || falsifying.empty())
            continue;
        Assignment tuple;
        for (auto [v, value] : falsifying)
            tuple.push_back(value);
        forbidden[c].push_back(std::move(tuple));
    }
    out.problem = ColouringProblem(Digraph(n, edges), 2, forbidden);
    out.metadata = {{"generator", "dimacs"}, {"variables", num_vars}, {"clauses", clauses.size()}};
    return out;
}

Json problem_summary(const ColouringProblem &p)
{
    Json s;
    s["n"] = p.size();
    s["Delta"] = p.rel_max_degree();
    s["d"] = p.graph().max_degree();
    s["margin"] = lll_margin(p);
    if (p.size() <= 4096) {
        Json cert = Json::array();
        for (std::size_t R : {1, 2}) {
            std::size_t worst = 0;
            for (Vertex x = 0; x < p.size(); ++x)
                worst = std::max(worst, ball_profile(p.graph(), x, 3 * R).back());
            const double eps = std::pow(static_cast<double>(worst), 1.0 / static_cast<double>(R)) - 1.0;
            cert.push_back({{"R", R}, {"eps", eps}, {"max_ball", worst}});
        }
        s["subexp"] = std::move(cert);
    }
    return s;
}

GeneratedProblem gen_torus_nae(std::size_t w, std::size_t h, Colour b)
{
    if (w < 3 || h < 3)
        throw std::invalid_argument("torus sides must be at least 3");
    if (b < 2)
        throw std::invalid_argument("colour count must be at least 2");
    const std::size_t n = w * h;
    std::vector<Edge> edges;
    auto id = [&](std::size_t x, std::size_t y) { return static_cast<Vertex>(y * w + x); };
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            const auto v = id(x, y);
            edges.emplace_back(v, v);
            edges.emplace_back(v, id((x + 1) % w, y));
            edges.emplace_back(v, id((x + w - 1) % w, y));
            edges.emplace_back(v, id(x, (y + 1) % h));
            edges.emplace_back(v, id(x, (y + h - 1) % h));
        }
    Digraph g(n, edges);
    std::vector<std::vector<Assignment>> forbidden(n);
    for (Vertex v = 0; v < n; ++v)
        for (Colour c = 0; c < b; ++c)
            forbidden[v].push_back(Assignment(g.var(v).size(), c));
    GeneratedProblem out{ColouringProblem(std::move(g), b, forbidden), Json::object()};
    out.metadata["generator"] = "torus_nae";
    out.metadata["parameters"] = {{"w", w}, {"h", h}, {"b", b}};
    out.metadata["summary"] = problem_summary(out.problem);
    return out;
}

GeneratedProblem gen_grid_ksat(std::size_t w, std::size_t h, std::size_t k, std::size_t clause_radius,
                               std::size_t clauses_per_cell, std::uint64_t seed, Colour b)
{
    if (k < 1 || clause_radius < 1)
        throw std::invalid_argument("need k >= 1 and clause_radius >= 1");
    if (b < 2)
        throw std::invalid_argument("colour count must be at least 2");
    const std::size_t side = 2 * clause_radius + 1;
    const std::size_t window = std::min(side, w) * std::min(side, h);
    if (window < k)
        throw std::invalid_argument("only " + std::to_string(window) + " variables within radius " +
                                    std::to_string(clause_radius) + ", need " + std::to_string(k));

    const std::size_t vars = w * h;
    const std::size_t n = vars + vars * clauses_per_cell;
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    std::vector<std::vector<Assignment>> forbidden(n);
    for (std::size_t cell = 0; cell < vars; ++cell) {
        const std::size_t cx = cell % w;
        const std::size_t cy = cell / w;
        // distinct torus cells within Chebyshev distance clause_radius, in id order
        std::set<Vertex> nearby_set;
        for (std::size_t dy = 0; dy < side; ++dy)
            for (std::size_t dx = 0; dx < side; ++dx) {
                const std::size_t x = (cx + w * side + dx - clause_radius) % w;
                const std::size_t y = (cy + h * side + dy - clause_radius) % h;
                nearby_set.insert(static_cast<Vertex>(y * w + x));
            }
        std::vector<Vertex> nearby(nearby_set.begin(), nearby_set.end());
        for (std::size_t c = 0; c < clauses_per_cell; ++c) {
            const auto clause = static_cast<Vertex>(vars + cell * clauses_per_cell + c);
            auto pool = nearby;
            for (std::size_t i = 0; i < k; ++i)
                std::swap(pool[i], pool[i + uniform_below(rng, pool.size() - i)]);
            for (std::size_t i = 0; i < k; ++i)
                edges.emplace_back(clause, pool[i]);
            Assignment tuple(k);
            for (auto &colour : tuple)
                colour = static_cast<Colour>(uniform_below(rng, b));
            forbidden[clause].push_back(std::move(tuple));
        }
    }
    GeneratedProblem out{ColouringProblem(Digraph(n, edges), b, forbidden), Json::object()};
    out.metadata["generator"] = "grid_ksat";
    out.metadata["parameters"] = {{"w", w},
                                  {"h", h},
                                  {"k", k},
                                  {"clause_radius", clause_radius},
                                  {"clauses_per_cell", clauses_per_cell},
                                  {"seed", seed},
                                  {"b", b}};
    out.metadata["summary"] = problem_summary(out.problem);
    return out;
}

Json colouring_to_json(const Colouring &f) { return Json{{"colouring", f}}; }

Colouring colouring_from_json(const Json &doc, std::size_t n)
{
    const auto &arr = doc.is_object() ? require(doc, "colouring") : doc;
    if (!arr.is_array() || arr.size() != n)
        throw SchemaError("/colouring", "expected " + std::to_string(n) + " colours");
    Colouring f;
    for (std::size_t i = 0; i < arr.size(); ++i)
        f.push_back(static_cast<Colour>(require_uint(arr[i], "/colouring/" + std::to_string(i))));
    return f;
}

Json trace_to_json(const RunTrace &trace, const SparsePartition &pi)
{
    Json doc;
    doc["status"] = trace.succeeded() ? "succeeded" : "budget_exhausted";
    doc["steps"] = trace.steps;
    doc["parts"] = pi.num_parts;
    Json rounds = Json::array();
    for (std::size_t j = 0; j < trace.recorded_rounds(); ++j) {
        const auto &s = trace.round_stats()[j];
        auto ib = trace.ib(j);
        rounds.push_back({{"bad", s.bad},
                          {"independent", std::vector<Vertex>(ib.begin(), ib.end())},
                          {"resampled", s.resampled},
                          {"reevaluations", s.reevaluations}});
    }
    doc["rounds"] = std::move(rounds);
    doc["h"] = trace.final_h();
    return doc;
}

void write_round_csv(std::ostream &out, const RunTrace &trace)
{
    out << "round,bad,independent,resampled,reevaluations\n";
    for (std::size_t j = 0; j < trace.round_stats().size(); ++j) {
        const auto &s = trace.round_stats()[j];
        out << j << ',' << s.bad << ',' << s.independent << ',' << s.resampled << ','
            << s.reevaluations << '\n';
    }
}

Json landscape_to_json(const FinalisedLandscape &l)
{
    const auto &f = l.forest();
    Json nodes = Json::array();
    for (std::size_t i = 0; i < f.size(); ++i) {
        Json node{{"vertex", f.nodes[i].vertex}, {"level", f.nodes[i].level}, {"viol", l.landscape.viol[i]}};
        node["parent"] = f.parent[i] ? Json(*f.parent[i]) : Json(nullptr);
        nodes.push_back(std::move(node));
    }
    return Json{{"nodes", std::move(nodes)}, {"fin", l.fin}};
}

void write_experiment_row(std::ostream &out, const ExperimentRecord &r)
{
    std::ostringstream row;
    row << r.instance << ',' << r.n << ',' << r.seed << ',' << r.parts << ',' << r.rounds << ',' << r.max_h
        << ',' << r.symbols << ',' << std::fixed << std::setprecision(3) << r.bits << ',' << r.wall_ms;
    out << row.str() << '\n';
}

} // namespace rforge
