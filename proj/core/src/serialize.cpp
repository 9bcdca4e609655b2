#include "pathembed/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pathembed/errors.hpp"

namespace pathembed {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("write failed for " + path.string());
}

json read_json_file(const fs::path& path) {
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

namespace {

template <typename T>
T get(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError(std::string("bad field '") + key + "': " + e.what());
    }
}

double real_from_json(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "Infinity" || s == "+inf") return std::numeric_limits<double>::infinity();
    }
    throw InputError("expected a number or \"inf\"");
}

}  // namespace

json metric_to_json(const MetricSpace& m) {
    json j;
    j["n"] = m.size();
    j["d"] = m.matrix();
    if (!m.labels().empty()) j["labels"] = m.labels();
    return j;
}

MetricSpace metric_from_json(const json& j) {
    const int n = get<int>(j, "n");
    if (n < 0) throw InputError("metric: negative n");
    auto d = get<std::vector<double>>(j, "d");
    if (d.size() != static_cast<std::size_t>(n) * n) throw InputError("metric: d must have n*n entries");
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = get<std::vector<std::string>>(j, "labels");
    if (!labels.empty() && static_cast<int>(labels.size()) != n) throw InputError("metric: labels must have n entries");
    return MetricSpace(n, std::move(d), std::move(labels));
}

std::string graph_to_tsv(const Graph& g) {
    std::ostringstream out;
    out.precision(17);
    out << "# n=" << g.n << "\n";
    for (const Edge& e : g.edges) out << e.u << '\t' << e.v << '\t' << e.w << "\n";
    return out.str();
}

Graph graph_from_tsv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Graph g;
    g.n = -1;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("n=");
            if (pos != std::string::npos && g.n < 0) {
                try {
                    g.n = std::stoi(line.substr(pos + 2));
                } catch (const std::exception&) {
                    throw InputError("graph: bad header on line " + std::to_string(lineno));
                }
            }
            continue;
        }
        std::istringstream row(line);
        Edge e;
        if (!(row >> e.u >> e.v)) throw InputError("graph: bad edge on line " + std::to_string(lineno));
        if (!(row >> e.w)) e.w = 1.0;
        if (e.w != 1.0) g.unweighted = false;
        g.edges.push_back(e);
    }
    if (g.n < 0) throw InputError("graph: missing '# n=' header");
    for (const Edge& e : g.edges) {
        if (e.u < 0 || e.v < 0 || e.u >= g.n || e.v >= g.n) throw InputError("graph: edge endpoint out of range");
    }
    return g;
}

Space load_space(const json& ref, const fs::path& base) {
    if (ref.is_string()) {
        fs::path p = ref.get<std::string>();
        if (p.is_relative()) p = base / p;
        if (p.extension() == ".tsv") return graph_from_tsv(read_text_file(p));
        return load_space(read_json_file(p), p.parent_path());
    }
    if (ref.is_object() && ref.contains("edges")) {
        Graph g;
        g.n = get<int>(ref, "n");
        for (const auto& e : ref.at("edges")) {
            if (!e.is_array() || e.size() < 2) throw InputError("graph: edges must be [u, v, w] triples");
            Edge edge{e[0].get<int>(), e[1].get<int>(), e.size() > 2 ? e[2].get<double>() : 1.0};
            if (edge.w != 1.0) g.unweighted = false;
            g.edges.push_back(edge);
        }
        return g;
    }
    if (ref.is_object()) return metric_from_json(ref);
    throw InputError("space reference must be a path or an object");
}

MetricSpace load_metric(const json& ref, const fs::path& base) {
    Space s = load_space(ref, base);
    if (auto* g = std::get_if<Graph>(&s)) return from_graph(*g);
    return std::get<MetricSpace>(std::move(s));
}

json tree_to_json(const UltraTree& t) {
    json j;
    j["k"] = t.k();
    j["source_n"] = t.source_n();
    if (t.empty()) {
        j["root"] = nullptr;
        return j;
    }
    // Iterative build to keep deep trees off the call stack.
    std::vector<json> built(t.size());
    for (NodeId u = t.size() - 1; u >= 0; --u) {
        json node;
        node["label"] = t.label(u);
        if (t.is_leaf(u)) {
            node["point"] = t.point(u);
        } else {
            json ch = json::array();
            for (NodeId c : t.children(u)) ch.push_back(std::move(built[c]));
            node["children"] = std::move(ch);
        }
        built[u] = std::move(node);
    }
    j["root"] = std::move(built[0]);
    return j;
}

UltraTree tree_from_json(const json& j) {
    const double k = j.contains("k") ? get<double>(j, "k") : 1.0;
    const int source_n = get<int>(j, "source_n");
    UltraTree t(k, source_n);
    if (!j.contains("root") || j.at("root").is_null()) return t;
    std::vector<std::pair<const json*, NodeId>> stack{{&j.at("root"), kNoNode}};
    while (!stack.empty()) {
        const auto [node, parent] = stack.back();
        stack.pop_back();
        const double label = get<double>(*node, "label");
        if (node->contains("children") && !node->at("children").empty()) {
            const NodeId id = t.add_node(label, parent);
            const auto& ch = node->at("children");
            for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back({&*it, id});
        } else {
            const int point = get<int>(*node, "point");
            if (point < 0 || point >= source_n) throw InputError("tree: leaf point out of range");
            t.add_node(label, parent, point);
        }
    }
    return t;
}

json star_to_json(const StarTree& t) {
    json j;
    j["delta"] = t.delta();
    j["s"] = t.s();
    j["paths"] = t.paths();
    return j;
}

StarTree star_from_json(const json& j, int source_n) {
    return StarTree(get<double>(j, "delta"), get<int>(j, "s"), get<std::vector<std::vector<int>>>(j, "paths"),
                    source_n);
}

namespace {

json real_or_null(double v) {
    return std::isnan(v) ? json(nullptr) : json(v);
}

}  // namespace

json embedding_to_json(const MultiEmbedding& me, const json& metric_ref) {
    json j;
    j["kind"] = to_string(me.params.kind);
    j["metric_ref"] = metric_ref;
    j["t"] = me.params.t;
    j["beta"] = me.params.beta;
    j["criterion"] = to_string(me.params.criterion);
    if (me.params.criterion_fallbacks > 0) j["criterion_fallbacks"] = me.params.criterion_fallbacks;
    if (me.is_star()) {
        j["s"] = me.star().s();
        j["tree"] = star_to_json(me.star());
    } else {
        j["tree"] = tree_to_json(me.ultra());
    }
    j["fibers"] = me.fibers;
    return j;
}

MultiEmbedding embedding_from_json(const json& j, const fs::path& base) {
    if (!j.contains("metric_ref")) throw InputError("embedding: missing field 'metric_ref'");
    MetricSpace source = load_metric(j.at("metric_ref"), base);
    EmbeddingParams params;
    params.kind = j.contains("kind") ? parse_embedding_kind(get<std::string>(j, "kind")) : EmbeddingKind::ultra;
    params.t = j.contains("t") ? get<int>(j, "t") : 0;
    params.beta = j.contains("beta") ? get<double>(j, "beta") : 0.0;
    params.criterion = j.contains("criterion") ? parse_criterion(get<std::string>(j, "criterion")) : Criterion::none;
    if (j.contains("criterion_fallbacks")) params.criterion_fallbacks = get<int>(j, "criterion_fallbacks");
    if (!j.contains("tree")) throw InputError("embedding: missing field 'tree'");
    MultiEmbedding me = params.kind == EmbeddingKind::star
                            ? make_embedding(source, star_from_json(j.at("tree"), source.size()), params)
                            : make_embedding(source, tree_from_json(j.at("tree")), params);
    if (j.contains("fibers")) {
        const auto fibers = get<std::vector<std::vector<NodeId>>>(j, "fibers");
        if (fibers != me.fibers) throw InputError("embedding: stored fibers disagree with the tree");
    }
    return me;
}

json stats_to_json(const DistortionStats& s) {
    json j;
    j["trials"] = s.trials;
    j["bound"] = s.bound;
    j["max_ratio_realized"] = real_or_null(s.max_ratio_realized);
    j["max_ratio_optimal"] = s.max_ratio_optimal;
    j["mean_ratio"] = s.mean_ratio;
    j["violations"] = s.violations;
    return j;
}

GstInstance gst_from_json(const json& j, const fs::path& base) {
    if (!j.contains("space")) throw InputError("gst: missing field 'space'");
    Space space = load_space(j.at("space"), base);
    auto groups = get<std::vector<std::vector<int>>>(j, "groups");
    if (auto* g = std::get_if<Graph>(&space)) return make_gst_instance(std::move(*g), std::move(groups));
    return make_gst_instance(std::get<MetricSpace>(std::move(space)), std::move(groups));
}

json gst_to_json(const GstInstance& inst, const json& space_ref) {
    json j;
    j["space"] = space_ref;
    j["groups"] = inst.groups;
    return j;
}

json solution_to_json(const SteinerSolution& s) {
    json j;
    j["vertices"] = s.vertices;
    json edges = json::array();
    for (const auto& [u, v] : s.edges) edges.push_back({u, v});
    j["edges"] = std::move(edges);
    j["cost"] = s.cost;
    return j;
}

SteinerSolution solution_from_json(const json& j) {
    SteinerSolution s;
    s.vertices = get<std::vector<int>>(j, "vertices");
    for (const auto& e : j.at("edges")) s.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    s.cost = get<double>(j, "cost");
    return s;
}

json cost_to_json(double c) {
    if (c >= kMtsForbidden) return "inf";
    return c;
}

MtsInstance mts_from_json(const json& j, const fs::path& base) {
    if (!j.contains("space")) throw InputError("mts: missing field 'space'");
    MetricSpace space = load_metric(j.at("space"), base);
    const int start = j.contains("start") ? get<int>(j, "start") : 0;
    std::vector<std::vector<double>> tasks;
    if (!j.contains("tasks") || !j.at("tasks").is_array()) throw InputError("mts: missing field 'tasks'");
    for (const auto& t : j.at("tasks")) {
        std::vector<double> row;
        for (const auto& c : t) row.push_back(real_from_json(c));
        tasks.push_back(std::move(row));
    }
    return make_mts_instance(std::move(space), std::move(tasks), start);
}

json mts_to_json(const MtsInstance& inst, const json& space_ref) {
    json j;
    j["space"] = space_ref;
    j["start"] = inst.start;
    json tasks = json::array();
    for (const auto& t : inst.tasks) {
        json row = json::array();
        for (double c : t) row.push_back(cost_to_json(c));
        tasks.push_back(std::move(row));
    }
    j["tasks"] = std::move(tasks);
    return j;
}

}  // namespace pathembed
