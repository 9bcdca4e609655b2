#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "pathembed/embed_tree.hpp"
#include "pathembed/embed_ultra.hpp"
#include "pathembed/errors.hpp"
#include "pathembed/gst.hpp"
#include "pathembed/mts.hpp"
#include "pathembed/prob.hpp"
#include "pathembed/realize.hpp"
#include "pathembed/serialize.hpp"

namespace pathembed::cli {

namespace fs = std::filesystem;

namespace {

// Thrown by handlers for a failed invariant or falsified bound (exit 1).
struct Falsified {};

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream s;
    s << std::hex;
    s.width(16);
    s.fill('0');
    s << v;
    return s.str();
}

bool is_path_flag(const std::string& a) {
    return a == "-i" || a == "--input" || a == "-o" || a == "--output" || a == "--summary" || a == "--embedding" ||
           a == "--manifest";
}

bool is_output_flag(const std::string& a) {
    return a == "-o" || a == "--output" || a == "--summary";
}

// Shared state of one invocation: where results go and what the manifest records.
struct Run {
    Run(std::ostream& o, std::ostream& e, std::vector<std::string> a) : out(o), err(e), argv(std::move(a)) {}

    std::ostream& out;
    std::ostream& err;
    std::vector<std::string> argv;
    std::string output;
    json parameters = json::object();
    std::vector<std::uint64_t> seeds;
    json inputs = json::array();
    json outputs = json::array();
    bool manifest = true;

    void note_input(const std::string& path) {
        const std::string bytes = read_text_file(path);
        inputs.push_back({{"path", fs::absolute(path).lexically_normal().string()}, {"fnv1a64", hex64(fnv1a(bytes))}});
    }

    void write(const std::string& path, const std::string& bytes) {
        if (path.empty()) {
            out << bytes;
            return;
        }
        write_text_file(path, bytes);
        outputs.push_back({{"path", fs::absolute(path).lexically_normal().string()}, {"fnv1a64", hex64(fnv1a(bytes))}});
    }

    void emit(const std::string& bytes) { write(output, bytes); }
};

std::vector<std::string> absolute_argv(const std::vector<std::string>& args) {
    std::vector<std::string> out = args;
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        if (is_path_flag(out[i])) out[i + 1] = fs::absolute(out[i + 1]).lexically_normal().string();
    }
    return out;
}

json option_value(const CLI::Option* opt) {
    if (opt->get_type_size() == 0) return opt->count() > 0;
    const auto& res = opt->results();
    if (res.empty()) return opt->get_default_str();
    if (res.size() == 1) return res.front();
    return res;
}

void collect_parameters(const CLI::App* app, json& params) {
    for (const CLI::Option* opt : app->get_options()) {
        if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
        if (opt->count() == 0 && opt->get_default_str().empty()) continue;
        params[opt->get_lnames().front()] = option_value(opt);
    }
    for (const CLI::App* sub : app->get_subcommands()) {
        json& nested = params[sub->get_name()];
        nested = json::object();
        collect_parameters(sub, nested);
    }
}

void write_manifest(Run& run, double wall_ms) {
    if (!run.manifest) return;
    json m;
    m["tool"] = "pathembed";
    m["version"] = kVersion;
    m["command"] = absolute_argv(run.argv);
    m["parameters"] = run.parameters;
    m["seeds"] = run.seeds;
    m["inputs"] = run.inputs;
    m["outputs"] = run.outputs;
    m["wall_clock_ms"] = wall_ms;
    if (run.output.empty()) {
        run.err << dump(m);
    } else {
        write_text_file(run.output + ".manifest.json", dump(m));
    }
}

fs::path base_of(const std::string& path) {
    return fs::absolute(path).parent_path();
}

// Space references resolve relative to the referring file.
MetricSpace read_metric(Run& run, const std::string& path) {
    run.note_input(path);
    return load_metric(json(path), fs::current_path());
}

Space read_space(Run& run, const std::string& path) {
    run.note_input(path);
    return load_space(json(path), fs::current_path());
}

MultiEmbedding read_embedding(Run& run, const std::string& path) {
    run.note_input(path);
    return embedding_from_json(read_json_file(path), base_of(path));
}

json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (const Edge& e : g.edges) edges.push_back({e.u, e.v, e.w});
    return {{"n", g.n}, {"edges", std::move(edges)}};
}

json space_json(const MetricSpace& m, const std::optional<Graph>& g) {
    return g ? graph_to_json(*g) : metric_to_json(m);
}

json embedding_json(const MultiEmbedding& me) {
    return embedding_to_json(me, metric_to_json(me.source));
}

PointPath parse_path(const std::string& text, int n) {
    PointPath p;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        int x = 0;
        try {
            x = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw InputError("path: '" + item + "' is not a point id");
        }
        if (used != item.size() && item.find_first_not_of(' ', used) != std::string::npos) {
            throw InputError("path: '" + item + "' is not a point id");
        }
        if (x < 0 || x >= n) throw InputError("path: point " + std::to_string(x) + " out of range");
        p.push_back(x);
    }
    if (p.empty()) throw InputError("path: no points given");
    return p;
}

json rep_json(const RepPath& r) {
    return {{"seq", r.seq}, {"length", r.length}};
}

json solution_json(const SteinerSolution& s) {
    return solution_to_json(s);
}

json ultra_audit_json(const EmbeddingAudit& a) {
    json v = json::array();
    for (const auto& x : a.violations) {
        v.push_back({{"property", x.property}, {"detail", x.detail}, {"node", x.node}, {"a", x.a}, {"b", x.b}});
    }
    return {{"kind", "ultra"},
            {"ok", a.ok()},
            {"leaf_count", a.leaf_count},
            {"size_bound", a.size_bound},
            {"beta", a.beta},
            {"criterion", to_string(a.criterion)},
            {"internal_nodes", a.internal_nodes},
            {"exhaustive_leaf_pairs", a.exhaustive_leaf_pairs},
            {"violations", std::move(v)}};
}

json star_audit_json(const StarAudit& a) {
    return {{"kind", "star"},
            {"ok", a.ok()},
            {"node_count", a.node_count},
            {"path_count", a.path_count},
            {"walk_bound", a.walk_bound},
            {"size_bound", a.size_bound},
            {"exhaustive_pairs", a.exhaustive_pairs},
            {"pairs_checked", a.pairs_checked},
            {"violations", a.violations}};
}

// Embedding chosen by --embedding or built by --via.
struct EmbeddingChoice {
    std::string via = "ultra";
    int t = 1;
    int s = 0;
    std::string file;

    void add_to(CLI::App* app) {
        app->add_option("--via", via, "Target construction: ultra or star")
            ->check(CLI::IsMember({"ultra", "star"}))
            ->capture_default_str();
        app->add_option("--t", t, "Shell count for --via ultra")->capture_default_str();
        app->add_option("--s", s, "Path length for --via star");
        app->add_option("--embedding", file, "Precomputed embedding JSON over the same source");
    }

    MultiEmbedding build(Run& run, const MetricSpace& m, const std::optional<Graph>& g) const {
        if (!file.empty()) return read_embedding(run, file);
        if (via == "star") {
            if (s < 1) throw ParameterError("--via star needs --s >= 1");
            return g ? build_path_star(*g, s) : build_path_star(m, s);
        }
        return build_ultrametric_embedding(m, t);
    }
};

void cmd_gen(Run& run, const std::string& kind, int n, int h, int deg, const std::optional<std::uint64_t>& seed,
             const std::string& format) {
    GeneratorSpec spec;
    spec.kind = parse_generator_kind(kind);
    spec.n = n;
    spec.h = h;
    spec.deg = deg;
    const bool random = spec.kind == GeneratorKind::random_regular || spec.kind == GeneratorKind::random_metric;
    if (random && !seed) throw ParameterError("gen --kind " + kind + " requires --seed");
    spec.seed = seed.value_or(0);
    if (seed) run.seeds.push_back(*seed);
    const bool graph_out = format == "graph" || (format.empty() && fs::path(run.output).extension() == ".tsv");
    auto generated = generate(spec);
    if (graph_out) {
        auto* g = std::get_if<Graph>(&generated);
        if (!g) throw ParameterError("gen: --kind " + kind + " has no graph form");
        run.emit(graph_to_tsv(*g));
        return;
    }
    MetricSpace m = std::holds_alternative<Graph>(generated) ? from_graph(std::get<Graph>(generated))
                                                             : std::get<MetricSpace>(std::move(generated));
    run.emit(dump(metric_to_json(m)));
}

void cmd_audit(Run& run, const std::string& input, int t, std::size_t samples, std::uint64_t seed) {
    const MultiEmbedding me = read_embedding(run, input);
    json report;
    bool ok = true;
    if (me.is_star()) {
        const StarAudit a = audit_star(me, samples, seed);
        ok = a.ok();
        report = star_audit_json(a);
    } else {
        const int used_t = t > 0 ? t : me.params.t;
        if (used_t > 0) {
            const EmbeddingAudit a = audit_embedding(me, used_t);
            ok = a.ok();
            report = ultra_audit_json(a);
        } else {
            // No shell count recorded: the only embedding-level invariant is non-contraction.
            const auto bad = contracted_pairs(me);
            ok = bad.empty();
            json v = json::array();
            for (const auto& [a, b] : bad) v.push_back({{"property", "non_contractive"}, {"a", a}, {"b", b}});
            report = {{"kind", to_string(me.params.kind)},
                      {"ok", ok},
                      {"leaf_count", me.target_size()},
                      {"violations", std::move(v)}};
        }
    }
    run.emit(dump(report));
    if (!ok) throw Falsified{};
}

void cmd_realize(Run& run, const std::string& input, const std::string& path_text) {
    const MultiEmbedding me = read_embedding(run, input);
    const PointPath p = parse_path(path_text, me.source.size());
    const double len = path_length(me.source, p);
    const RepPath opt = optimal_rep_path(me, p);
    json report;
    report["path"] = p;
    report["length"] = len;
    report["optimal"] = rep_json(opt);
    bool ok = leq_tol(len, opt.length);
    if (me.is_ultra() && me.params.t > 0) {
        const RepPath r = realize_path(me, p);
        const double bound = realization_bound(me, p);
        report["realized"] = rep_json(r);
        report["bound"] = bound;
        ok = ok && leq_tol(r.length, bound) && leq_tol(opt.length, r.length);
    } else if (me.is_star()) {
        bool walk = true;
        for (std::size_t i = 1; i < p.size(); ++i) walk = walk && me.source(p[i - 1], p[i]) == 1.0;
        if (walk) {
            const StarRealization r = realize_in_star(me, p);
            report["realized"] = rep_json(r.path);
            report["chunks"] = r.chunks;
            report["bound"] = r.chunk_bound;
            report["ratio_bound"] = r.ratio_bound;
            ok = ok && leq_tol(r.path.length, r.chunk_bound) && leq_tol(opt.length, r.path.length);
            if (len >= me.star().s()) ok = ok && leq_tol(r.path.length, r.ratio_bound);
        } else {
            report["realized"] = nullptr;
        }
    } else {
        report["realized"] = nullptr;
    }
    report["ok"] = ok;
    run.emit(dump(report));
    if (!ok) throw Falsified{};
}

void cmd_distortion(Run& run, const std::string& input, int trials, std::uint64_t seed, const std::string& mode,
                    int steps, bool no_sweep, int jobs, const std::string& summary) {
    const MultiEmbedding me = read_embedding(run, input);
    run.seeds.push_back(seed);
    SamplerSpec spec;
    spec.mode = parse_walk_mode(mode);
    spec.steps = steps;
    spec.sweep = !no_sweep;
    const DistortionStats stats = distortion_stats(me, spec, trials, seed, jobs);
    run.emit(stats_csv(stats));
    if (!summary.empty()) run.write(summary, dump(stats_to_json(stats)));
    if (stats.violations > 0) throw Falsified{};
}

void cmd_lowerbound(Run& run, const std::string& input, int n, int t) {
    MultiEmbedding me = input.empty() ? build_ultrametric_embedding(generate_metric({GeneratorKind::path, n, 0, 3, 0}), t)
                                      : read_embedding(run, input);
    const LowerBoundReport r = lower_bound_check(me);
    json report = {{"n", r.n},
                   {"optimal", r.optimal},
                   {"required", r.required},
                   {"implied_distortion", r.implied_distortion},
                   {"holds", r.holds},
                   {"path", rep_json(r.path)}};
    run.emit(dump(report));
    if (!r.holds) throw Falsified{};
}

GstInstance read_gst(Run& run, const std::string& input) {
    run.note_input(input);
    return gst_from_json(read_json_file(input), base_of(input));
}

void cmd_gst_reduce(Run& run, const std::string& input, const EmbeddingChoice& choice) {
    const GstInstance inst = read_gst(run, input);
    const MultiEmbedding me = choice.build(run, inst.metric, inst.graph);
    const ReducedGst r = reduce_gst(me, inst);
    json j = gst_to_json(r.instance, space_json(r.instance.metric, r.instance.graph));
    j["vertex_point"] = r.vertex_point;
    j["vertex_node"] = r.vertex_node;
    run.emit(dump(j));
}

void cmd_gst_solve(Run& run, const std::string& input, const EmbeddingChoice& choice, bool oracle, int budget) {
    const GstInstance inst = read_gst(run, input);
    const MultiEmbedding me = choice.build(run, inst.metric, inst.graph);
    const GstPipelineReport r = run_gst_pipeline(me, inst, oracle, budget);
    json j;
    j["target_vertices"] = r.target_vertices;
    j["target_group_sizes"] = r.target_group_sizes;
    j["target"] = solution_json(r.target);
    j["projected"] = solution_json(r.projected);
    j["alpha_bound"] = r.alpha_bound;
    j["bound"] = r.bound;
    if (r.has_oracle) {
        j["oracle"] = solution_json(r.oracle);
        j["ratio"] = std::isinf(r.ratio) ? json("inf") : json(r.ratio);
    }
    j["feasible"] = r.feasible;
    j["holds"] = r.holds;
    run.emit(dump(j));
    if (!r.holds) throw Falsified{};
}

void cmd_gst_oracle(Run& run, const std::string& input, std::size_t budget) {
    const GstInstance inst = read_gst(run, input);
    run.emit(dump(solution_json(exact_oracle(inst, budget))));
}

void cmd_mts_run(Run& run, const std::string& input, const EmbeddingChoice& choice) {
    run.note_input(input);
    const json j = read_json_file(input);
    const MtsInstance inst = mts_from_json(j, base_of(input));
    const MultiEmbedding me = choice.build(run, inst.space, std::nullopt);
    const MtsReport r = run_experiment(me, inst);
    json out;
    out["source_opt"] = cost_to_json(r.source_opt);
    out["target_opt"] = cost_to_json(r.target_opt);
    out["target_online"] = cost_to_json(r.target_online);
    out["projected_online"] = cost_to_json(r.projected_online);
    out["alpha_bound"] = r.alpha_bound;
    out["opt_margin"] = r.source_opt >= kMtsForbidden ? json(nullptr) : json(r.opt_margin);
    out["online_margin"] = r.target_online >= kMtsForbidden ? json(nullptr) : json(r.online_margin);
    out["empirical_ratio"] = cost_to_json(r.empirical_ratio);
    out["holds"] = r.holds;
    out["projected_states"] = r.projected_states;
    run.emit(dump(out));
    if (!r.holds) throw Falsified{};
}

json sample_json(const MetricSpace& m, const EmbeddingSample& s) {
    json trees = json::array();
    for (const auto& t : s.trees) trees.push_back(tree_to_json(t));
    return {{"metric_ref", metric_to_json(m)}, {"seeds", s.seeds}, {"trees", std::move(trees)}};
}

EmbeddingSample sample_from_json(const json& j, int n) {
    EmbeddingSample s;
    if (!j.contains("trees") || !j.contains("seeds")) throw InputError("sample: missing 'trees' or 'seeds'");
    for (const auto& t : j.at("trees")) {
        s.trees.push_back(tree_from_json(t));
        if (s.trees.back().source_n() != n) throw InputError("sample: tree over a different source");
    }
    s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    return s;
}

void cmd_embed(Run& run, const std::string& kind, const std::string& input, int t, int s, int samples,
               const std::optional<std::uint64_t>& seed, int jobs, std::size_t budget) {
    if (kind == "ultra") {
        const MetricSpace m = read_metric(run, input);
        UltraBuildOptions opt;
        opt.leaf_budget = budget;
        run.emit(dump(embedding_json(build_ultrametric_embedding(m, t, opt))));
    } else if (kind == "star") {
        Space sp = read_space(run, input);
        StarBuildOptions opt;
        opt.node_budget = budget;
        MultiEmbedding me = std::holds_alternative<Graph>(sp) ? build_path_star(std::get<Graph>(sp), s, opt)
                                                              : build_path_star(std::get<MetricSpace>(sp), s, opt);
        run.emit(dump(embedding_json(me)));
    } else {
        if (!seed) throw ParameterError("embed prob requires --seed");
        run.seeds.push_back(*seed);
        const MetricSpace m = read_metric(run, input);
        run.emit(dump(embedding_json(union_under_root(m, sample_embeddings(m, samples, *seed, jobs)))));
    }
}

int cmd_rerun(Run& run, const std::string& manifest_path, const std::string& out_dir);

int dispatch(Run& run, const std::vector<std::string>& args) {
    CLI::App app{"Path-distortion multi-embeddings of finite metric spaces", "pathembed"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough(false);

    std::string input, output;
    auto add_io = [&](CLI::App* sub, bool need_input = true) {
        auto* in = sub->add_option("-i,--input", input, "Input file");
        if (need_input) in->required();
        sub->add_option("-o,--output", output, "Output file (stdout when absent)");
    };
    std::optional<std::uint64_t> seed;
    int jobs = 1;

    auto* gen = app.add_subcommand("gen", "Generate a metric space or graph");
    std::string kind, format;
    int n = 0, h = 0, deg = 3;
    gen->add_option("--kind", kind, "path, cycle, hypercube, random_regular or random_metric")->required();
    gen->add_option("--n", n, "Point count");
    gen->add_option("--h", h, "Hypercube dimension");
    gen->add_option("--deg", deg, "Degree of random_regular")->capture_default_str();
    gen->add_option("--seed", seed, "Seed for random kinds");
    gen->add_option("--format", format, "metric or graph (default: graph for .tsv outputs)")
        ->check(CLI::IsMember({"metric", "graph"}));
    gen->add_option("-o,--output", output, "Output file (stdout when absent)");

    auto* embed = app.add_subcommand("embed", "Build a multi-embedding");
    embed->require_subcommand(1);
    int t = 1, s = 0, samples = 8;
    std::size_t budget = 0;
    std::vector<CLI::App*> embed_kinds;
    for (const char* k : {"ultra", "star", "prob"}) {
        auto* sub = embed->add_subcommand(k, std::string("Embed into ") + k + " target");
        add_io(sub);
        embed_kinds.push_back(sub);
    }
    embed_kinds[0]->add_option("--t", t, "Shell count")->required();
    embed_kinds[0]->add_option("--leaf-budget", budget, "Maximum leaf count");
    embed_kinds[1]->add_option("--s", s, "Walk length")->required();
    embed_kinds[1]->add_option("--node-budget", budget, "Maximum node count");
    embed_kinds[2]->add_option("--samples", samples, "Number of sampled trees")->capture_default_str();
    embed_kinds[2]->add_option("--seed", seed, "Sampling seed")->required();
    embed_kinds[2]->add_option("--jobs", jobs, "Worker threads")->capture_default_str();

    auto* audit = app.add_subcommand("audit", "Audit an embedding");
    int audit_t = 0;
    std::size_t audit_samples = 200000;
    std::uint64_t audit_seed = 0;
    add_io(audit);
    audit->add_option("--t", audit_t, "Shell count to audit against (default: recorded)");
    audit->add_option("--samples", audit_samples, "Sampled pairs for large star targets")->capture_default_str();
    audit->add_option("--seed", audit_seed, "Pair-sampling seed for large star targets")->capture_default_str();

    auto* realize = app.add_subcommand("realize", "Realize one source path");
    std::string path_text;
    add_io(realize);
    realize->add_option("--path", path_text, "Comma-separated point ids")->required();

    auto* distortion = app.add_subcommand("distortion", "Per-trial path distortion table (CSV)");
    int trials = 100, steps = 16;
    std::string mode = "local", summary;
    bool no_sweep = false;
    add_io(distortion);
    distortion->add_option("--trials", trials, "Random walks")->capture_default_str();
    distortion->add_option("--seed", seed, "Walk seed")->required();
    distortion->add_option("--mode", mode, "local or uniform")->check(CLI::IsMember({"local", "uniform"}))
        ->capture_default_str();
    distortion->add_option("--steps", steps, "Moves per walk")->capture_default_str();
    distortion->add_flag("--no-sweep", no_sweep, "Skip the deterministic sweep path");
    distortion->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
    distortion->add_option("--summary", summary, "Summary JSON file");

    auto* lowerbound = app.add_subcommand("lowerbound", "Optimal realization of the full path sweep");
    int lb_n = 0;
    add_io(lowerbound, false);
    lowerbound->add_option("--n", lb_n, "Build the path of n points (without -i)");
    lowerbound->add_option("--t", t, "Shell count (without -i)")->capture_default_str();

    auto* gst = app.add_subcommand("gst", "Group Steiner tree reduction");
    gst->require_subcommand(1);
    EmbeddingChoice choice;
    bool with_oracle = false;
    int tree_budget = 14;
    std::size_t oracle_budget = 100000;
    auto* gst_reduce = gst->add_subcommand("reduce", "Target tree instance");
    add_io(gst_reduce);
    choice.add_to(gst_reduce);
    auto* gst_solve = gst->add_subcommand("solve", "Solve through the target tree");
    add_io(gst_solve);
    EmbeddingChoice solve_choice;
    solve_choice.add_to(gst_solve);
    gst_solve->add_flag("--oracle", with_oracle, "Compare against the exact oracle");
    gst_solve->add_option("--budget", tree_budget, "Maximum group count for the tree DP")->capture_default_str();
    auto* gst_oracle = gst->add_subcommand("oracle", "Exact solution by enumeration");
    add_io(gst_oracle);
    gst_oracle->add_option("--budget", oracle_budget, "Maximum representative choices")->capture_default_str();

    auto* mts = app.add_subcommand("mts", "Metrical task systems reduction");
    mts->require_subcommand(1);
    auto* mts_run = mts->add_subcommand("run", "Offline and online costs through the target");
    add_io(mts_run);
    EmbeddingChoice mts_choice;
    mts_choice.add_to(mts_run);

    auto* prob = app.add_subcommand("prob", "Probabilistic tree embeddings");
    prob->require_subcommand(1);
    auto* prob_sample = prob->add_subcommand("sample", "Sample trees");
    add_io(prob_sample);
    prob_sample->add_option("--samples", samples, "Number of trees")->capture_default_str();
    prob_sample->add_option("--seed", seed, "Sampling seed")->required();
    prob_sample->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
    auto* prob_union = prob->add_subcommand("union", "Hang sampled trees under one root");
    add_io(prob_union);

    auto* rerun = app.add_subcommand("rerun", "Replay a manifest and compare outputs byte for byte");
    std::string out_dir;
    rerun->add_option("-i,--input,--manifest", input, "Manifest file")->required();
    rerun->add_option("--out-dir", out_dir, "Directory for replayed outputs (default: next to the originals)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, run.out, run.err);
        return code == 0 ? 0 : 2;
    }

    run.output = output;
    collect_parameters(&app, run.parameters);
    if (rerun->parsed()) {
        run.manifest = false;
        return cmd_rerun(run, input, out_dir);
    }
    const auto start = std::chrono::steady_clock::now();
    int code = 0;
    try {
        if (gen->parsed()) {
            cmd_gen(run, kind, n, h, deg, seed, format);
        } else if (embed->parsed()) {
            const std::string k = embed->get_subcommands().front()->get_name();
            if (budget == 0) budget = k == "ultra" ? UltraBuildOptions{}.leaf_budget : StarBuildOptions{}.node_budget;
            cmd_embed(run, k, input, t, s, samples, seed, jobs, budget);
        } else if (audit->parsed()) {
            cmd_audit(run, input, audit_t, audit_samples, audit_seed);
        } else if (realize->parsed()) {
            cmd_realize(run, input, path_text);
        } else if (distortion->parsed()) {
            cmd_distortion(run, input, trials, *seed, mode, steps, no_sweep, jobs, summary);
        } else if (lowerbound->parsed()) {
            if (input.empty() && lb_n < 1) throw ParameterError("lowerbound needs -i or --n");
            cmd_lowerbound(run, input, lb_n, t);
        } else if (gst_reduce->parsed()) {
            cmd_gst_reduce(run, input, choice);
        } else if (gst_solve->parsed()) {
            cmd_gst_solve(run, input, solve_choice, with_oracle, tree_budget);
        } else if (gst_oracle->parsed()) {
            cmd_gst_oracle(run, input, oracle_budget);
        } else if (mts_run->parsed()) {
            cmd_mts_run(run, input, mts_choice);
        } else if (prob_sample->parsed()) {
            run.seeds.push_back(*seed);
            const MetricSpace m = read_metric(run, input);
            run.emit(dump(sample_json(m, sample_embeddings(m, samples, *seed, jobs))));
        } else if (prob_union->parsed()) {
            run.note_input(input);
            const json j = read_json_file(input);
            if (!j.contains("metric_ref")) throw InputError("sample: missing field 'metric_ref'");
            const MetricSpace m = load_metric(j.at("metric_ref"), base_of(input));
            run.emit(dump(embedding_json(union_under_root(m, sample_from_json(j, m.size())))));
        }
    } catch (const Falsified&) {
        code = 1;
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    write_manifest(run, ms);
    return code;
}

int cmd_rerun(Run& run, const std::string& manifest_path, const std::string& out_dir) {
    const json m = read_json_file(manifest_path);
    if (!m.contains("command") || !m.at("command").is_array()) throw InputError("manifest: missing 'command'");
    auto args = m.at("command").get<std::vector<std::string>>();
    if (!args.empty() && args.front() == "rerun") throw InputError("manifest: refuses to replay a rerun");
    // Replayed outputs go to fresh paths; originals are compared afterwards.
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (!is_output_flag(args[i])) continue;
        const fs::path original = args[i + 1];
        fs::path replay = out_dir.empty() ? fs::path(original.string() + ".rerun") : fs::path(out_dir) / original.filename();
        if (!out_dir.empty()) fs::create_directories(out_dir);
        pairs.emplace_back(original.string(), replay.string());
        args[i + 1] = replay.string();
    }
    bool inputs_unchanged = true;
    if (m.contains("inputs")) {
        for (const auto& in : m.at("inputs")) {
            const std::string path = in.at("path").get<std::string>();
            const std::string want = in.at("fnv1a64").get<std::string>();
            if (!fs::exists(path) || hex64(fnv1a(read_text_file(path))) != want) inputs_unchanged = false;
        }
    }
    std::ostringstream sub_out, sub_err;
    const int code = cli::run(args, sub_out, sub_err);
    json report;
    report["manifest"] = fs::absolute(manifest_path).lexically_normal().string();
    report["exit_code"] = code;
    report["inputs_unchanged"] = inputs_unchanged;
    json list = json::array();
    bool identical = true;
    for (const auto& [original, replay] : pairs) {
        const bool exists = fs::exists(original) && fs::exists(replay);
        const bool same = exists && read_text_file(original) == read_text_file(replay);
        identical = identical && same;
        list.push_back({{"original", original}, {"replay", replay}, {"identical", same}});
    }
    report["outputs"] = std::move(list);
    if (pairs.empty()) report["stdout"] = sub_out.str();
    report["identical"] = identical;
    run.out << dump(report);
    if (code == 2) return 2;
    return identical ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Run state(out, err, args);
    try {
        return dispatch(state, args);
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const LookupError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        err << "error: malformed input: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return 1;
    }
}

int run(const std::vector<std::string>& args) {
    return run(args, std::cout, std::cerr);
}

}  // namespace pathembed::cli
