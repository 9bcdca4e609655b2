#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "pathembed/embedding.hpp"
#include "pathembed/gst.hpp"
#include "pathembed/metric.hpp"
#include "pathembed/mts.hpp"
#include "pathembed/realize.hpp"

namespace pathembed {

using json = nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
json read_json_file(const std::filesystem::path& path);
// Two-space indented dump with a trailing newline.
std::string dump(const json& j);

// {"n": int, "d": [row-major], "labels": [..]?}
json metric_to_json(const MetricSpace& m);
MetricSpace metric_from_json(const json& j);

// "# n=<int>" header then "u\tv\tw" lines.
std::string graph_to_tsv(const Graph& g);
Graph graph_from_tsv(const std::string& text);

using Space = std::variant<MetricSpace, Graph>;

// A space reference is a file path (relative to `base`; .tsv = graph) or an
// inline metric object {"n","d"} / graph object {"n","edges":[[u,v,w]..]}.
Space load_space(const json& ref, const std::filesystem::path& base);
MetricSpace load_metric(const json& ref, const std::filesystem::path& base);

// {"k", "source_n", "root": nested {"label","children"} / {"label": 0, "point"}}
json tree_to_json(const UltraTree& t);
UltraTree tree_from_json(const json& j);

// {"delta", "s", "paths"}
json star_to_json(const StarTree& t);
StarTree star_from_json(const json& j, int source_n);

json embedding_to_json(const MultiEmbedding& me, const json& metric_ref);
MultiEmbedding embedding_from_json(const json& j, const std::filesystem::path& base);

json stats_to_json(const DistortionStats& s);

GstInstance gst_from_json(const json& j, const std::filesystem::path& base);
json gst_to_json(const GstInstance& inst, const json& space_ref);
json solution_to_json(const SteinerSolution& s);
SteinerSolution solution_from_json(const json& j);

// Tasks accept "inf" as a cost literal; infinite costs are written back as "inf".
MtsInstance mts_from_json(const json& j, const std::filesystem::path& base);
json mts_to_json(const MtsInstance& inst, const json& space_ref);
json cost_to_json(double c);

}  // namespace pathembed
