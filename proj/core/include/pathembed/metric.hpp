#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pathembed {

// Relative tolerance used for every bound comparison on real-valued sums.
inline constexpr double kRelTol = 1e-9;

// a <= b up to relative tolerance kRelTol.
bool leq_tol(double a, double b);

/*
 * Finite metric space on points 0..n-1 backed by a dense row-major distance
 * matrix. Immutable after construction; the constructor does not validate,
 * use validate() for a full diagnostic.
 */
class MetricSpace {
public:
    MetricSpace() = default;
    MetricSpace(int n, std::vector<double> distances, std::vector<std::string> labels = {});

    int size() const { return n_; }
    double operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
    std::span<const double> row(int i) const {
        return {d_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
    }
    const std::vector<double>& matrix() const { return d_; }
    const std::vector<std::string>& labels() const { return labels_; }

    double diameter() const;
    double min_positive_distance() const;
    // diameter / minimum nonzero distance; 1 for spaces with fewer than 2 points.
    double aspect_ratio() const;
    bool integral() const;

    // Metric restricted to `points`, renumbered 0..k-1 in the given order.
    MetricSpace subspace(std::span<const int> points) const;

    bool operator==(const MetricSpace& other) const { return n_ == other.n_ && d_ == other.d_; }

private:
    int n_ = 0;
    std::vector<double> d_;
    std::vector<std::string> labels_;
};

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

struct Graph {
    int n = 0;
    std::vector<Edge> edges;
    bool unweighted = true;

    std::vector<std::vector<int>> adjacency() const;
    int max_degree() const;
    bool connected() const;
};

enum class GeneratorKind { path, cycle, hypercube, random_regular, random_metric };

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::path;
    int n = 0;    // point count (path, cycle, random_regular, random_metric)
    int h = 0;    // hypercube dimension
    int deg = 3;  // random_regular degree
    std::uint64_t seed = 0;
};

GeneratorKind parse_generator_kind(const std::string& name);
std::string to_string(GeneratorKind kind);

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph hypercube_graph(int h);
Graph random_regular_graph(int n, int deg, std::uint64_t seed);
MetricSpace random_metric(int n, std::uint64_t seed);

std::variant<Graph, MetricSpace> generate(const GeneratorSpec& spec);
// generate() followed by from_graph() for graph kinds.
MetricSpace generate_metric(const GeneratorSpec& spec);

// All-pairs shortest-path metric of a connected graph.
MetricSpace from_graph(const Graph& g);

struct DiameterAnchor {
    int x = 0;
    int xbar = 0;
    double delta = 0.0;
};

// Diameter pair with the anchor endpoint x whose open Delta/4 ball holds at
// most half the points; smaller index when both endpoints qualify.
DiameterAnchor diameter_anchor(const MetricSpace& m);
// Same, restricted to the sorted point subset `points` (ids of m).
DiameterAnchor diameter_anchor(const MetricSpace& m, std::span<const int> points);

struct MetricViolation {
    enum class Kind { zero_diagonal, symmetry, positivity, triangle, non_finite };
    Kind kind;
    int i = 0;
    int j = 0;
    int k = -1;
};

std::string to_string(MetricViolation::Kind kind);

struct MetricReport {
    std::vector<MetricViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Lists every violated metric invariant; `limit` caps the number recorded.
MetricReport validate(const MetricSpace& m, std::size_t limit = 1000);

// Unit-distance adjacency of a metric (the graph whose shortest-path metric it
// is, when it came from an unweighted graph).
Graph unit_distance_graph(const MetricSpace& m);

}  // namespace pathembed
