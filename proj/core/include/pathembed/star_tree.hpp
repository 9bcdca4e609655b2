#pragma once

#include <vector>

#include "pathembed/ultrametric.hpp"

namespace pathembed {

/*
 * Star of paths: a root joined by an edge of weight delta/2 to the head of
 * every path; path nodes are chained by unit edges. Path nodes map to source
 * points, the root maps to nothing.
 *
 * Node ids: root = 0, then the nodes of path 0 head first, then path 1, ...
 */
class StarTree {
public:
    StarTree() = default;
    StarTree(double delta, int s, std::vector<std::vector<int>> paths, int source_n);

    double delta() const { return delta_; }
    int s() const { return s_; }
    int source_n() const { return source_n_; }
    const std::vector<std::vector<int>>& paths() const { return paths_; }
    int path_count() const { return static_cast<int>(paths_.size()); }

    int node_count() const { return static_cast<int>(path_of_.size()); }
    NodeId root() const { return 0; }
    NodeId node(int path, int position) const { return offset_.at(path) + position; }
    // path index of a node, -1 for the root
    int path_of(NodeId u) const { return path_of_.at(u); }
    int position_of(NodeId u) const { return u == 0 ? -1 : u - offset_[path_of_[u]]; }
    int point(NodeId u) const;

    // Tree metric over all nodes including the root.
    double distance(NodeId a, NodeId b) const;
    double depth_from_root(NodeId u) const;

    std::vector<std::vector<NodeId>> fibers() const;

private:
    double delta_ = 0.0;
    int s_ = 0;
    int source_n_ = 0;
    std::vector<std::vector<int>> paths_;
    std::vector<int> offset_;
    std::vector<int> path_of_;
};

}  // namespace pathembed
