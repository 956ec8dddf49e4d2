#pragma once

#include <utility>
#include <vector>

namespace mcn {

/// Simple directed graph on vertices 0..n-1. Adjacency lists are kept sorted
/// and free of duplicates so every traversal is deterministic.
class Digraph
{
 public:
    Digraph() = default;
    explicit Digraph(int n) : out_(static_cast<std::size_t>(n)), in_(static_cast<std::size_t>(n)) {}

    int add_vertex();
    /// Returns false when the edge was already present.
    bool add_edge(int from, int to);
    bool has_edge(int from, int to) const;

    int size() const { return static_cast<int>(out_.size()); }
    int edge_count() const;
    const std::vector<int>& out(int v) const { return out_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& in(int v) const { return in_[static_cast<std::size_t>(v)]; }
    std::vector<std::pair<int, int>> edges() const;

    /// Weakly connected components after deleting `removed` (may be empty).
    int weak_components(const std::vector<bool>& removed = {}) const;
    std::vector<bool> reachable_from(int v) const;

 private:
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
};

}  // namespace mcn
