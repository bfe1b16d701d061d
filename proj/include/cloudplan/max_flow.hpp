#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cloudplan {

/// Dinic's blocking-flow max-flow on integral capacities.
class MaxFlow {
public:
    using Capacity = std::int64_t;

    explicit MaxFlow(std::size_t node_count);

    void add_edge(std::size_t from, std::size_t to, Capacity capacity);

    /// Runs to completion and returns the flow value. Call once.
    Capacity solve(std::size_t source, std::size_t sink);

    /// After solve(): true for nodes reachable from the source in the
    /// residual graph (the source side of the minimum cut).
    const std::vector<bool>& source_side() const { return reachable_; }

private:
    struct Edge {
        std::size_t to;
        std::size_t rev;
        Capacity cap;
    };

    bool build_levels(std::size_t source, std::size_t sink);
    Capacity push(std::size_t node, std::size_t sink, Capacity limit);

    std::vector<std::vector<Edge>> graph_;
    std::vector<int> level_;
    std::vector<std::size_t> next_edge_;
    std::vector<bool> reachable_;
};

}  // namespace cloudplan
