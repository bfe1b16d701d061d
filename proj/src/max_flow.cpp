#include "cloudplan/max_flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace cloudplan {

MaxFlow::MaxFlow(std::size_t node_count) : graph_(node_count) {}

void MaxFlow::add_edge(std::size_t from, std::size_t to, Capacity capacity) {
    graph_[from].push_back({to, graph_[to].size(), capacity});
    graph_[to].push_back({from, graph_[from].size() - 1, 0});
}

bool MaxFlow::build_levels(std::size_t source, std::size_t sink) {
    level_.assign(graph_.size(), -1);
    std::queue<std::size_t> frontier;
    level_[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        const std::size_t u = frontier.front();
        frontier.pop();
        for (const Edge& e : graph_[u]) {
            if (e.cap > 0 && level_[e.to] < 0) {
                level_[e.to] = level_[u] + 1;
                frontier.push(e.to);
            }
        }
    }
    return level_[sink] >= 0;
}

// Iterative DFS would avoid deep recursion, but level graphs here are at most
// four layers deep (source, table, query, sink).
MaxFlow::Capacity MaxFlow::push(std::size_t node, std::size_t sink, Capacity limit) {
    if (node == sink) return limit;
    for (std::size_t& i = next_edge_[node]; i < graph_[node].size(); ++i) {
        Edge& e = graph_[node][i];
        if (e.cap <= 0 || level_[e.to] != level_[node] + 1) continue;
        const Capacity pushed = push(e.to, sink, std::min(limit, e.cap));
        if (pushed > 0) {
            e.cap -= pushed;
            graph_[e.to][e.rev].cap += pushed;
            return pushed;
        }
    }
    return 0;
}

MaxFlow::Capacity MaxFlow::solve(std::size_t source, std::size_t sink) {
    Capacity flow = 0;
    while (build_levels(source, sink)) {
        next_edge_.assign(graph_.size(), 0);
        while (Capacity pushed = push(source, sink, std::numeric_limits<Capacity>::max())) {
            flow += pushed;
        }
    }
    reachable_.assign(graph_.size(), false);
    for (std::size_t v = 0; v < graph_.size(); ++v) reachable_[v] = level_[v] >= 0;
    return flow;
}

}  // namespace cloudplan
