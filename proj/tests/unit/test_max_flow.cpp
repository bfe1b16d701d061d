#include "cloudplan/max_flow.hpp"

#include <gtest/gtest.h>

#include <random>
#include <tuple>
#include <vector>

using cloudplan::MaxFlow;

namespace {

struct Arc {
    std::size_t from, to;
    std::int64_t cap;
};

// Minimum s-t cut by enumerating every vertex bipartition.
std::int64_t brute_min_cut(std::size_t n, const std::vector<Arc>& arcs, std::size_t s, std::size_t t) {
    std::int64_t best = -1;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (!(mask & (1u << s)) || (mask & (1u << t))) continue;
        std::int64_t cut = 0;
        for (const Arc& a : arcs) {
            if ((mask & (1u << a.from)) && !(mask & (1u << a.to))) cut += a.cap;
        }
        if (best < 0 || cut < best) best = cut;
    }
    return best;
}

}  // namespace

TEST(MaxFlow, SmallKnownNetwork) {
    MaxFlow f(4);
    f.add_edge(0, 1, 3);
    f.add_edge(0, 2, 2);
    f.add_edge(1, 2, 5);
    f.add_edge(1, 3, 2);
    f.add_edge(2, 3, 3);
    EXPECT_EQ(f.solve(0, 3), 5);
    EXPECT_TRUE(f.source_side()[0]);
    EXPECT_FALSE(f.source_side()[3]);
}

TEST(MaxFlow, MatchesBruteForceMinCut) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 8;
        std::vector<Arc> arcs;
        const std::size_t m = rng() % (n * n);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t a = rng() % n, b = rng() % n;
            if (a == b) continue;
            arcs.push_back({a, b, static_cast<std::int64_t>(rng() % 20)});
        }
        MaxFlow f(n);
        for (const Arc& a : arcs) f.add_edge(a.from, a.to, a.cap);
        const std::int64_t flow = f.solve(0, n - 1);
        EXPECT_EQ(flow, brute_min_cut(n, arcs, 0, n - 1));

        // The residual-reachable side is itself a minimum cut.
        std::int64_t cut = 0;
        for (const Arc& a : arcs) {
            if (f.source_side()[a.from] && !f.source_side()[a.to]) cut += a.cap;
        }
        EXPECT_EQ(cut, flow);
    }
}
