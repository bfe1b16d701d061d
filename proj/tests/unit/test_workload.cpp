#include "cloudplan/errors.hpp"
#include "cloudplan/workload.hpp"

#include "oracles.hpp"
#include "random_instances.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace cloudplan;
using cloudplan::cptest::fixture;
using cloudplan::cptest::read_text;

namespace {

std::string error_of(const std::string& doc) {
    try {
        load_workload(doc);
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Workload, SharedScanShape) {
    const auto w = load_workload(read_text(fixture("shared_scan_graph.json")));
    EXPECT_EQ(w.table_count(), 3u);
    EXPECT_EQ(w.query_count(), 3u);
    EXPECT_EQ(w.edge_count(), 4u);
    EXPECT_EQ(w.source_backend(), BackendKind::PerByte);
    EXPECT_FALSE(w.deadline().has_value());
}

TEST(Workload, NeighborsOnSharedScan) {
    const auto w = load_workload(read_text(fixture("shared_scan_graph.json")));
    EXPECT_EQ(w.neighbors(Side::Table, "t3"), (std::vector<std::string>{"q2", "q3"}));
    EXPECT_EQ(w.neighbors(Side::Query, "q1"), (std::vector<std::string>{"t2"}));
    EXPECT_TRUE(w.neighbors(Side::Table, "t1").empty());
    EXPECT_THROW(w.neighbors(Side::Query, "q9"), InputError);
}

TEST(Workload, EmptyQueriesIsValid) {
    const auto w = load_workload(read_text(fixture("empty_workload.json")));
    EXPECT_EQ(w.query_count(), 0u);
    EXPECT_EQ(w.source_backend(), BackendKind::PerCompute);
}

TEST(Workload, DanglingEdgeRejected) {
    EXPECT_NE(error_of(read_text(fixture("dangling_workload.json"))).find("dangling edge"), std::string::npos);
}

TEST(Workload, ValidationErrors) {
    EXPECT_NE(error_of(R"({"source_backend":"PER_BYTE","tables":[{"name":"a","size_bytes":1},{"name":"a","size_bytes":2}],"queries":[]})")
                  .find("duplicate identifier"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"source_backend":"PER_BYTE","tables":[{"name":"a","size_bytes":-1}],"queries":[]})")
                  .find("negative measurement"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"source_backend":"PER_BYTE","tables":[{"name":"a","size_bytes":1}],
        "queries":[{"id":"q","cost_src":"1","cost_dest":"-1","runtime_src_s":1,"runtime_dest_s":1,"scans":["a"]}]})")
                  .find("negative measurement"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"source_backend":"PER_BYTE","tables":[{"name":"a","size_bytes":1}],
        "queries":[{"id":"q","cost_src":"1","cost_dest":"1","runtime_src_s":1,"runtime_dest_s":1,"scans":[]}]})")
                  .find("scans no tables"),
              std::string::npos);
    EXPECT_FALSE(error_of(R"({"source_backend":"SQL","tables":[],"queries":[]})").empty());
    EXPECT_FALSE(error_of("{").empty());
}

TEST(Workload, NeighborsAreAnInvolution) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto w = cptest::small_integer_workload(seed);
        for (const auto& t : w.tables()) {
            for (const auto& q : w.neighbors(Side::Table, t.name)) {
                const auto back = w.neighbors(Side::Query, q);
                EXPECT_TRUE(std::binary_search(back.begin(), back.end(), t.name));
            }
        }
        for (const auto& q : w.queries()) {
            for (const auto& t : w.neighbors(Side::Query, q.id)) {
                const auto back = w.neighbors(Side::Table, t);
                EXPECT_TRUE(std::binary_search(back.begin(), back.end(), q.id));
            }
        }
    }
}

TEST(Workload, SerializeThenLoadIsIdentity) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto w = seed % 2 ? cptest::small_integer_workload(seed) : cptest::mixed_profile_workload(seed);
        const std::string text = serialize_workload(w);
        const auto again = load_workload(text);
        EXPECT_EQ(serialize_workload(again), text);
        ASSERT_EQ(again.query_count(), w.query_count());
        for (std::size_t q = 0; q < w.query_count(); ++q) {
            EXPECT_EQ(again.queries()[q].cost_src, w.queries()[q].cost_src);
            EXPECT_EQ(again.queries()[q].runtime_dest_s, w.queries()[q].runtime_dest_s);
            EXPECT_EQ(again.queries()[q].scans, w.queries()[q].scans);
        }
        EXPECT_EQ(again.edge_count(), w.edge_count());
    }
    const auto tradeoff = load_workload(read_text(fixture("tradeoff_workload.json")));
    EXPECT_EQ(load_workload(serialize_workload(tradeoff)).deadline(), tradeoff.deadline());
}
