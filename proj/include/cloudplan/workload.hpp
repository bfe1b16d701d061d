#pragma once

#include "cloudplan/money.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cloudplan {

enum class BackendKind { PerByte, PerCompute };

std::string_view to_string(BackendKind kind);
BackendKind backend_from_string(std::string_view text);

struct TableRef {
    std::string name;
    std::uint64_t size_bytes = 0;
};

/// Profiled measurements of one query in both backends.
struct QueryProfile {
    std::string id;
    Money cost_src;
    Money cost_dest;
    double runtime_src_s = 0;
    double runtime_dest_s = 0;
    std::vector<std::string> scans;
};

enum class Side { Table, Query };

/// Validated bipartite table/query graph. Immutable once built; every
/// cross-reference is resolved to an index at construction.
class WorkloadProfile {
public:
    /// Validates and indexes the inputs. Throws InputError on duplicate ids,
    /// dangling scan references, negative measurements or empty scan sets.
    static WorkloadProfile build(BackendKind source_backend, std::optional<double> deadline_s,
                                 std::vector<TableRef> tables, std::vector<QueryProfile> queries);

    BackendKind source_backend() const { return source_backend_; }
    /// Absent means no runtime constraint.
    std::optional<double> deadline() const { return deadline_; }
    WorkloadProfile with_deadline(std::optional<double> deadline_s) const;

    std::span<const TableRef> tables() const { return tables_; }
    std::span<const QueryProfile> queries() const { return queries_; }
    std::size_t table_count() const { return tables_.size(); }
    std::size_t query_count() const { return queries_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    /// Table indices scanned by query `q`, ascending.
    std::span<const std::size_t> scans_of(std::size_t q) const { return query_tables_[q]; }
    /// Query indices scanning table `t`, ascending.
    std::span<const std::size_t> scanners_of(std::size_t t) const { return table_queries_[t]; }

    std::optional<std::size_t> table_index(std::string_view name) const;
    std::optional<std::size_t> query_index(std::string_view id) const;

    /// N(t) for a table or N^-1(q) for a query, as sorted identifiers.
    /// Throws InputError("not found: ...") for an unknown id.
    std::vector<std::string> neighbors(Side side, std::string_view id) const;

private:
    BackendKind source_backend_ = BackendKind::PerByte;
    std::optional<double> deadline_;
    std::vector<TableRef> tables_;
    std::vector<QueryProfile> queries_;
    std::vector<std::vector<std::size_t>> query_tables_;
    std::vector<std::vector<std::size_t>> table_queries_;
    std::unordered_map<std::string, std::size_t> table_by_name_;
    std::unordered_map<std::string, std::size_t> query_by_id_;
    std::size_t edge_count_ = 0;
};

/// Parses the workload JSON document.
WorkloadProfile load_workload(std::string_view document);
/// Inverse of load_workload; output is deterministic.
std::string serialize_workload(const WorkloadProfile& workload);

}  // namespace cloudplan
