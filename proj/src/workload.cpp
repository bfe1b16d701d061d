#include "cloudplan/workload.hpp"

#include "cloudplan/errors.hpp"
#include "cloudplan/json_io.hpp"

#include <algorithm>
#include <cmath>

namespace cloudplan {

std::string_view to_string(BackendKind kind) {
    return kind == BackendKind::PerByte ? "PER_BYTE" : "PER_COMPUTE";
}

BackendKind backend_from_string(std::string_view text) {
    if (text == "PER_BYTE") return BackendKind::PerByte;
    if (text == "PER_COMPUTE") return BackendKind::PerCompute;
    throw InputError("unknown source_backend '" + std::string(text) + "' (expected PER_BYTE or PER_COMPUTE)");
}

WorkloadProfile WorkloadProfile::build(BackendKind source_backend, std::optional<double> deadline_s,
                                       std::vector<TableRef> tables, std::vector<QueryProfile> queries) {
    WorkloadProfile w;
    w.source_backend_ = source_backend;
    if (deadline_s && (!(*deadline_s >= 0) || std::isnan(*deadline_s))) {
        throw InputError("negative measurement: deadline_seconds");
    }
    w.deadline_ = deadline_s;

    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (!w.table_by_name_.emplace(tables[i].name, i).second) {
            throw InputError("duplicate identifier: table '" + tables[i].name + "'");
        }
    }
    w.table_queries_.resize(tables.size());
    w.query_tables_.resize(queries.size());
    for (std::size_t q = 0; q < queries.size(); ++q) {
        QueryProfile& qp = queries[q];
        if (!w.query_by_id_.emplace(qp.id, q).second) {
            throw InputError("duplicate identifier: query '" + qp.id + "'");
        }
        if (qp.cost_src < kZeroMoney || qp.cost_dest < kZeroMoney || !(qp.runtime_src_s >= 0) ||
            !(qp.runtime_dest_s >= 0)) {
            throw InputError("negative measurement: query '" + qp.id + "'");
        }
        std::sort(qp.scans.begin(), qp.scans.end());
        qp.scans.erase(std::unique(qp.scans.begin(), qp.scans.end()), qp.scans.end());
        if (qp.scans.empty()) throw InputError("query '" + qp.id + "' scans no tables");
        for (const std::string& name : qp.scans) {
            auto it = w.table_by_name_.find(name);
            if (it == w.table_by_name_.end()) {
                throw InputError("dangling edge: query '" + qp.id + "' scans undeclared table '" + name + "'");
            }
            w.query_tables_[q].push_back(it->second);
            w.table_queries_[it->second].push_back(q);
            ++w.edge_count_;
        }
        std::sort(w.query_tables_[q].begin(), w.query_tables_[q].end());
    }
    w.tables_ = std::move(tables);
    w.queries_ = std::move(queries);
    return w;
}

WorkloadProfile WorkloadProfile::with_deadline(std::optional<double> deadline_s) const {
    WorkloadProfile copy = *this;
    if (deadline_s && !(*deadline_s >= 0)) throw InputError("negative measurement: deadline_seconds");
    copy.deadline_ = deadline_s;
    return copy;
}

std::optional<std::size_t> WorkloadProfile::table_index(std::string_view name) const {
    auto it = table_by_name_.find(std::string(name));
    if (it == table_by_name_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> WorkloadProfile::query_index(std::string_view id) const {
    auto it = query_by_id_.find(std::string(id));
    if (it == query_by_id_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> WorkloadProfile::neighbors(Side side, std::string_view id) const {
    std::vector<std::string> out;
    if (side == Side::Table) {
        auto t = table_index(id);
        if (!t) throw InputError("not found: table '" + std::string(id) + "'");
        for (std::size_t q : table_queries_[*t]) out.push_back(queries_[q].id);
    } else {
        auto q = query_index(id);
        if (!q) throw InputError("not found: query '" + std::string(id) + "'");
        for (std::size_t t : query_tables_[*q]) out.push_back(tables_[t].name);
    }
    std::sort(out.begin(), out.end());
    return out;
}

WorkloadProfile load_workload(std::string_view document) {
    using json_io::json;
    const json doc = json_io::parse(document, "workload");
    if (!doc.is_object()) throw InputError("workload: expected an object");

    const json& backend = json_io::require(doc, "source_backend", "workload");
    if (!backend.is_string()) throw InputError("workload: source_backend must be a string");
    const BackendKind kind = backend_from_string(backend.get<std::string>());

    std::optional<double> deadline;
    if (auto it = doc.find("deadline_seconds"); it != doc.end() && !it->is_null()) {
        deadline = json_io::nonneg_number(doc, "deadline_seconds", "workload");
    }

    std::vector<TableRef> tables;
    const json& jt = json_io::require(doc, "tables", "workload");
    if (!jt.is_array()) throw InputError("workload: tables must be an array");
    for (const json& t : jt) {
        TableRef ref;
        const json& name = json_io::require(t, "name", "table");
        if (!name.is_string()) throw InputError("table: name must be a string");
        ref.name = name.get<std::string>();
        const double size = json_io::nonneg_number(t, "size_bytes", "table '" + ref.name + "'");
        ref.size_bytes = static_cast<std::uint64_t>(std::llround(size));
        tables.push_back(std::move(ref));
    }

    std::vector<QueryProfile> queries;
    const json& jq = json_io::require(doc, "queries", "workload");
    if (!jq.is_array()) throw InputError("workload: queries must be an array");
    for (const json& q : jq) {
        QueryProfile p;
        const json& id = json_io::require(q, "id", "query");
        if (!id.is_string()) throw InputError("query: id must be a string");
        p.id = id.get<std::string>();
        const std::string what = "query '" + p.id + "'";
        p.cost_src = json_io::money_field(q, "cost_src", what);
        p.cost_dest = json_io::money_field(q, "cost_dest", what);
        p.runtime_src_s = json_io::nonneg_number(q, "runtime_src_s", what);
        p.runtime_dest_s = json_io::nonneg_number(q, "runtime_dest_s", what);
        const json& scans = json_io::require(q, "scans", what);
        if (!scans.is_array()) throw InputError(what + ": scans must be an array");
        for (const json& s : scans) {
            if (!s.is_string()) throw InputError(what + ": scans must hold table names");
            p.scans.push_back(s.get<std::string>());
        }
        queries.push_back(std::move(p));
    }
    return WorkloadProfile::build(kind, deadline, std::move(tables), std::move(queries));
}

std::string serialize_workload(const WorkloadProfile& w) {
    using json_io::json;
    json doc = json::object();
    doc["source_backend"] = std::string(to_string(w.source_backend()));
    if (w.deadline()) doc["deadline_seconds"] = *w.deadline();
    json tables = json::array();
    for (const TableRef& t : w.tables()) tables.push_back({{"name", t.name}, {"size_bytes", t.size_bytes}});
    doc["tables"] = std::move(tables);
    json queries = json::array();
    for (const QueryProfile& q : w.queries()) {
        queries.push_back({{"id", q.id},
                           {"cost_src", q.cost_src.to_string()},
                           {"cost_dest", q.cost_dest.to_string()},
                           {"runtime_src_s", q.runtime_src_s},
                           {"runtime_dest_s", q.runtime_dest_s},
                           {"scans", q.scans}});
    }
    doc["queries"] = std::move(queries);
    return doc.dump(2) + "\n";
}

}  // namespace cloudplan
