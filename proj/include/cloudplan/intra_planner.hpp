#pragma once

#include "cloudplan/cost_model.hpp"
#include "cloudplan/inter_planner.hpp"
#include "cloudplan/money.hpp"
#include "cloudplan/workload.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cloudplan {

/// One operator in a query plan. `children` are the upstream inputs.
struct DagNode {
    std::string id;
    std::string op;
    double cardinality = 0;     ///< output rows, f_w(v)
    double row_size_bytes = 0;  ///< rs(v)
    std::vector<std::string> children;
    std::optional<TableRef> base_table;          ///< leaves only
    std::optional<double> upstream_runtime_s;    ///< f_r(v), when profiled
    std::optional<double> downstream_runtime_s;  ///< runtime of the rest of the plan after a cut at v

    double output_bytes() const { return cardinality * row_size_bytes; }
};

/// Operator DAG of a single query, validated and indexed.
class QueryDag {
public:
    /// Throws InputError on duplicate ids, unknown children, cycles, more or
    /// fewer than one root, leaves without a base table, negative numbers, or
    /// profiled runtimes that shrink downstream.
    static QueryDag build(std::string query_id, Money baseline_cost_src, double baseline_runtime_src_s,
                          std::vector<DagNode> nodes);

    const std::string& query_id() const { return query_id_; }
    Money baseline_cost() const { return baseline_cost_; }
    double baseline_runtime() const { return baseline_runtime_; }
    std::optional<double> deadline() const { return deadline_; }
    void set_deadline(std::optional<double> deadline_s) { deadline_ = deadline_s; }

    std::size_t size() const { return nodes_.size(); }
    const DagNode& node(std::size_t i) const { return nodes_[i]; }
    std::size_t root() const { return root_; }
    std::optional<std::size_t> index_of(std::string_view id) const;
    /// Throws InputError("not found: ...").
    std::size_t require(std::string_view id) const;

    /// True when `u` is part of the upstream subquery of `v` (u == v included).
    bool is_upstream(std::size_t u, std::size_t v) const { return upstream_[v][u] != 0; }
    /// Leaves outside the upstream subquery of `v`, ascending.
    std::vector<std::size_t> downstream_leaves(std::size_t v) const;

    /// Every node carries a profiled f_r.
    bool has_full_runtime_oracle() const;

private:
    std::string query_id_;
    Money baseline_cost_;
    double baseline_runtime_ = 0;
    std::optional<double> deadline_;
    std::vector<DagNode> nodes_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<char>> upstream_;
    std::size_t root_ = 0;
};

QueryDag load_query_dag(std::string_view document);

/// Per-byte cost of the downstream subquery (C_s) and the cost of shipping
/// the cut's output plus the downstream base tables (C_m).
struct CutCosts {
    Money scan;
    Money migration;
};

struct IntraOptions {
    /// Bill the destination for re-scanning the shipped intermediate result.
    /// false gives the base-tables-only scan term.
    bool scan_intermediate = true;
    /// Iteration cap K; 0 means one per node.
    std::size_t max_iters = 0;
    /// Overrides the DAG's own deadline when set.
    std::optional<double> deadline_s;
    PlannerOptions planner;
};

CutCosts cut_costs(const QueryDag& dag, std::string_view node, const PriceBook& prices, const IntraOptions& options = {});

/// o_v = baseline - (C_m + C_s): the most a cut at `node` could save before
/// paying for the upstream subquery.
Money opportunity(const QueryDag& dag, std::string_view node, const PriceBook& prices,
                  const IntraOptions& options = {});

struct CutEvaluation {
    std::string node;
    Money opportunity;  ///< o_v when the cut was evaluated
    bool fr_evaluated = false;
    double fr_s = 0;
    std::optional<Money> actual_savings;  ///< a_u
    Money plan_cost;                       ///< C_r + C_m + C_s
    double runtime_s = 0;
    bool feasible = true;
};

struct IntraResult {
    std::optional<CutEvaluation> chosen;  ///< empty means run the whole query in the source
    Money baseline_cost;
    Money plan_cost;
    double baseline_runtime_s = 0;
    double runtime_s = 0;
    std::size_t initial_candidates = 0;
    std::size_t fr_evaluations = 0;
    Money search_cost;  ///< what the f_r evaluations were billed
    std::vector<CutEvaluation> evaluations;
    std::vector<std::string> warnings;

    bool is_baseline() const { return !chosen.has_value(); }
};

/// Supplies f_r(v) for nodes without a profiled runtime.
using RuntimeOracle = std::function<double(const DagNode&)>;

/// Opportunity-ordered cut search with pruning, capped at K evaluations of
/// the billed f_r oracle. Never returns a plan costlier than the baseline.
IntraResult intra_plan(const QueryDag& dag, const PriceBook& prices, const IntraOptions& options = {},
                       const RuntimeOracle& oracle = {});

/// Prices every non-root cut with known f_r and returns the global best.
/// Requires a full runtime oracle; nothing is billed.
IntraResult exhaustive_cuts(const QueryDag& dag, const PriceBook& prices, const IntraOptions& options = {});

}  // namespace cloudplan
