#pragma once

#include "cloudplan/cost_model.hpp"
#include "cloudplan/money.hpp"
#include "cloudplan/workload.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cloudplan {

enum class PlanType { SourceOnly, DestOnly, Multi };

std::string_view to_string(PlanType type);

/// Knobs shared by the inter- and intra-query planners.
struct PlannerOptions {
    /// Bulk transfer rate used to turn migrated bytes into seconds.
    long double bandwidth_bytes_per_s = 1e9L / 8;  // 1 Gbit/s

    /// Defaults, with CLOUDPLAN_BANDWIDTH_GBPS (gigabits per second)
    /// overriding the bandwidth when set.
    static PlannerOptions from_environment();
};

/// A chosen set of tables and queries to run in the destination backend.
struct InterPlan {
    std::vector<std::string> migrate_tables;   ///< sorted
    std::vector<std::string> migrate_queries;  ///< sorted
    CostBreakdown cost;
    Money baseline_cost;
    double runtime_s = 0;
    double baseline_runtime_s = 0;
    PlanType plan_type = PlanType::SourceOnly;
    bool deadline_met = true;
    std::vector<std::string> warnings;

    /// Net savings against running everything in the source.
    Money savings() const { return baseline_cost - cost.total; }
    /// 100 * savings / baseline; 0 for a zero-cost baseline.
    double savings_pct() const;
    /// Positive when the plan finishes sooner than the baseline.
    double speedup_pct() const;
};

/// v_t (table upper bound) or v_q (query lower bound).
struct BoundValue {
    std::string subject;
    Money value;
};

/// Outcome of the fixpoint pruning pass.
struct Reduction {
    std::vector<std::string> remaining_tables;
    std::vector<std::string> remaining_queries;
    std::vector<std::string> forced_tables;
    std::vector<std::string> forced_queries;
};

/// Precomputed savings and migration costs over one workload/price pair.
/// Planning calls are const and may run concurrently on one instance.
class InterPlanner {
public:
    InterPlanner(const WorkloadProfile& workload, const PriceBook& prices, PlannerOptions options = {});

    const WorkloadProfile& workload() const { return workload_; }
    const PriceBook& prices() const { return prices_; }
    const PlannerOptions& options() const { return options_; }

    /// sigma_q, positive when migrating saves money.
    Money query_saving(std::size_t q) const { return sigma_[q]; }
    /// mu_t
    Money table_migration_cost(std::size_t t) const { return mu_[t]; }

    /// v_t over queries with positive savings, for every table.
    std::vector<BoundValue> table_bounds() const;
    /// v_q for every query.
    std::vector<BoundValue> query_bounds() const;

    /// Drops non-saving queries, then repeatedly prunes tables with v_t < 0
    /// and force-migrates queries with v_q > 0 until neither rule fires.
    Reduction reduce() const;

    /// Greedy search: reduce, then repeatedly pin the table with the
    /// smallest v_t to the source and reduce again, recording every plan.
    /// Returns the cheapest recorded plan that meets the deadline.
    InterPlan greedy() const;

    /// Exact cost optimum via minimum cut; falls back to greedy() when the
    /// cost-optimal plan misses the deadline.
    InterPlan optimal() const;

    /// Enumerates every table subset. Throws CapacityError above 20 tables.
    InterPlan brute_force() const;

    /// Costs an explicit plan. Throws InputError("incoherent plan ...") when a
    /// migrated query scans a table that stays behind.
    InterPlan evaluate(const std::vector<std::string>& tables, const std::vector<std::string>& queries) const;

    static constexpr std::size_t kBruteForceTableLimit = 20;

private:
    struct Candidate;
    class Search;

    Candidate make_candidate(const std::vector<char>& tables, const std::vector<char>& queries) const;
    Candidate candidate_for_queries(const std::vector<char>& queries) const;
    InterPlan finish(const Candidate& chosen) const;
    InterPlan choose(const std::vector<Candidate>& recorded) const;
    bool within_deadline(double runtime_s) const;
    double lanes_runtime(std::int64_t src_us, std::int64_t dest_us, std::uint64_t moved_bytes, bool any_moved) const;

    const WorkloadProfile& workload_;
    PriceBook prices_;
    PlannerOptions options_;
    std::vector<Money> sigma_;
    std::vector<Money> mu_;
    // Per-query runtimes on a whole-microsecond grid so lane sums are exact.
    std::vector<std::int64_t> src_us_;
    std::vector<std::int64_t> dest_us_;
    Money baseline_cost_;
    double baseline_runtime_ = 0;
};

// Free-function entry points mirroring the planner methods.
Reduction reduce_plan(const WorkloadProfile& workload, const PriceBook& prices);
InterPlan greedy_plan(const WorkloadProfile& workload, const PriceBook& prices, PlannerOptions options = {});
InterPlan optimal_plan(const WorkloadProfile& workload, const PriceBook& prices, PlannerOptions options = {});
InterPlan brute_force_plan(const WorkloadProfile& workload, const PriceBook& prices, PlannerOptions options = {});
InterPlan plan_cost_runtime(const WorkloadProfile& workload, const PriceBook& prices,
                            const std::vector<std::string>& tables, const std::vector<std::string>& queries,
                            PlannerOptions options = {});

}  // namespace cloudplan
