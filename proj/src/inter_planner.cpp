#include "cloudplan/inter_planner.hpp"

#include "cloudplan/errors.hpp"
#include "cloudplan/max_flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <functional>
#include <utility>
#include <string>

namespace cloudplan {

std::string_view to_string(PlanType type) {
    switch (type) {
    case PlanType::SourceOnly: return "SOURCE_ONLY";
    case PlanType::DestOnly: return "DEST_ONLY";
    case PlanType::Multi: return "MULTI";
    }
    return "UNKNOWN";
}

PlannerOptions PlannerOptions::from_environment() {
    PlannerOptions options;
    if (const char* env = std::getenv("CLOUDPLAN_BANDWIDTH_GBPS"); env && *env) {
        char* end = nullptr;
        const double gbps = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(gbps > 0)) {
            throw InputError(std::string("CLOUDPLAN_BANDWIDTH_GBPS must be a positive number, got '") + env + "'");
        }
        options.bandwidth_bytes_per_s = static_cast<long double>(gbps) * 1e9L / 8;
    }
    return options;
}

double InterPlan::savings_pct() const {
    if (baseline_cost.micros() == 0) return 0;
    return 100.0 * static_cast<double>(savings().micros()) / static_cast<double>(baseline_cost.micros());
}

double InterPlan::speedup_pct() const {
    if (baseline_runtime_s <= 0) return 0;
    return 100.0 * (baseline_runtime_s - runtime_s) / baseline_runtime_s;
}

struct InterPlanner::Candidate {
    std::vector<char> tables;
    std::vector<char> queries;
    CostBreakdown cost;
    double runtime = 0;
};

InterPlanner::InterPlanner(const WorkloadProfile& workload, const PriceBook& prices, PlannerOptions options)
    : workload_(workload), prices_(prices), options_(options) {
    prices_.validate();
    if (!(options_.bandwidth_bytes_per_s > 0)) throw InputError("transfer bandwidth must be positive");
    for (const QueryProfile& q : workload_.queries()) {
        sigma_.push_back(query_savings(q.cost_dest, q.cost_src));
        baseline_cost_ += q.cost_src;
        src_us_.push_back(std::llround(q.runtime_src_s * 1e6));
        dest_us_.push_back(std::llround(q.runtime_dest_s * 1e6));
    }
    for (const TableRef& t : workload_.tables()) {
        mu_.push_back(migration_cost(static_cast<long double>(t.size_bytes), prices_));
    }
    baseline_runtime_ = lanes_runtime(std::accumulate(src_us_.begin(), src_us_.end(), std::int64_t{0}), 0, 0, false);
}

std::vector<BoundValue> InterPlanner::table_bounds() const {
    std::vector<BoundValue> out;
    for (std::size_t t = 0; t < workload_.table_count(); ++t) {
        Money v = -mu_[t];
        for (std::size_t q : workload_.scanners_of(t)) {
            if (sigma_[q] > kZeroMoney) v += sigma_[q];
        }
        out.push_back({workload_.tables()[t].name, v});
    }
    return out;
}

std::vector<BoundValue> InterPlanner::query_bounds() const {
    std::vector<BoundValue> out;
    for (std::size_t q = 0; q < workload_.query_count(); ++q) {
        Money v = sigma_[q];
        for (std::size_t t : workload_.scans_of(q)) v -= mu_[t];
        out.push_back({workload_.queries()[q].id, v});
    }
    return out;
}

// Incremental state for reduction and greedy search.
//
// A query is active while it is still undecided; forced queries have been
// committed to the destination. The recorded plan at any moment is every
// active or forced query plus the union of their tables, and its totals are
// kept up to date as queries leave that set.
class InterPlanner::Search {
public:
    struct Snapshot {
        CostBreakdown cost;
        double runtime = 0;
        std::size_t departures = 0;  ///< prefix of departed() that was applied
    };

    explicit Search(const InterPlanner& planner) : p_(planner), w_(planner.workload_) {
        const std::size_t nt = w_.table_count();
        const std::size_t nq = w_.query_count();
        active_t_.assign(nt, 1);
        forced_t_.assign(nt, 0);
        active_q_.assign(nq, 0);
        forced_q_.assign(nq, 0);
        vt_.assign(nt, kZeroMoney);
        vq_.assign(nq, kZeroMoney);
        users_.assign(nt, 0);
        dirty_flag_.assign(nt, 0);

        std::vector<std::size_t> by_name(nt);
        std::iota(by_name.begin(), by_name.end(), 0);
        auto by_table_name = [&](std::size_t a, std::size_t b) { return w_.tables()[a].name < w_.tables()[b].name; };
        if (!std::is_sorted(by_name.begin(), by_name.end(), by_table_name)) {
            std::sort(by_name.begin(), by_name.end(), by_table_name);
        }
        rank_.assign(nt, 0);
        for (std::size_t r = 0; r < nt; ++r) rank_[by_name[r]] = r;
        table_at_rank_ = std::move(by_name);

        for (std::size_t q = 0; q < nq; ++q) {
            const QueryProfile& qp = w_.queries()[q];
            if (p_.sigma_[q] > kZeroMoney) {
                active_q_[q] = 1;
                moved_ += qp.cost_dest;
                dest_us_ += p_.dest_us_[q];
                ++members_;
                for (std::size_t t : w_.scans_of(q)) {
                    if (users_[t]++ == 0) {
                        migration_ += p_.mu_[t];
                        bytes_ += w_.tables()[t].size_bytes;
                    }
                }
            } else {
                remaining_ += qp.cost_src;
                src_us_ += p_.src_us_[q];
            }
        }
        for (std::size_t t = 0; t < nt; ++t) {
            Money v = -p_.mu_[t];
            for (std::size_t q : w_.scanners_of(t)) {
                if (active_q_[q]) v += p_.sigma_[q];
            }
            vt_[t] = v;
            heap_.push_back({v, rank_[t]});
            if (v < kZeroMoney) prune_.push_back(t);
        }
        std::make_heap(heap_.begin(), heap_.end(), std::greater<>{});
        for (std::size_t q = 0; q < nq; ++q) {
            if (!active_q_[q]) continue;
            Money v = p_.sigma_[q];
            for (std::size_t t : w_.scans_of(q)) v -= p_.mu_[t];
            vq_[q] = v;
            if (v > kZeroMoney) force_.push_back(q);
        }
    }

    // Applies both pruning rules until neither fires.
    void reduce() {
        while (!prune_.empty() || !force_.empty()) {
            if (!prune_.empty()) {
                const std::size_t t = prune_.back();
                prune_.pop_back();
                if (active_t_[t] && vt_[t] < kZeroMoney) remove_table(t);
                continue;
            }
            const std::size_t q = force_.back();
            force_.pop_back();
            if (active_q_[q] && vq_[q] > kZeroMoney) force_query(q);
        }
    }

    // Pins the active table with the smallest v_t (lowest name on ties) to
    // the source. False when no table is left.
    bool pin_weakest() {
        for (std::size_t t : dirty_) {
            dirty_flag_[t] = 0;
            if (!active_t_[t]) continue;
            heap_.push_back({vt_[t], rank_[t]});
            std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
        }
        dirty_.clear();
        // Entries go stale when a table's bound drops or it leaves the
        // search; skip those.
        while (!heap_.empty()) {
            std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
            const auto [v, r] = heap_.back();
            heap_.pop_back();
            const std::size_t t = table_at_rank_[r];
            if (!active_t_[t] || v != vt_[t]) continue;
            remove_table(t);
            return true;
        }
        return false;
    }

    Snapshot snapshot() const {
        return {CostBreakdown::of(migration_, moved_, remaining_),
                p_.lanes_runtime(src_us_, dest_us_, bytes_, members_ > 0), departed_.size()};
    }

    /// Queries that left the recorded plan, in order.
    const std::vector<std::size_t>& departed() const { return departed_; }

    Reduction reduction() const {
        auto names = [](auto items, const std::vector<char>& mask, auto key) {
            std::vector<std::string> out;
            for (std::size_t i = 0; i < mask.size(); ++i) {
                if (mask[i]) out.push_back(key(items[i]));
            }
            std::sort(out.begin(), out.end());
            return out;
        };
        auto table_name = [](const TableRef& t) { return t.name; };
        auto query_id = [](const QueryProfile& q) { return q.id; };
        return {names(w_.tables(), active_t_, table_name), names(w_.queries(), active_q_, query_id),
                names(w_.tables(), forced_t_, table_name), names(w_.queries(), forced_q_, query_id)};
    }

private:
    void remove_table(std::size_t t) {
        active_t_[t] = 0;
        for (std::size_t q : w_.scanners_of(t)) {
            if (active_q_[q]) drop_query(q);
        }
    }

    void drop_query(std::size_t q) {
        active_q_[q] = 0;
        const QueryProfile& qp = w_.queries()[q];
        departed_.push_back(q);
        moved_ -= qp.cost_dest;
        dest_us_ -= p_.dest_us_[q];
        remaining_ += qp.cost_src;
        src_us_ += p_.src_us_[q];
        --members_;
        for (std::size_t t : w_.scans_of(q)) {
            if (--users_[t] == 0) {
                migration_ -= p_.mu_[t];
                bytes_ -= w_.tables()[t].size_bytes;
            }
            if (!active_t_[t]) continue;
            vt_[t] -= p_.sigma_[q];
            if (vt_[t] < kZeroMoney) {
                prune_.push_back(t);
            } else if (!dirty_flag_[t]) {
                dirty_flag_[t] = 1;
                dirty_.push_back(t);
            }
        }
    }

    void force_query(std::size_t q) {
        active_q_[q] = 0;
        forced_q_[q] = 1;
        for (std::size_t t : w_.scans_of(q)) {
            if (forced_t_[t]) continue;
            forced_t_[t] = 1;
            active_t_[t] = 0;
            // Forced tables stop charging the queries that still read them.
            for (std::size_t other : w_.scanners_of(t)) {
                if (!active_q_[other]) continue;
                vq_[other] += p_.mu_[t];
                if (vq_[other] > kZeroMoney) force_.push_back(other);
            }
        }
    }

    const InterPlanner& p_;
    const WorkloadProfile& w_;
    std::vector<char> active_t_, forced_t_, active_q_, forced_q_;
    std::vector<Money> vt_, vq_;
    std::vector<std::size_t> rank_, table_at_rank_;
    std::vector<std::pair<Money, std::size_t>> heap_;  // min-heap on (v_t, name rank)
    std::vector<std::size_t> dirty_;                   // bound changed since the last pin
    std::vector<char> dirty_flag_;
    std::vector<std::size_t> prune_, force_;

    std::vector<std::uint32_t> users_;  // recorded queries reading each table
    std::size_t members_ = 0;
    Money migration_, moved_, remaining_;
    std::uint64_t bytes_ = 0;
    std::int64_t src_us_ = 0, dest_us_ = 0;
    std::vector<std::size_t> departed_;
};

Reduction InterPlanner::reduce() const {
    Search s(*this);
    s.reduce();
    return s.reduction();
}

double InterPlanner::lanes_runtime(std::int64_t src_us, std::int64_t dest_us, std::uint64_t moved_bytes,
                                  bool any_moved) const {
    const double src = static_cast<double>(src_us) / 1e6;
    if (!any_moved) return src;
    const double dest = static_cast<double>(
        transfer_seconds(static_cast<long double>(moved_bytes), options_.bandwidth_bytes_per_s) +
        static_cast<long double>(dest_us) / 1e6L);
    return std::max(src, dest);
}

InterPlanner::Candidate InterPlanner::make_candidate(const std::vector<char>& tables,
                                                     const std::vector<char>& queries) const {
    Candidate c{tables, queries, {}, 0};
    Money migration;
    Money moved;
    Money remaining;
    std::uint64_t moved_bytes = 0;
    std::int64_t dest_us = 0;
    std::int64_t src_us = 0;
    bool any = false;
    for (std::size_t t = 0; t < tables.size(); ++t) {
        if (!tables[t]) continue;
        migration += mu_[t];
        moved_bytes += workload_.tables()[t].size_bytes;
        any = true;
    }
    for (std::size_t q = 0; q < queries.size(); ++q) {
        const QueryProfile& qp = workload_.queries()[q];
        if (queries[q]) {
            moved += qp.cost_dest;
            dest_us += dest_us_[q];
            any = true;
        } else {
            remaining += qp.cost_src;
            src_us += src_us_[q];
        }
    }
    c.cost = CostBreakdown::of(migration, moved, remaining);
    c.runtime = lanes_runtime(src_us, dest_us, moved_bytes, any);
    return c;
}

InterPlanner::Candidate InterPlanner::candidate_for_queries(const std::vector<char>& queries) const {
    std::vector<char> tables(workload_.table_count(), 0);
    for (std::size_t q = 0; q < queries.size(); ++q) {
        if (!queries[q]) continue;
        for (std::size_t t : workload_.scans_of(q)) tables[t] = 1;
    }
    return make_candidate(tables, queries);
}

bool InterPlanner::within_deadline(double runtime_s) const {
    const auto deadline = workload_.deadline();
    return !deadline || runtime_s <= *deadline;
}

InterPlan InterPlanner::finish(const Candidate& c) const {
    InterPlan plan;
    std::size_t migrated_query_count = 0;
    for (std::size_t t = 0; t < c.tables.size(); ++t) {
        if (c.tables[t]) plan.migrate_tables.push_back(workload_.tables()[t].name);
    }
    for (std::size_t q = 0; q < c.queries.size(); ++q) {
        if (c.queries[q]) {
            plan.migrate_queries.push_back(workload_.queries()[q].id);
            ++migrated_query_count;
        }
    }
    for (auto* names : {&plan.migrate_tables, &plan.migrate_queries}) {
        if (!std::is_sorted(names->begin(), names->end())) std::sort(names->begin(), names->end());
    }
    plan.cost = c.cost;
    plan.baseline_cost = baseline_cost_;
    plan.runtime_s = c.runtime;
    plan.baseline_runtime_s = baseline_runtime_;
    plan.deadline_met = within_deadline(c.runtime);

    bool all_scanned_tables_moved = true;
    for (std::size_t t = 0; t < workload_.table_count(); ++t) {
        if (!workload_.scanners_of(t).empty() && !c.tables[t]) all_scanned_tables_moved = false;
    }
    if (plan.migrate_tables.empty()) {
        plan.plan_type = PlanType::SourceOnly;
    } else if (migrated_query_count == workload_.query_count() && all_scanned_tables_moved) {
        plan.plan_type = PlanType::DestOnly;
    } else {
        plan.plan_type = PlanType::Multi;
    }
    return plan;
}

// Cheapest deadline-feasible candidate; ties go to the faster plan, then to
// the earlier recording. The baseline must be recorded first.
InterPlan InterPlanner::choose(const std::vector<Candidate>& recorded) const {
    const Candidate* best = nullptr;
    for (const Candidate& c : recorded) {
        if (!within_deadline(c.runtime)) continue;
        if (!best || c.cost.total < best->cost.total ||
            (c.cost.total == best->cost.total && c.runtime < best->runtime)) {
            best = &c;
        }
    }
    if (best) return finish(*best);
    InterPlan plan = finish(recorded.front());
    plan.warnings.push_back("deadline exceeded by baseline");
    return plan;
}

InterPlan InterPlanner::greedy() const {
    const std::size_t nq = workload_.query_count();
    const Candidate baseline = make_candidate(std::vector<char>(workload_.table_count(), 0), std::vector<char>(nq, 0));

    Search s(*this);
    std::vector<Search::Snapshot> recorded;
    s.reduce();
    recorded.push_back(s.snapshot());
    while (s.pin_weakest()) {
        s.reduce();
        recorded.push_back(s.snapshot());
    }

    // Same rule as choose(): cheapest feasible, then faster, then earlier.
    const Search::Snapshot* best = nullptr;
    const bool baseline_ok = within_deadline(baseline.runtime);
    for (const Search::Snapshot& r : recorded) {
        if (!within_deadline(r.runtime)) continue;
        if (!best || r.cost.total < best->cost.total ||
            (r.cost.total == best->cost.total && r.runtime < best->runtime)) {
            best = &r;
        }
    }
    const bool beats_baseline =
        best && (!baseline_ok || best->cost.total < baseline.cost.total ||
                 (best->cost.total == baseline.cost.total && best->runtime < baseline.runtime));
    if (!beats_baseline) return choose({baseline});

    std::vector<char> queries(nq, 0);
    for (std::size_t q = 0; q < nq; ++q) queries[q] = sigma_[q] > kZeroMoney;
    for (std::size_t i = 0; i < best->departures; ++i) queries[s.departed()[i]] = 0;
    return finish(candidate_for_queries(queries));
}

InterPlan InterPlanner::optimal() const {
    const std::size_t nt = workload_.table_count();
    const std::size_t nq = workload_.query_count();
    const std::size_t source = 0;
    const std::size_t sink = 1;
    auto table_node = [](std::size_t t) { return 2 + t; };
    auto query_node = [nt](std::size_t q) { return 2 + nt + q; };

    MaxFlow::Capacity finite_total = 0;
    for (Money m : mu_) finite_total += m.micros();
    for (Money s : sigma_) {
        if (s > kZeroMoney) finite_total += s.micros();
    }
    const MaxFlow::Capacity infinite = finite_total + 1;

    MaxFlow flow(2 + nt + nq);
    for (std::size_t t = 0; t < nt; ++t) flow.add_edge(source, table_node(t), mu_[t].micros());
    for (std::size_t q = 0; q < nq; ++q) {
        if (sigma_[q] <= kZeroMoney) continue;
        flow.add_edge(query_node(q), sink, sigma_[q].micros());
        for (std::size_t t : workload_.scans_of(q)) flow.add_edge(table_node(t), query_node(q), infinite);
    }
    flow.solve(source, sink);

    // Sink side of the cut migrates.
    const auto& source_side = flow.source_side();
    std::vector<char> queries(nq, 0);
    for (std::size_t q = 0; q < nq; ++q) {
        queries[q] = sigma_[q] > kZeroMoney && !source_side[query_node(q)];
    }
    Candidate best = candidate_for_queries(queries);
    if (within_deadline(best.runtime)) return finish(best);

    InterPlan fallback = greedy();
    fallback.warnings.insert(fallback.warnings.begin(), "min-cut plan violates deadline; used greedy deadline search");
    return fallback;
}

InterPlan InterPlanner::brute_force() const {
    const std::size_t nt = workload_.table_count();
    const std::size_t nq = workload_.query_count();
    if (nt > kBruteForceTableLimit) {
        throw CapacityError("instance too large for oracle: " + std::to_string(nt) + " tables (limit " +
                            std::to_string(kBruteForceTableLimit) + ")");
    }
    std::vector<std::uint32_t> need(nq, 0);
    for (std::size_t q = 0; q < nq; ++q) {
        for (std::size_t t : workload_.scans_of(q)) need[q] |= std::uint32_t{1} << t;
    }

    // Only the incumbent is kept; 2^20 recorded plans would not fit in memory.
    std::vector<Candidate> recorded;
    recorded.push_back(make_candidate(std::vector<char>(nt, 0), std::vector<char>(nq, 0)));
    std::vector<char> queries(nq, 0);
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << nt); ++mask) {
        bool any = false;
        for (std::size_t q = 0; q < nq; ++q) {
            queries[q] = sigma_[q] > kZeroMoney && (need[q] & ~mask) == 0;
            any = any || queries[q];
        }
        // Subsets that unlock no query are dominated by the empty set.
        if (!any) continue;
        Candidate c = candidate_for_queries(queries);
        if (!within_deadline(c.runtime)) continue;
        if (recorded.size() == 1) {
            recorded.push_back(std::move(c));
            continue;
        }
        const Candidate& best = recorded.back();
        if (c.cost.total < best.cost.total || (c.cost.total == best.cost.total && c.runtime < best.runtime)) {
            recorded.back() = std::move(c);
        }
    }
    return choose(recorded);
}

InterPlan InterPlanner::evaluate(const std::vector<std::string>& tables,
                                 const std::vector<std::string>& queries) const {
    std::vector<char> tmask(workload_.table_count(), 0);
    std::vector<char> qmask(workload_.query_count(), 0);
    for (const std::string& name : tables) {
        auto t = workload_.table_index(name);
        if (!t) throw InputError("not found: table '" + name + "'");
        tmask[*t] = 1;
    }
    for (const std::string& id : queries) {
        auto q = workload_.query_index(id);
        if (!q) throw InputError("not found: query '" + id + "'");
        qmask[*q] = 1;
        for (std::size_t t : workload_.scans_of(*q)) {
            if (!tmask[t]) {
                throw InputError("incoherent plan: query '" + id + "' needs table '" + workload_.tables()[t].name +
                                 "' which is not migrated");
            }
        }
    }
    return finish(make_candidate(tmask, qmask));
}

Reduction reduce_plan(const WorkloadProfile& workload, const PriceBook& prices) {
    return InterPlanner(workload, prices).reduce();
}

InterPlan greedy_plan(const WorkloadProfile& workload, const PriceBook& prices, PlannerOptions options) {
    return InterPlanner(workload, prices, options).greedy();
}

InterPlan optimal_plan(const WorkloadProfile& workload, const PriceBook& prices, PlannerOptions options) {
    return InterPlanner(workload, prices, options).optimal();
}

InterPlan brute_force_plan(const WorkloadProfile& workload, const PriceBook& prices, PlannerOptions options) {
    return InterPlanner(workload, prices, options).brute_force();
}

InterPlan plan_cost_runtime(const WorkloadProfile& workload, const PriceBook& prices,
                            const std::vector<std::string>& tables, const std::vector<std::string>& queries,
                            PlannerOptions options) {
    return InterPlanner(workload, prices, options).evaluate(tables, queries);
}

}  // namespace cloudplan
