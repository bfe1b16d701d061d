#include "cloudplan/report.hpp"

namespace cloudplan {

using nlohmann::json;

json plan_to_json(const InterPlan& plan) {
    json out = json::object();
    out["plan_type"] = std::string(to_string(plan.plan_type));
    out["migrate_tables"] = plan.migrate_tables;
    out["migrate_queries"] = plan.migrate_queries;
    out["cost"] = {{"migration", plan.cost.migration.to_string()},
                   {"moved_queries", plan.cost.moved_queries.to_string()},
                   {"remaining_queries", plan.cost.remaining_queries.to_string()},
                   {"total", plan.cost.total.to_string()}};
    out["baseline_total"] = plan.baseline_cost.to_string();
    out["savings"] = plan.savings().to_string();
    out["savings_pct"] = plan.savings_pct();
    out["runtime_s"] = plan.runtime_s;
    out["baseline_runtime_s"] = plan.baseline_runtime_s;
    out["deadline_met"] = plan.deadline_met;
    if (!plan.warnings.empty()) out["warnings"] = plan.warnings;
    return out;
}

namespace {

json evaluation_to_json(const CutEvaluation& e) {
    json out = {{"node", e.node},
                {"opportunity", e.opportunity.to_string()},
                {"fr_evaluated", e.fr_evaluated},
                {"fr_s", e.fr_s},
                {"plan_cost", e.plan_cost.to_string()},
                {"runtime_s", e.runtime_s},
                {"feasible", e.feasible}};
    out["actual_savings"] = e.actual_savings ? json(e.actual_savings->to_string()) : json(nullptr);
    return out;
}

}  // namespace

json intra_result_to_json(const IntraResult& r) {
    json out = json::object();
    out["cut"] = r.chosen ? json(r.chosen->node) : json("baseline");
    out["actual_savings"] = r.chosen ? r.chosen->actual_savings->to_string() : Money{}.to_string();
    out["plan_cost"] = r.plan_cost.to_string();
    out["baseline_cost"] = r.baseline_cost.to_string();
    out["runtime_s"] = r.runtime_s;
    out["baseline_runtime_s"] = r.baseline_runtime_s;
    out["initial_candidates"] = r.initial_candidates;
    out["fr_evaluations"] = r.fr_evaluations;
    out["search_cost"] = r.search_cost.to_string();
    json evals = json::array();
    for (const CutEvaluation& e : r.evaluations) evals.push_back(evaluation_to_json(e));
    out["evaluations"] = std::move(evals);
    if (!r.warnings.empty()) out["warnings"] = r.warnings;
    return out;
}

}  // namespace cloudplan
