#pragma once

#include "cloudplan/inter_planner.hpp"
#include "cloudplan/intra_planner.hpp"

#include <json.hpp>

namespace cloudplan {

/// Plan document: plan_type, migrate_tables, migrate_queries, cost{...},
/// baseline_total, savings_pct, runtime_s, baseline_runtime_s, deadline_met.
nlohmann::json plan_to_json(const InterPlan& plan);

/// Chosen cut (or "baseline"), a_u, costs, search-cost ledger and the
/// ordered f_r evaluations.
nlohmann::json intra_result_to_json(const IntraResult& result);

}  // namespace cloudplan
