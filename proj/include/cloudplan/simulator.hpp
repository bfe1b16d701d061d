#pragma once

#include "cloudplan/cost_model.hpp"
#include "cloudplan/inter_planner.hpp"
#include "cloudplan/money.hpp"
#include "cloudplan/workload.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cloudplan {

enum class Solver { Greedy, MinCut, BruteForce };
Solver solver_from_string(std::string_view text);
std::string_view to_string(Solver solver);

InterPlan run_solver(Solver solver, const WorkloadProfile& workload, const PriceBook& prices,
                     PlannerOptions options = {});

enum class VariedPrice { PByte, Egress };
VariedPrice varied_price_from_string(std::string_view text);
std::string_view to_string(VariedPrice varied);

/// Price what-if grid over one workload. Grid values are in the human unit
/// of the varied field, $/TB for both.
struct SweepSpec {
    VariedPrice varied = VariedPrice::Egress;
    std::vector<double> grid;
    PriceBook prices;
    Solver solver = Solver::Greedy;
    PlannerOptions options;

    /// Non-empty, strictly increasing, non-negative.
    void validate() const;
};

struct SweepRow {
    double price = 0;
    PlanType plan_type = PlanType::SourceOnly;
    double savings_pct = 0;
    double speedup_pct = 0;  ///< negative when the plan is slower than the baseline
    std::size_t migrated_tables = 0;
    std::size_t migrated_queries = 0;
    Money total_cost;
    double runtime_s = 0;
    Money baseline_cost;
    double baseline_runtime_s = 0;
};

/// Applies `spec.prices` with the varied field replaced by `price` ($/TB).
PriceBook prices_at(const SweepSpec& spec, double price);

/// Rescales the per-byte backend's measured costs from the `from` per-byte
/// price to `to`, keeping the implied bytes scanned fixed.
WorkloadProfile reprice_per_byte(const WorkloadProfile& workload, long double from, long double to);

/// One row per grid point, in grid order. Points are independent.
std::vector<SweepRow> run_sweep(const WorkloadProfile& workload, const SweepSpec& spec);

/// Header plus one line per row; byte-stable for identical input.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// Workload runs needed before cumulative savings cover the profiling bill.
/// Empty when the plan saves nothing.
std::optional<std::uint64_t> payback_iterations(Money profiling_cost, Money baseline_cost, Money plan_cost);

struct GeneratorSpec {
    std::uint64_t seed = 0;
    std::size_t n_tables = 10;
    std::size_t n_queries = 20;
    double cpu_bound_fraction = 0.5;
    std::uint64_t min_table_bytes = 1'000'000'000ULL;
    std::uint64_t max_table_bytes = 500'000'000'000ULL;
    BackendKind source_backend = BackendKind::PerByte;
    /// Prices used to turn scanned bytes and compute seconds into costs.
    PriceBook prices = PriceBook::defaults();
};

/// Deterministic synthetic workload. IO-bound queries are cheaper on the
/// pay-per-compute backend, CPU-bound ones on the pay-per-byte backend.
WorkloadProfile generate_workload(const GeneratorSpec& spec);

}  // namespace cloudplan
