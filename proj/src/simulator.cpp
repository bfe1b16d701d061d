#include "cloudplan/simulator.hpp"

#include "cloudplan/errors.hpp"
#include "cloudplan/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace cloudplan {

Solver solver_from_string(std::string_view text) {
    if (text == "greedy") return Solver::Greedy;
    if (text == "mincut") return Solver::MinCut;
    if (text == "brute") return Solver::BruteForce;
    throw InputError("unknown solver '" + std::string(text) + "' (expected greedy, mincut or brute)");
}

std::string_view to_string(Solver solver) {
    switch (solver) {
    case Solver::Greedy: return "greedy";
    case Solver::MinCut: return "mincut";
    case Solver::BruteForce: return "brute";
    }
    return "unknown";
}

InterPlan run_solver(Solver solver, const WorkloadProfile& workload, const PriceBook& prices, PlannerOptions options) {
    const InterPlanner planner(workload, prices, options);
    switch (solver) {
    case Solver::Greedy: return planner.greedy();
    case Solver::MinCut: return planner.optimal();
    case Solver::BruteForce: return planner.brute_force();
    }
    return planner.greedy();
}

VariedPrice varied_price_from_string(std::string_view text) {
    if (text == "p_byte" || text == "P_BYTE") return VariedPrice::PByte;
    if (text == "egress" || text == "EGRESS") return VariedPrice::Egress;
    throw InputError("unknown varied price '" + std::string(text) + "' (expected p_byte or egress)");
}

std::string_view to_string(VariedPrice varied) {
    return varied == VariedPrice::PByte ? "p_byte" : "egress";
}

void SweepSpec::validate() const {
    if (grid.empty()) throw InputError("sweep grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0) throw InputError("sweep grid values must be non-negative");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw InputError("sweep grid must be strictly increasing");
    }
    prices.validate();
}

PriceBook prices_at(const SweepSpec& spec, double price) {
    PriceBook p = spec.prices;
    const long double per_byte = static_cast<long double>(price) / units::kTB;
    if (spec.varied == VariedPrice::PByte) {
        p.p_byte = per_byte;
    } else {
        p.egress = per_byte;
    }
    return p;
}

WorkloadProfile reprice_per_byte(const WorkloadProfile& workload, long double from, long double to) {
    if (from == to) return workload;
    if (!(from > 0)) throw InputError("cannot rescale per-byte costs from a zero per-byte price");
    const long double factor = to / from;
    const bool source_is_per_byte = workload.source_backend() == BackendKind::PerByte;
    std::vector<TableRef> tables(workload.tables().begin(), workload.tables().end());
    std::vector<QueryProfile> queries(workload.queries().begin(), workload.queries().end());
    for (QueryProfile& q : queries) {
        Money& per_byte_cost = source_is_per_byte ? q.cost_src : q.cost_dest;
        per_byte_cost = Money::from_dollars(per_byte_cost.dollars() * factor);
    }
    return WorkloadProfile::build(workload.source_backend(), workload.deadline(), std::move(tables),
                                  std::move(queries));
}

std::vector<SweepRow> run_sweep(const WorkloadProfile& workload, const SweepSpec& spec) {
    spec.validate();
    std::vector<SweepRow> rows;
    rows.reserve(spec.grid.size());
    for (double price : spec.grid) {
        const PriceBook prices = prices_at(spec, price);
        const InterPlan plan =
            spec.varied == VariedPrice::PByte
                ? run_solver(spec.solver, reprice_per_byte(workload, spec.prices.p_byte, prices.p_byte), prices,
                             spec.options)
                : run_solver(spec.solver, workload, prices, spec.options);
        SweepRow row;
        row.price = price;
        row.plan_type = plan.plan_type;
        row.savings_pct = plan.savings_pct();
        row.speedup_pct = plan.speedup_pct();
        row.migrated_tables = plan.migrate_tables.size();
        row.migrated_queries = plan.migrate_queries.size();
        row.total_cost = plan.cost.total;
        row.runtime_s = plan.runtime_s;
        row.baseline_cost = plan.baseline_cost;
        row.baseline_runtime_s = plan.baseline_runtime_s;
        rows.push_back(row);
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "price,plan_type,savings_pct,speedup_pct,migrated_tables,migrated_queries,total_cost,runtime_s\n";
    char buf[256];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%.6f,%zu,%zu,%s,%.6f\n", json_io::format_number(r.price).c_str(),
                      std::string(to_string(r.plan_type)).c_str(), r.savings_pct, r.speedup_pct, r.migrated_tables,
                      r.migrated_queries, r.total_cost.to_string().c_str(), r.runtime_s);
        out += buf;
    }
    return out;
}

std::optional<std::uint64_t> payback_iterations(Money profiling_cost, Money baseline_cost, Money plan_cost) {
    if (profiling_cost < kZeroMoney || baseline_cost < kZeroMoney || plan_cost < kZeroMoney) {
        throw InputError("negative measurement: payback inputs");
    }
    const std::int64_t per_run = (baseline_cost - plan_cost).micros();
    if (per_run <= 0) return std::nullopt;
    const std::int64_t cost = profiling_cost.micros();
    return static_cast<std::uint64_t>(cost / per_run + (cost % per_run != 0 ? 1 : 0));
}

namespace {

// std::uniform_*_distribution output differs between standard libraries; the
// engine itself is fully specified, so map its raw output by hand.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : engine_(seed) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double between(double lo, double hi) { return lo + (hi - lo) * unit(); }
    std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : engine_() % bound; }

private:
    std::mt19937_64 engine_;
};

std::string padded(char prefix, std::size_t i, std::size_t count) {
    const int width = static_cast<int>(std::to_string(count > 0 ? count - 1 : 0).size());
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i);
    return buf;
}

}  // namespace

WorkloadProfile generate_workload(const GeneratorSpec& spec) {
    if (spec.n_tables < 1 || spec.n_queries < 1) throw InputError("generator needs at least one table and one query");
    if (!(spec.cpu_bound_fraction >= 0 && spec.cpu_bound_fraction <= 1)) {
        throw InputError("cpu_bound_fraction must lie in [0, 1]");
    }
    if (spec.min_table_bytes < 1 || spec.max_table_bytes < spec.min_table_bytes) {
        throw InputError("table size range must satisfy 1 <= min <= max");
    }
    spec.prices.validate();
    if (!(spec.prices.p_byte > 0) || !(spec.prices.p_sec > 0)) {
        throw InputError("generator needs positive per-byte and per-compute prices");
    }

    Draw draw(spec.seed);
    std::vector<TableRef> tables;
    for (std::size_t t = 0; t < spec.n_tables; ++t) {
        const std::uint64_t span = spec.max_table_bytes - spec.min_table_bytes;
        const auto size = spec.min_table_bytes + static_cast<std::uint64_t>(std::floor(draw.unit() * (span + 1.0)));
        tables.push_back({padded('t', t, spec.n_tables), std::min(size, spec.max_table_bytes)});
    }

    std::vector<std::size_t> pool(spec.n_tables);
    std::vector<QueryProfile> queries;
    const std::size_t max_fanout = std::min<std::size_t>(4, spec.n_tables);
    for (std::size_t i = 0; i < spec.n_queries; ++i) {
        QueryProfile q;
        q.id = padded('q', i, spec.n_queries);
        const std::size_t fanout = 1 + draw.below(max_fanout);
        std::iota(pool.begin(), pool.end(), 0);
        long double scanned = 0;
        for (std::size_t k = 0; k < fanout; ++k) {
            const std::size_t j = k + draw.below(pool.size() - k);
            std::swap(pool[k], pool[j]);
            const TableRef& t = tables[pool[k]];
            q.scans.push_back(t.name);
            scanned += static_cast<long double>(t.size_bytes) * draw.between(0.2, 1.0);
        }
        scanned *= draw.between(1.0, 8.0);

        const bool cpu_bound = draw.unit() < spec.cpu_bound_fraction;
        Money per_byte = per_byte_query_cost(scanned, spec.prices);
        if (per_byte <= kZeroMoney) per_byte = Money::from_micros(2);
        const double ratio = cpu_bound ? draw.between(1.25, 6.0) : draw.between(0.05, 0.8);
        Money per_compute = Money::from_dollars(per_byte.dollars() * ratio);
        // Keep the IO/CPU split strict after rounding to whole micro-dollars.
        if (cpu_bound && per_compute <= per_byte) per_compute = per_byte + Money::from_micros(1);
        if (!cpu_bound && per_compute >= per_byte) per_compute = per_byte - Money::from_micros(1);
        const double compute_runtime = static_cast<double>(per_compute.dollars() / spec.prices.p_sec);
        const double per_byte_runtime = compute_runtime * draw.between(0.3, 1.5);

        if (spec.source_backend == BackendKind::PerByte) {
            q.cost_src = per_byte;
            q.runtime_src_s = per_byte_runtime;
            q.cost_dest = per_compute;
            q.runtime_dest_s = compute_runtime;
        } else {
            q.cost_src = per_compute;
            q.runtime_src_s = compute_runtime;
            q.cost_dest = per_byte;
            q.runtime_dest_s = per_byte_runtime;
        }
        queries.push_back(std::move(q));
    }
    return WorkloadProfile::build(spec.source_backend, std::nullopt, std::move(tables), std::move(queries));
}

}  // namespace cloudplan
