// Python bindings. Documents go in as JSON text, results come back as dicts.
#include "cloudplan/cost_model.hpp"
#include "cloudplan/errors.hpp"
#include "cloudplan/inter_planner.hpp"
#include "cloudplan/intra_planner.hpp"
#include "cloudplan/json_io.hpp"
#include "cloudplan/report.hpp"
#include "cloudplan/simulator.hpp"
#include "cloudplan/workload.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace cloudplan;

namespace {

py::object to_python(const nlohmann::json& doc) {
    return py::module_::import("json").attr("loads")(doc.dump());
}

PlannerOptions planner_options(std::optional<double> bandwidth) {
    PlannerOptions options = PlannerOptions::from_environment();
    if (bandwidth) {
        if (!(*bandwidth > 0)) throw InputError("bandwidth must be positive");
        options.bandwidth_bytes_per_s = *bandwidth;
    }
    return options;
}

// InterPlanner keeps a reference to its workload, so the Python object owns it.
struct Workload {
    std::shared_ptr<const WorkloadProfile> profile;

    const WorkloadProfile& get() const { return *profile; }
    Workload with_deadline(std::optional<double> deadline) const {
        return {std::make_shared<const WorkloadProfile>(profile->with_deadline(deadline))};
    }
};

Workload wrap(WorkloadProfile w) { return {std::make_shared<const WorkloadProfile>(std::move(w))}; }

const WorkloadProfile& pick_deadline(const Workload& w, std::optional<double> deadline, Workload& scratch) {
    if (!deadline) return w.get();
    scratch = w.with_deadline(deadline);
    return scratch.get();
}

py::list bounds_list(const std::vector<BoundValue>& values) {
    py::list out;
    for (const auto& b : values) out.append(py::make_tuple(b.subject, b.value.to_string()));
    return out;
}

}  // namespace

PYBIND11_MODULE(_cloudplan, m) {
    m.doc() = "Cost-based planning of query migration between clouds";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);

    py::class_<PriceBook>(m, "PriceBook")
        .def(py::init<>())
        .def_static("defaults", &PriceBook::defaults)
        .def_property("p_blob", [](const PriceBook& p) { return double(p.p_blob); },
                      [](PriceBook& p, double v) { p.p_blob = v; })
        .def_property("p_read", [](const PriceBook& p) { return double(p.p_read); },
                      [](PriceBook& p, double v) { p.p_read = v; })
        .def_property("p_write", [](const PriceBook& p) { return double(p.p_write); },
                      [](PriceBook& p, double v) { p.p_write = v; })
        .def_property("p_sec", [](const PriceBook& p) { return double(p.p_sec); },
                      [](PriceBook& p, double v) { p.p_sec = v; })
        .def_property("p_byte", [](const PriceBook& p) { return double(p.p_byte); },
                      [](PriceBook& p, double v) { p.p_byte = v; })
        .def_property("egress", [](const PriceBook& p) { return double(p.egress); },
                      [](PriceBook& p, double v) { p.egress = v; })
        .def("validate", &PriceBook::validate)
        .def("to_dict", [](const PriceBook& p) { return to_python(json_io::prices_to_json(p)); });

    m.def("load_prices", [](const std::string& text) { return json_io::load_prices(text); }, py::arg("document"),
          "Parse a price document (human units) into a PriceBook.");

    py::class_<Workload>(m, "Workload")
        .def_property_readonly("table_count", [](const Workload& w) { return w.get().table_count(); })
        .def_property_readonly("query_count", [](const Workload& w) { return w.get().query_count(); })
        .def_property_readonly("edge_count", [](const Workload& w) { return w.get().edge_count(); })
        .def_property_readonly("deadline", [](const Workload& w) { return w.get().deadline(); })
        .def_property_readonly("tables",
                               [](const Workload& w) {
                                   std::vector<std::string> out;
                                   for (const auto& t : w.get().tables()) out.push_back(t.name);
                                   return out;
                               })
        .def_property_readonly("queries",
                               [](const Workload& w) {
                                   std::vector<std::string> out;
                                   for (const auto& q : w.get().queries()) out.push_back(q.id);
                                   return out;
                               })
        .def(
            "neighbors",
            [](const Workload& w, const std::string& side, const std::string& id) {
                if (side != "table" && side != "query") throw InputError("side must be 'table' or 'query'");
                return w.get().neighbors(side == "table" ? Side::Table : Side::Query, id);
            },
            py::arg("side"), py::arg("id"))
        .def("with_deadline", &Workload::with_deadline, py::arg("deadline_s"))
        .def("serialize", [](const Workload& w) { return serialize_workload(w.get()); });

    m.def("load_workload", [](const std::string& text) { return wrap(load_workload(text)); }, py::arg("document"));

    m.def(
        "plan",
        [](const Workload& w, const PriceBook& prices, const std::string& solver, std::optional<double> bandwidth,
           std::optional<double> deadline) {
            Workload scratch;
            const auto& profile = pick_deadline(w, deadline, scratch);
            return to_python(
                plan_to_json(run_solver(solver_from_string(solver), profile, prices, planner_options(bandwidth))));
        },
        py::arg("workload"), py::arg("prices"), py::arg("solver") = "greedy", py::arg("bandwidth") = py::none(),
        py::arg("deadline") = py::none(), "Choose which tables and queries to migrate.");

    m.def(
        "plan_cost_runtime",
        [](const Workload& w, const PriceBook& prices, const std::vector<std::string>& tables,
           const std::vector<std::string>& queries, std::optional<double> bandwidth) {
            return to_python(plan_to_json(
                cloudplan::plan_cost_runtime(w.get(), prices, tables, queries, planner_options(bandwidth))));
        },
        py::arg("workload"), py::arg("prices"), py::arg("tables"), py::arg("queries"),
        py::arg("bandwidth") = py::none());

    m.def(
        "reduce",
        [](const Workload& w, const PriceBook& prices) {
            const InterPlanner planner(w.get(), prices);
            const Reduction r = planner.reduce();
            py::dict out;
            out["remaining_tables"] = r.remaining_tables;
            out["remaining_queries"] = r.remaining_queries;
            out["forced_tables"] = r.forced_tables;
            out["forced_queries"] = r.forced_queries;
            out["table_bounds"] = bounds_list(planner.table_bounds());
            out["query_bounds"] = bounds_list(planner.query_bounds());
            return out;
        },
        py::arg("workload"), py::arg("prices"));

    py::class_<QueryDag>(m, "QueryDag")
        .def_property_readonly("query_id", &QueryDag::query_id)
        .def_property_readonly("size", &QueryDag::size)
        .def_property_readonly("baseline_cost", [](const QueryDag& d) { return d.baseline_cost().to_string(); })
        .def_property_readonly("baseline_runtime", &QueryDag::baseline_runtime)
        .def_property_readonly("has_full_runtime_oracle", &QueryDag::has_full_runtime_oracle);

    m.def("load_query_dag", [](const std::string& text) { return load_query_dag(text); }, py::arg("document"));

    m.def(
        "intra_plan",
        [](const QueryDag& dag, const PriceBook& prices, std::size_t max_iters, bool scan_intermediate,
           std::optional<double> deadline, std::optional<std::function<double(const std::string&)>> oracle,
           bool exhaustive) {
            IntraOptions options;
            options.max_iters = max_iters;
            options.scan_intermediate = scan_intermediate;
            options.deadline_s = deadline;
            options.planner = PlannerOptions::from_environment();
            IntraResult result;
            if (exhaustive) {
                result = exhaustive_cuts(dag, prices, options);
            } else {
                RuntimeOracle fn;
                if (oracle) fn = [f = *oracle](const DagNode& node) { return f(node.id); };
                result = cloudplan::intra_plan(dag, prices, options, fn);
            }
            nlohmann::json doc = intra_result_to_json(result);
            doc["query_id"] = dag.query_id();
            return to_python(doc);
        },
        py::arg("dag"), py::arg("prices"), py::arg("max_iters") = 0, py::arg("scan_intermediate") = true,
        py::arg("deadline") = py::none(), py::arg("oracle") = py::none(), py::arg("exhaustive") = false,
        "Pick a cut point for a single query. `oracle(node_id)` supplies missing upstream runtimes.");

    m.def(
        "sweep",
        [](const Workload& w, const PriceBook& prices, const std::string& varied, const std::vector<double>& grid,
           const std::string& solver, std::optional<double> bandwidth) {
            SweepSpec spec;
            spec.varied = varied_price_from_string(varied);
            spec.grid = grid;
            spec.prices = prices;
            spec.solver = solver_from_string(solver);
            spec.options = planner_options(bandwidth);
            py::list rows;
            for (const auto& r : run_sweep(w.get(), spec)) {
                py::dict row;
                row["price"] = r.price;
                row["plan_type"] = std::string(to_string(r.plan_type));
                row["savings_pct"] = r.savings_pct;
                row["speedup_pct"] = r.speedup_pct;
                row["migrated_tables"] = r.migrated_tables;
                row["migrated_queries"] = r.migrated_queries;
                row["total_cost"] = r.total_cost.to_string();
                row["runtime_s"] = r.runtime_s;
                row["baseline_cost"] = r.baseline_cost.to_string();
                row["baseline_runtime_s"] = r.baseline_runtime_s;
                rows.append(row);
            }
            return rows;
        },
        py::arg("workload"), py::arg("prices"), py::arg("varied"), py::arg("grid"), py::arg("solver") = "greedy",
        py::arg("bandwidth") = py::none());

    m.def(
        "payback",
        [](const std::string& profiling, const std::string& baseline, const std::string& plan_cost) {
            return payback_iterations(Money::parse(profiling), Money::parse(baseline), Money::parse(plan_cost));
        },
        py::arg("profiling_cost"), py::arg("baseline_cost"), py::arg("plan_cost"),
        "Runs needed before profiling pays for itself, or None if the plan never saves.");

    m.def(
        "breakeven",
        [](double runtime_s, const PriceBook& prices) {
            if (runtime_s < 0) throw InputError("negative measurement: runtime");
            return double(break_even_scan_bytes(runtime_s, prices));
        },
        py::arg("runtime_s"), py::arg("prices"), "Scan bytes at which per-byte and per-compute costs match.");

    m.def(
        "generate_workload",
        [](std::uint64_t seed, std::size_t n_tables, std::size_t n_queries, double cpu_bound_fraction,
           std::uint64_t min_table_bytes, std::uint64_t max_table_bytes, const std::string& source,
           std::optional<PriceBook> prices) {
            GeneratorSpec spec;
            spec.seed = seed;
            spec.n_tables = n_tables;
            spec.n_queries = n_queries;
            spec.cpu_bound_fraction = cpu_bound_fraction;
            spec.min_table_bytes = min_table_bytes;
            spec.max_table_bytes = max_table_bytes;
            spec.source_backend = backend_from_string(source);
            if (prices) spec.prices = *prices;
            return wrap(cloudplan::generate_workload(spec));
        },
        py::arg("seed"), py::arg("n_tables") = 10, py::arg("n_queries") = 20, py::arg("cpu_bound_fraction") = 0.5,
        py::arg("min_table_bytes") = 1'000'000'000ULL, py::arg("max_table_bytes") = 500'000'000'000ULL,
        py::arg("source") = "PER_BYTE", py::arg("prices") = py::none());
}
