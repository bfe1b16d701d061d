// cloudplan: batch front-end for the inter/intra-query planners and the
// price simulator.
//
// Exit codes: 0 success, 2 input error, 3 capability error (e.g. oracle size
// limit), 1 anything unexpected.

#include "cloudplan/cost_model.hpp"
#include "cloudplan/errors.hpp"
#include "cloudplan/inter_planner.hpp"
#include "cloudplan/intra_planner.hpp"
#include "cloudplan/json_io.hpp"
#include "cloudplan/report.hpp"
#include "cloudplan/simulator.hpp"
#include "cloudplan/workload.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using cloudplan::InputError;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCapacity = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

struct GlobalFlags {
    std::string prices_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::string report_path;
};

/// Collects what a run read and decided so the output can be audited later.
class RunReport {
public:
    explicit RunReport(std::string command) { doc_["command"] = std::move(command); }

    std::string load(const std::string& path, const char* role) {
        std::string content = read_file(path);
        doc_["inputs"].push_back({{"role", role}, {"path", path}, {"sha256", sha256_hex(content)}});
        return content;
    }
    void note_default_prices() {
        doc_["inputs"].push_back({{"role", "prices"}, {"path", nullptr}, {"sha256", nullptr}});
    }
    void set(const char* key, json value) { doc_[key] = std::move(value); }
    void warn(const std::vector<std::string>& warnings) {
        for (const auto& w : warnings) doc_["warnings"].push_back(w);
    }
    void write(const std::string& path) const {
        if (!path.empty()) write_file(path, doc_.dump(2) + "\n");
    }

private:
    json doc_ = json::object();
};

cloudplan::PriceBook load_prices(RunReport& report, const GlobalFlags& g) {
    if (g.prices_path.empty()) {
        report.note_default_prices();
        return cloudplan::PriceBook::defaults();
    }
    return cloudplan::json_io::load_prices(report.load(g.prices_path, "prices"));
}

void emit(const GlobalFlags& g, const std::string& text) {
    if (g.out_path.empty()) {
        std::cout << text;
    } else {
        write_file(g.out_path, text);
    }
}

std::string echo(int argc, char** argv) {
    std::string out;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) out += ' ';
        out += argv[i];
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cloudplan: cost-driven placement of queries across two cloud backends"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    app.add_option("--prices", g.prices_path, "Price book JSON (defaults to built-in GCP/AWS prices)");
    app.add_option("--out", g.out_path, "Write the primary output here instead of stdout");
    app.add_option("--seed", g.seed, "Seed for commands that draw random numbers");
    app.add_option("--report", g.report_path, "Write an audit report (inputs, digests, decision) as JSON");

    // plan-inter
    std::string workload_path;
    std::string solver_name = "greedy";
    std::optional<double> deadline;
    std::string plot_prefix;
    auto* inter = app.add_subcommand("plan-inter", "Choose which tables and queries to migrate");
    inter->add_option("workload", workload_path, "Workload JSON")->required();
    inter->add_option("--solver", solver_name, "greedy | mincut | brute")->check(CLI::IsMember({"greedy", "mincut", "brute"}));
    inter->add_option("--deadline", deadline, "Workload runtime limit in seconds (overrides the file)");
    inter->add_option("--emit-plot-data", plot_prefix, "Write cost-vs-runtime series to <prefix>_cost_runtime.dat");

    // plan-intra
    std::string dag_path;
    std::size_t max_iters = 0;
    bool interactive = false;
    bool literal_scan = false;
    bool exhaustive = false;
    std::optional<double> intra_deadline;
    auto* intra = app.add_subcommand("plan-intra", "Search for a profitable cut inside one query plan");
    intra->add_option("dag", dag_path, "Query plan JSON")->required();
    intra->add_option("--max-iters", max_iters, "Iteration cap K (default: number of nodes)");
    intra->add_option("--deadline", intra_deadline, "Query runtime limit in seconds");
    intra->add_flag("--interactive", interactive, "Read missing f_r values from stdin, one per prompt");
    intra->add_flag("--literal-scan", literal_scan, "Do not bill the destination for scanning the shipped intermediate");
    intra->add_flag("--exhaustive", exhaustive, "Price every cut (oracle mode, nothing billed)");

    // sweep
    std::string sweep_workload;
    std::string vary;
    double from = 0;
    double to = 0;
    std::size_t steps = 0;
    std::string sweep_solver = "greedy";
    std::string sweep_plot;
    auto* sweep = app.add_subcommand("sweep", "Re-plan across a grid of per-byte or egress prices");
    sweep->add_option("workload", sweep_workload, "Workload JSON")->required();
    sweep->add_option("--vary", vary, "p_byte | egress")->required()->check(CLI::IsMember({"p_byte", "egress"}));
    sweep->add_option("--from", from, "First grid price ($/TB)")->required();
    sweep->add_option("--to", to, "Last grid price ($/TB)")->required();
    sweep->add_option("--steps", steps, "Number of grid points")->required();
    sweep->add_option("--solver", sweep_solver, "greedy | mincut | brute")->check(CLI::IsMember({"greedy", "mincut", "brute"}));
    sweep->add_option("--emit-plot-data", sweep_plot, "Write <prefix>_savings.dat and <prefix>_speedup.dat");

    // breakeven
    double runtime_s = 0;
    auto* breakeven = app.add_subcommand("breakeven", "Scan size where per-byte and per-compute costs match");
    breakeven->add_option("--runtime", runtime_s, "Query runtime in seconds")->required();

    // gen
    std::size_t gen_tables = 10;
    std::size_t gen_queries = 20;
    double gen_cpu = 0.5;
    std::uint64_t gen_min = cloudplan::GeneratorSpec{}.min_table_bytes;
    std::uint64_t gen_max = cloudplan::GeneratorSpec{}.max_table_bytes;
    std::string gen_source = "PER_BYTE";
    auto* gen = app.add_subcommand("gen", "Generate a deterministic synthetic workload");
    gen->add_option("--tables", gen_tables, "Number of tables");
    gen->add_option("--queries", gen_queries, "Number of queries");
    gen->add_option("--cpu-fraction", gen_cpu, "Fraction of CPU-bound queries in [0,1]");
    gen->add_option("--min-bytes", gen_min, "Smallest table size");
    gen->add_option("--max-bytes", gen_max, "Largest table size");
    gen->add_option("--source-backend", gen_source, "PER_BYTE | PER_COMPUTE")
        ->check(CLI::IsMember({"PER_BYTE", "PER_COMPUTE"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    RunReport report(echo(argc, argv));
    try {
        if (*inter) {
            const cloudplan::PriceBook prices = load_prices(report, g);
            cloudplan::WorkloadProfile workload = cloudplan::load_workload(report.load(workload_path, "workload"));
            if (deadline) workload = workload.with_deadline(deadline);
            const auto options = cloudplan::PlannerOptions::from_environment();
            const auto plan =
                cloudplan::run_solver(cloudplan::solver_from_string(solver_name), workload, prices, options);
            const json doc = cloudplan::plan_to_json(plan);
            emit(g, doc.dump(2) + "\n");
            if (!plot_prefix.empty()) {
                std::string series = "# runtime_s total_cost label\n";
                series += fmt(plan.baseline_runtime_s) + " " + plan.baseline_cost.to_string() + " baseline\n";
                series += fmt(plan.runtime_s) + " " + plan.cost.total.to_string() + " plan\n";
                write_file(plot_prefix + "_cost_runtime.dat", series);
            }
            report.set("solver", solver_name);
            report.set("bandwidth_bytes_per_s", static_cast<double>(options.bandwidth_bytes_per_s));
            report.set("plan", doc);
            report.warn(plan.warnings);
            for (const auto& w : plan.warnings) std::cerr << "warning: " << w << "\n";
        } else if (*intra) {
            const cloudplan::PriceBook prices = load_prices(report, g);
            const cloudplan::QueryDag dag = cloudplan::load_query_dag(report.load(dag_path, "query_plan"));
            cloudplan::IntraOptions options;
            options.scan_intermediate = !literal_scan;
            options.max_iters = max_iters;
            options.deadline_s = intra_deadline;
            options.planner = cloudplan::PlannerOptions::from_environment();
            if (!interactive && !dag.has_full_runtime_oracle()) {
                throw InputError("query plan lacks fr_s on some nodes; pass --interactive to supply them");
            }
            cloudplan::RuntimeOracle oracle;
            if (interactive) {
                oracle = [](const cloudplan::DagNode& node) {
                    std::cerr << "f_r(" << node.id << ") seconds? " << std::flush;
                    double value = 0;
                    if (!(std::cin >> value)) throw InputError("expected a runtime for node '" + node.id + "'");
                    return value;
                };
            }
            const auto result = exhaustive ? cloudplan::exhaustive_cuts(dag, prices, options)
                                           : cloudplan::intra_plan(dag, prices, options, oracle);
            json doc = cloudplan::intra_result_to_json(result);
            doc["query_id"] = dag.query_id();
            emit(g, doc.dump(2) + "\n");
            report.set("result", doc);
            report.warn(result.warnings);
            for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        } else if (*sweep) {
            if (to < from) throw InputError("inverted price range: --to is below --from");
            if (steps < 1) throw InputError("--steps must be at least 1");
            const cloudplan::PriceBook prices = load_prices(report, g);
            const auto workload = cloudplan::load_workload(report.load(sweep_workload, "workload"));
            cloudplan::SweepSpec spec;
            spec.varied = cloudplan::varied_price_from_string(vary);
            spec.prices = prices;
            spec.solver = cloudplan::solver_from_string(sweep_solver);
            spec.options = cloudplan::PlannerOptions::from_environment();
            for (std::size_t i = 0; i < steps; ++i) {
                spec.grid.push_back(steps == 1 ? from : from + (to - from) * static_cast<double>(i) / (steps - 1));
            }
            const auto rows = cloudplan::run_sweep(workload, spec);
            emit(g, cloudplan::sweep_to_csv(rows));
            if (!sweep_plot.empty()) {
                std::string savings = "# price savings_pct\n";
                std::string speedup = "# price speedup_pct\n";
                for (const auto& r : rows) {
                    const std::string x = cloudplan::json_io::format_number(r.price);
                    savings += x + " " + fmt(r.savings_pct) + "\n";
                    speedup += x + " " + fmt(r.speedup_pct) + "\n";
                }
                write_file(sweep_plot + "_savings.dat", savings);
                write_file(sweep_plot + "_speedup.dat", speedup);
            }
            report.set("rows", rows.size());
        } else if (*breakeven) {
            if (runtime_s < 0) throw InputError("negative measurement: --runtime");
            const cloudplan::PriceBook prices = load_prices(report, g);
            const long double bytes = cloudplan::break_even_scan_bytes(runtime_s, prices);
            json doc = {{"runtime_s", runtime_s},
                        {"bytes", static_cast<double>(bytes)},
                        {"tb", static_cast<double>(bytes / cloudplan::units::kTB)}};
            emit(g, doc.dump(2) + "\n");
            report.set("result", doc);
        } else if (*gen) {
            cloudplan::GeneratorSpec spec;
            spec.seed = g.seed.value_or(0);
            spec.n_tables = gen_tables;
            spec.n_queries = gen_queries;
            spec.cpu_bound_fraction = gen_cpu;
            spec.min_table_bytes = gen_min;
            spec.max_table_bytes = gen_max;
            spec.source_backend = cloudplan::backend_from_string(gen_source);
            spec.prices = load_prices(report, g);
            emit(g, cloudplan::serialize_workload(cloudplan::generate_workload(spec)));
            report.set("seed", spec.seed);
        }
        report.write(g.report_path);
    } catch (const cloudplan::CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
