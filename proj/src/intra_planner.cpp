#include "cloudplan/intra_planner.hpp"

#include "cloudplan/errors.hpp"
#include "cloudplan/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cloudplan {

QueryDag QueryDag::build(std::string query_id, Money baseline_cost_src, double baseline_runtime_src_s,
                         std::vector<DagNode> nodes) {
    QueryDag dag;
    dag.query_id_ = std::move(query_id);
    if (baseline_cost_src < kZeroMoney || !(baseline_runtime_src_s >= 0)) {
        throw InputError("negative measurement: query baseline");
    }
    dag.baseline_cost_ = baseline_cost_src;
    dag.baseline_runtime_ = baseline_runtime_src_s;
    if (nodes.empty()) throw InputError("query plan has no nodes");

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!dag.index_.emplace(nodes[i].id, i).second) {
            throw InputError("duplicate identifier: node '" + nodes[i].id + "'");
        }
    }
    const std::size_t n = nodes.size();
    std::vector<std::vector<std::size_t>> children(n);
    std::vector<std::size_t> parent_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        DagNode& v = nodes[i];
        if (!(v.cardinality >= 0) || !(v.row_size_bytes >= 0) || (v.upstream_runtime_s && !(*v.upstream_runtime_s >= 0)) ||
            (v.downstream_runtime_s && !(*v.downstream_runtime_s >= 0))) {
            throw InputError("negative measurement: node '" + v.id + "'");
        }
        std::sort(v.children.begin(), v.children.end());
        v.children.erase(std::unique(v.children.begin(), v.children.end()), v.children.end());
        for (const std::string& c : v.children) {
            auto it = dag.index_.find(c);
            if (it == dag.index_.end()) {
                throw InputError("dangling edge: node '" + v.id + "' reads unknown node '" + c + "'");
            }
            children[i].push_back(it->second);
            ++parent_count[it->second];
        }
        if (v.children.empty() && !v.base_table) {
            throw InputError("leaf node '" + v.id + "' has no base table");
        }
        if (!v.children.empty() && v.base_table) {
            throw InputError("inner node '" + v.id + "' cannot carry a base table");
        }
    }

    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i) {
        if (parent_count[i] == 0) roots.push_back(i);
    }
    if (roots.size() != 1) {
        throw InputError("query plan must have exactly one root, found " + std::to_string(roots.size()));
    }
    dag.root_ = roots.front();

    // Kahn's algorithm from the leaves; leftovers mean a cycle.
    std::vector<std::size_t> pending(n);
    std::vector<std::vector<std::size_t>> parents(n);
    for (std::size_t i = 0; i < n; ++i) {
        pending[i] = children[i].size();
        for (std::size_t c : children[i]) parents[c].push_back(i);
    }
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i) {
        if (pending[i] == 0) order.push_back(i);
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (std::size_t p : parents[order[head]]) {
            if (--pending[p] == 0) order.push_back(p);
        }
    }
    if (order.size() != n) throw InputError("query plan contains a cycle");

    dag.upstream_.assign(n, std::vector<char>(n, 0));
    for (std::size_t v : order) {
        dag.upstream_[v][v] = 1;
        for (std::size_t c : children[v]) {
            for (std::size_t u = 0; u < n; ++u) dag.upstream_[v][u] |= dag.upstream_[c][u];
        }
    }

    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t c : children[v]) {
            const auto& fv = nodes[v].upstream_runtime_s;
            const auto& fc = nodes[c].upstream_runtime_s;
            if (fv && fc && *fv < *fc) {
                throw InputError("runtime oracle violates monotonicity: f_r(" + nodes[v].id + ") < f_r(" +
                                 nodes[c].id + ")");
            }
        }
    }
    dag.nodes_ = std::move(nodes);
    return dag;
}

std::optional<std::size_t> QueryDag::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t QueryDag::require(std::string_view id) const {
    auto i = index_of(id);
    if (!i) throw InputError("not found: node '" + std::string(id) + "'");
    return *i;
}

std::vector<std::size_t> QueryDag::downstream_leaves(std::size_t v) const {
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < nodes_.size(); ++u) {
        if (nodes_[u].base_table && !upstream_[v][u]) out.push_back(u);
    }
    return out;
}

bool QueryDag::has_full_runtime_oracle() const {
    return std::all_of(nodes_.begin(), nodes_.end(), [](const DagNode& v) { return v.upstream_runtime_s.has_value(); });
}

QueryDag load_query_dag(std::string_view document) {
    using json_io::json;
    const json doc = json_io::parse(document, "query plan");
    if (!doc.is_object()) throw InputError("query plan: expected an object");
    const json& qid = json_io::require(doc, "query_id", "query plan");
    if (!qid.is_string()) throw InputError("query plan: query_id must be a string");
    const Money baseline = json_io::money_field(doc, "baseline_cost_src", "query plan");
    const double baseline_runtime = json_io::nonneg_number(doc, "baseline_runtime_src_s", "query plan");

    std::vector<DagNode> nodes;
    const json& jn = json_io::require(doc, "nodes", "query plan");
    if (!jn.is_array()) throw InputError("query plan: nodes must be an array");
    for (const json& j : jn) {
        DagNode v;
        const json& id = json_io::require(j, "id", "node");
        if (!id.is_string()) throw InputError("node: id must be a string");
        v.id = id.get<std::string>();
        const std::string what = "node '" + v.id + "'";
        if (auto op = j.find("op"); op != j.end() && op->is_string()) v.op = op->get<std::string>();
        v.cardinality = json_io::nonneg_number(j, "card", what);
        v.row_size_bytes = json_io::nonneg_number(j, "row_size_bytes", what);
        if (auto ch = j.find("children"); ch != j.end()) {
            if (!ch->is_array()) throw InputError(what + ": children must be an array");
            for (const json& c : *ch) {
                if (!c.is_string()) throw InputError(what + ": children must be node ids");
                v.children.push_back(c.get<std::string>());
            }
        }
        if (auto bt = j.find("base_table"); bt != j.end() && !bt->is_null()) {
            TableRef table;
            if (bt->is_string()) {
                table.name = bt->get<std::string>();
                table.size_bytes = static_cast<std::uint64_t>(std::llround(v.output_bytes()));
            } else {
                const json& name = json_io::require(*bt, "name", what + ".base_table");
                if (!name.is_string()) throw InputError(what + ": base_table.name must be a string");
                table.name = name.get<std::string>();
                table.size_bytes =
                    static_cast<std::uint64_t>(std::llround(json_io::nonneg_number(*bt, "size_bytes", what)));
            }
            v.base_table = std::move(table);
        }
        if (auto f = j.find("fr_s"); f != j.end() && !f->is_null()) {
            v.upstream_runtime_s = json_io::nonneg_number(j, "fr_s", what);
        }
        if (auto d = j.find("downstream_runtime_s"); d != j.end() && !d->is_null()) {
            v.downstream_runtime_s = json_io::nonneg_number(j, "downstream_runtime_s", what);
        }
        nodes.push_back(std::move(v));
    }
    QueryDag dag = QueryDag::build(qid.get<std::string>(), baseline, baseline_runtime, std::move(nodes));
    if (auto d = doc.find("deadline_seconds"); d != doc.end() && !d->is_null()) {
        dag.set_deadline(json_io::nonneg_number(doc, "deadline_seconds", "query plan"));
    }
    return dag;
}

namespace {

struct CutShape {
    CutCosts costs;
    long double shipped_bytes = 0;
};

CutShape shape_of(const QueryDag& dag, std::size_t v, const PriceBook& prices, const IntraOptions& options) {
    CutShape shape;
    const DagNode& node = dag.node(v);
    long double scanned = options.scan_intermediate ? static_cast<long double>(node.output_bytes()) : 0.0L;
    shape.costs.migration = migration_cost(node.output_bytes(), prices);
    shape.shipped_bytes = node.output_bytes();
    std::set<std::string> shipped_tables;
    for (std::size_t leaf : dag.downstream_leaves(v)) {
        const DagNode& l = dag.node(leaf);
        scanned += static_cast<long double>(l.output_bytes());
        // A table read by two leaves is shipped once.
        if (shipped_tables.insert(l.base_table->name).second) {
            const auto size = static_cast<long double>(l.base_table->size_bytes);
            shape.costs.migration += migration_cost(size, prices);
            shape.shipped_bytes += size;
        }
    }
    shape.costs.scan = Money::from_dollars(prices.p_byte * scanned);
    return shape;
}

std::optional<double> effective_deadline(const QueryDag& dag, const IntraOptions& options) {
    return options.deadline_s ? options.deadline_s : dag.deadline();
}

// Cost, runtime and feasibility of a cut at `v` once f_r(v) is known.
CutEvaluation price_cut(const QueryDag& dag, std::size_t v, const CutShape& shape, Money opportunity_now,
                        double fr, const PriceBook& prices, const IntraOptions& options, bool& downstream_unmodeled) {
    CutEvaluation e;
    e.node = dag.node(v).id;
    e.opportunity = opportunity_now;
    e.fr_evaluated = true;
    e.fr_s = fr;
    const Money compute = per_compute_query_cost(fr, prices);
    e.plan_cost = compute + shape.costs.migration + shape.costs.scan;
    e.actual_savings = dag.baseline_cost() - e.plan_cost;
    double runtime = fr + static_cast<double>(transfer_seconds(shape.shipped_bytes, options.planner.bandwidth_bytes_per_s));
    if (const auto& down = dag.node(v).downstream_runtime_s) {
        runtime += *down;
    } else {
        downstream_unmodeled = true;
    }
    e.runtime_s = runtime;
    const auto deadline = effective_deadline(dag, options);
    e.feasible = !deadline || runtime <= *deadline;
    return e;
}

IntraResult baseline_result(const QueryDag& dag) {
    IntraResult r;
    r.baseline_cost = dag.baseline_cost();
    r.plan_cost = dag.baseline_cost();
    r.baseline_runtime_s = dag.baseline_runtime();
    r.runtime_s = dag.baseline_runtime();
    return r;
}

// Largest savings among feasible, profitable evaluations; ties to the lowest id.
void select_best(IntraResult& r, const QueryDag& dag, const IntraOptions& options, bool downstream_unmodeled) {
    const CutEvaluation* best = nullptr;
    for (const CutEvaluation& e : r.evaluations) {
        if (!e.feasible || !e.actual_savings || *e.actual_savings <= kZeroMoney) continue;
        if (!best || *e.actual_savings > *best->actual_savings ||
            (*e.actual_savings == *best->actual_savings && e.node < best->node)) {
            best = &e;
        }
    }
    if (best) {
        r.chosen = *best;
        r.plan_cost = best->plan_cost;
        r.runtime_s = best->runtime_s;
    }
    if (downstream_unmodeled && effective_deadline(dag, options)) {
        r.warnings.push_back("downstream runtime unmodeled");
    }
    const auto deadline = effective_deadline(dag, options);
    if (!best && deadline && dag.baseline_runtime() > *deadline) {
        r.warnings.push_back("deadline exceeded by baseline");
    }
}

}  // namespace

CutCosts cut_costs(const QueryDag& dag, std::string_view node, const PriceBook& prices, const IntraOptions& options) {
    return shape_of(dag, dag.require(node), prices, options).costs;
}

Money opportunity(const QueryDag& dag, std::string_view node, const PriceBook& prices, const IntraOptions& options) {
    const CutCosts c = cut_costs(dag, node, prices, options);
    return dag.baseline_cost() - (c.migration + c.scan);
}

IntraResult intra_plan(const QueryDag& dag, const PriceBook& prices, const IntraOptions& options,
                       const RuntimeOracle& oracle) {
    prices.validate();
    IntraResult r = baseline_result(dag);
    const std::size_t n = dag.size();
    const std::size_t max_iters = options.max_iters == 0 ? n : options.max_iters;

    std::vector<CutShape> shapes(n);
    std::vector<Money> initial(n);
    std::vector<Money> current(n);
    std::vector<char> candidate(n, 0);
    // Largest f_r measured so far inside each node's upstream subquery.
    std::vector<double> known_upstream_fr(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        if (v == dag.root()) continue;
        shapes[v] = shape_of(dag, v, prices, options);
        initial[v] = dag.baseline_cost() - (shapes[v].costs.migration + shapes[v].costs.scan);
        current[v] = initial[v];
        candidate[v] = initial[v] > kZeroMoney;
        r.initial_candidates += candidate[v];
    }

    std::vector<std::pair<std::size_t, double>> measured;
    bool downstream_unmodeled = false;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        std::optional<std::size_t> pick;
        for (std::size_t v = 0; v < n; ++v) {
            if (!candidate[v]) continue;
            if (!pick || current[v] > current[*pick] ||
                (current[v] == current[*pick] && dag.node(v).id < dag.node(*pick).id)) {
                pick = v;
            }
        }
        if (!pick) break;
        const std::size_t u = *pick;
        candidate[u] = 0;

        const DagNode& node = dag.node(u);
        double fr = 0;
        if (node.upstream_runtime_s) {
            fr = *node.upstream_runtime_s;
        } else if (oracle) {
            fr = oracle(node);
            if (!(fr >= 0)) throw InputError("runtime oracle returned a negative runtime for '" + node.id + "'");
        } else {
            throw InputError("no runtime available for node '" + node.id + "' and no oracle supplied");
        }
        for (const auto& [w, fw] : measured) {
            if ((dag.is_upstream(w, u) && fr < fw) || (dag.is_upstream(u, w) && fw < fr)) {
                throw InputError("runtime oracle violates monotonicity between '" + node.id + "' and '" +
                                 dag.node(w).id + "'");
            }
        }
        measured.emplace_back(u, fr);
        ++r.fr_evaluations;
        const Money billed = per_compute_query_cost(fr, prices);
        r.search_cost += billed;

        CutEvaluation e = price_cut(dag, u, shapes[u], current[u], fr, prices, options, downstream_unmodeled);
        const Money actual = *e.actual_savings;
        const bool feasible = e.feasible;
        r.evaluations.push_back(std::move(e));

        for (std::size_t v = 0; v < n; ++v) {
            if (!candidate[v]) continue;
            if (feasible && current[v] < actual) {
                candidate[v] = 0;
                continue;
            }
            if (dag.is_upstream(u, v) && fr > known_upstream_fr[v]) {
                // f_r(v) >= f_r(u), so v owes at least this much compute.
                known_upstream_fr[v] = fr;
                current[v] = initial[v] - per_compute_query_cost(fr, prices);
                if (current[v] < kZeroMoney) candidate[v] = 0;
            }
        }
    }
    select_best(r, dag, options, downstream_unmodeled);
    return r;
}

IntraResult exhaustive_cuts(const QueryDag& dag, const PriceBook& prices, const IntraOptions& options) {
    prices.validate();
    if (!dag.has_full_runtime_oracle()) {
        throw InputError("exhaustive cut search needs fr_s on every node");
    }
    IntraResult r = baseline_result(dag);
    bool downstream_unmodeled = false;
    for (std::size_t v = 0; v < dag.size(); ++v) {
        if (v == dag.root()) continue;
        const CutShape shape = shape_of(dag, v, prices, options);
        const Money o = dag.baseline_cost() - (shape.costs.migration + shape.costs.scan);
        r.evaluations.push_back(
            price_cut(dag, v, shape, o, *dag.node(v).upstream_runtime_s, prices, options, downstream_unmodeled));
    }
    select_best(r, dag, options, downstream_unmodeled);
    return r;
}

}  // namespace cloudplan
