import pathlib

import pytest

import cloudplan

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"


def text(name):
    return (FIXTURES / name).read_text()


@pytest.fixture
def unit_prices():
    return cloudplan.load_prices(text("unit_prices.json"))


def test_shared_scan_all_solvers_agree(unit_prices):
    w = cloudplan.load_workload(text("shared_scan_savings.json"))
    for solver in ("greedy", "mincut", "brute"):
        plan = cloudplan.plan(w, unit_prices, solver)
        assert plan["savings"] == "1.000000"
        assert plan["migrate_tables"] == ["t2", "t3"]


def test_reduce_reports_forced_and_bounds(unit_prices):
    w = cloudplan.load_workload(text("shared_scan_graph.json"))
    r = cloudplan.reduce(w, unit_prices)
    assert r["forced_queries"] == ["q1"]
    assert dict(r["table_bounds"])["t2"] == "5.000000"


def test_workload_round_trip():
    w = cloudplan.load_workload(text("shared_scan_graph.json"))
    assert (w.table_count, w.query_count, w.edge_count) == (3, 3, 4)
    assert w.neighbors("table", "t3") == ["q2", "q3"]
    again = cloudplan.load_workload(w.serialize())
    assert again.serialize() == w.serialize()


def test_deadline_trades_cost_for_runtime():
    w = cloudplan.load_workload(text("tradeoff_workload.json"))
    p = cloudplan.load_prices(text("tradeoff_prices.json"))
    fast = cloudplan.plan(w, p, "mincut", bandwidth=1e10)
    assert fast["deadline_met"]
    loose = cloudplan.plan(w.with_deadline(None), p, "mincut", bandwidth=1e10)
    assert loose["plan_type"] == "DEST_ONLY"


def test_plan_cost_runtime_of_empty_plan(unit_prices):
    w = cloudplan.load_workload(text("shared_scan_savings.json"))
    plan = cloudplan.plan_cost_runtime(w, unit_prices, [], [])
    assert plan["plan_type"] == "SOURCE_ONLY"
    assert plan["savings"] == "0.000000"


def test_intra_query67():
    dag = cloudplan.load_query_dag(text("q67_plan.json"))
    prices = cloudplan.load_prices(text("intra_gcp_prices.json"))
    res = cloudplan.intra_plan(dag, prices)
    assert res["cut"] == "rollup_agg"
    assert res["plan_cost"] == "1.830000"
    assert res["baseline_cost"] == "4.998100"
    full = cloudplan.intra_plan(dag, prices, exhaustive=True)
    assert full["plan_cost"] == res["plan_cost"]


def test_intra_oracle_callback(unit_prices):
    doc = """{"query_id":"i","baseline_cost_src":"10","baseline_runtime_src_s":100,"nodes":[
      {"id":"out","card":10,"row_size_bytes":10,"children":["a"]},
      {"id":"a","card":1000,"row_size_bytes":100,"children":["s"]},
      {"id":"s","card":1000000000,"row_size_bytes":100,
       "base_table":{"name":"f","size_bytes":100000000000}}]}"""
    dag = cloudplan.load_query_dag(doc)
    assert not dag.has_full_runtime_oracle
    asked = []

    def oracle(node):
        asked.append(node)
        return 720.0

    res = cloudplan.intra_plan(dag, unit_prices, oracle=oracle)
    assert asked == ["a"]
    assert res["cut"] == "a"


def test_sweep_is_monotone_in_egress():
    w = cloudplan.load_workload(text("tradeoff_workload.json"))
    rows = cloudplan.sweep(w, cloudplan.PriceBook.defaults(), "egress", [0, 50, 100, 1e7])
    assert [r["price"] for r in rows] == [0, 50, 100, 1e7]
    assert rows[-1]["plan_type"] == "SOURCE_ONLY"
    savings = [r["savings_pct"] for r in rows]
    assert savings == sorted(savings, reverse=True)


def test_breakeven_and_payback(unit_prices):
    assert cloudplan.breakeven(6.25 * 3600, unit_prices) == pytest.approx(1e12)
    assert cloudplan.payback("10", "5", "4") == 10
    assert cloudplan.payback("10", "4", "5") is None


def test_generator_is_seeded():
    a = cloudplan.generate_workload(7, n_tables=5, n_queries=9)
    b = cloudplan.generate_workload(7, n_tables=5, n_queries=9)
    assert a.serialize() == b.serialize()
    assert a.table_count == 5 and a.query_count == 9


def test_errors_map_to_python_exceptions(unit_prices):
    with pytest.raises(ValueError):
        cloudplan.load_workload("{not json")
    with pytest.raises(cloudplan.InputError):
        cloudplan.load_workload(text("dangling_workload.json"))
    big = cloudplan.generate_workload(3, n_tables=25, n_queries=40)
    with pytest.raises(cloudplan.CapacityError):
        cloudplan.plan(big, unit_prices, "brute")
