"""Cloud query migration planner."""

from ._cloudplan import (  # noqa: F401
    CapacityError,
    InputError,
    PriceBook,
    QueryDag,
    Workload,
    breakeven,
    generate_workload,
    intra_plan,
    load_prices,
    load_query_dag,
    load_workload,
    payback,
    plan,
    plan_cost_runtime,
    reduce,
    sweep,
)
