"""Order-quantity decision support for fresh-product retailers.

Computes optimal spot/option order splits for a retailer whose demand
belief may be biased by an overconfidence multiplier, evaluates expected
profits for retailer, supplier, and the integrated chain, solves the
channel-coordinating option prices, and ships simulation and brute-force
oracles that verify every closed form independently.
"""
from .demand import (
    DemandDistribution,
    Exponential,
    OutOfRange,
    TruncatedNormal,
    Uniform,
    make_distribution,
)
from .profit import (
    InfeasibleContract,
    MarketParams,
    OptionContract,
    OrderPlan,
    ProfitBreakdown,
    chain_expected_profit,
    realized_chain_profit,
    realized_retailer_profit,
    realized_supplier_profit,
    retailer_expected_profit,
    retailer_profit_gradient,
    supplier_expected_profit,
    supplier_profit_gap,
)
from .optimizer import (
    FeasibilityReport,
    Infeasible,
    NoRoot,
    NonCoordinable,
    Violation,
    check_feasibility,
    coordinating_exercise_price,
    coordinating_premium,
    optimal_centralized,
    optimal_plan,
    spot_fractile,
    total_fractile,
)
from .oracle import (
    GridSpec,
    McEstimate,
    default_grid_spec,
    grid_search_plan,
    mc_expected,
)
from .sweep import (
    MODES,
    MonotonicityReport,
    SweepRow,
    SweepScenario,
    TooFewRows,
    default_k_grid,
    monotonicity_report,
    rows_to_csv,
    run_sweep,
    write_csv,
)
from .config import (
    ConfigError,
    ConfigNotFound,
    ConfigParseError,
    ConfigValidationError,
    OracleSettings,
    ScenarioConfig,
    SweepSettings,
    load_config,
    parse_config,
)

__version__ = "0.1.0"

__all__ = [
    "DemandDistribution", "Uniform", "Exponential", "TruncatedNormal",
    "make_distribution", "OutOfRange",
    "MarketParams", "OptionContract", "OrderPlan", "ProfitBreakdown",
    "InfeasibleContract",
    "retailer_expected_profit", "retailer_profit_gradient",
    "supplier_expected_profit", "supplier_profit_gap",
    "chain_expected_profit",
    "realized_retailer_profit", "realized_supplier_profit", "realized_chain_profit",
    "FeasibilityReport", "Violation", "Infeasible", "NonCoordinable", "NoRoot",
    "check_feasibility", "optimal_plan", "optimal_centralized",
    "coordinating_premium", "coordinating_exercise_price",
    "total_fractile", "spot_fractile",
    "McEstimate", "GridSpec", "mc_expected", "grid_search_plan", "default_grid_spec",
    "SweepScenario", "SweepRow", "MODES", "run_sweep", "monotonicity_report",
    "MonotonicityReport", "TooFewRows", "default_k_grid", "write_csv", "rows_to_csv",
    "ScenarioConfig", "OracleSettings", "SweepSettings", "load_config", "parse_config",
    "ConfigError", "ConfigNotFound", "ConfigParseError", "ConfigValidationError",
    "__version__",
]
