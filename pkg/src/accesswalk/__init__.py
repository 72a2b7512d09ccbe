"""accesswalk: self-avoiding-walk accessibility on street networks."""

__version__ = "0.1.0"

from .accessibility import (
    AccessibilityField,
    accessibility_field,
    diversity_entropy,
    outward_accessibility,
    region_mean_curve,
)
from .errors import (
    AccesswalkError,
    BudgetExceededError,
    EstimationError,
    NetworkFormatError,
    ScenarioError,
)
from .network import StreetNetwork, load_network, load_network_json, neighborhood
from .oracle import ExactTransition, exact_accessibility, exact_transitions
from .scenario import (
    ComparisonReport,
    Scenario,
    affected_region,
    apply_scenario,
    compare,
    evaluate_scenario,
    load_scenario,
    make_scenario,
)
from .walks import (
    TransitionEstimate,
    WalkConfig,
    WalkPath,
    estimate_all,
    estimate_transitions,
    sample_walk,
    walk_entropy_field,
)

__all__ = [
    "AccessibilityField",
    "AccesswalkError",
    "BudgetExceededError",
    "ComparisonReport",
    "EstimationError",
    "ExactTransition",
    "NetworkFormatError",
    "Scenario",
    "ScenarioError",
    "StreetNetwork",
    "TransitionEstimate",
    "WalkConfig",
    "WalkPath",
    "accessibility_field",
    "affected_region",
    "apply_scenario",
    "compare",
    "diversity_entropy",
    "estimate_all",
    "estimate_transitions",
    "evaluate_scenario",
    "exact_accessibility",
    "exact_transitions",
    "load_network",
    "load_network_json",
    "load_scenario",
    "make_scenario",
    "neighborhood",
    "outward_accessibility",
    "region_mean_curve",
    "sample_walk",
    "walk_entropy_field",
]
