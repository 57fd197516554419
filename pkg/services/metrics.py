"""Prometheus metrics for hyperswitch runs."""
from prometheus_client import Counter, Histogram, generate_latest
from prometheus_client.core import CollectorRegistry

# Create a custom registry
registry = CollectorRegistry()

# Trial metrics
trials_total = Counter(
    'trials_total',
    'Total number of trials run',
    ['stage', 'status'],
    registry=registry
)

trial_duration = Histogram(
    'trial_duration_seconds',
    'Time spent in one trial',
    ['stage'],
    registry=registry
)

# Switching metrics
switchings_applied = Counter(
    'switchings_applied_total',
    'Total number of forward switchings applied',
    registry=registry
)

switching_proposals = Counter(
    'switching_proposals_total',
    'Total number of forward switching proposals',
    ['outcome'],
    registry=registry
)

# Red swap metrics
red_swaps = Counter(
    'red_swaps_total',
    'Total number of red loops swapped into the green region',
    registry=registry
)

# Oracle metrics
oracle_nodes = Counter(
    'oracle_nodes_total',
    'Total number of search nodes visited by exact enumerators',
    ['kind'],
    registry=registry
)


def get_metrics():
    """Get Prometheus metrics in text format."""
    return generate_latest(registry)
