"""Coevolving user/item network growth by preferential triadic closure.

Modules
-------
graph
    Dual-component graph, events, event logs, replay and triadic classification.
model
    The threshold-activated growth model.
measures
    Attachment kernels, growth statistics, degree correlations, influence curves.
io
    Canonical file formats and empirical edge-list ingestion.
cli
    ``triadic-net`` command line.
"""

from .errors import *  # noqa: F401,F403
from .graph import (
    DualGraph,
    Event,
    EventKind,
    EventLog,
    Link,
    LinkClass,
    WalkType,
    apply_event,
    classify_link,
    replay,
    second_neighbors,
    snapshot_at,
)
from .io import IngestOptions, IngestReport, ingest_empirical, parse_log, serialize_log
from .measures import (
    DegreeDistribution,
    GrowthStats,
    InfluenceEstimate,
    NnCorrelation,
    PaEstimate,
    degree_distribution,
    degree_pcc,
    exposure_influence,
    fit_loglog_slope,
    growth_stats,
    measure_pa,
    nn_degree_curves,
    shared_favorites_influence,
    triadic_fraction,
)
from .model import ModelParams, Simulator, TickReport, UserState, init, run, step, two_step_walk

__version__ = "0.1.0"
