"""Exact single-node multiclass queueing model.

A node serves a finite set of customer classes.  Two disjoint subsets mark
the high- and low-priority classes; high-priority work preempts low-priority
work and resumes it without loss, and within a priority group service is
fifo.  Classes outside both subsets pass through untouched.

All quantities are derived exactly from the cumulative arrival paths (one
nondecreasing path per class, customer units) and the cumulative service
paths (one continuous nondecreasing path per served class, mapping dedicated
busy time to served customers):

* idle time after high-priority work,
* high- and low-priority workloads,
* total idle time,
* per-class departures, queue lengths and observer departure times.

Suprema run over the path domain, so the restricted model starting empty at
the left end of the domain is the default; a warm-up window approximating the
stationary model is just a domain that starts at a negative time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import paths as pc
from .errors import ConfigError, DegenerateInputError, QReflectError
from .paths import PiecewisePath


@dataclass(frozen=True)
class NodeSpec:
    """Class structure of one node: the full class set and the high/low
    priority subsets served here."""

    classes: tuple[str, ...]
    high: frozenset[str] = frozenset()
    low: frozenset[str] = frozenset()

    def __post_init__(self):
        cs = set(self.classes)
        if len(self.classes) != len(cs):
            raise ConfigError("duplicate class labels")
        if not self.high <= cs or not self.low <= cs:
            raise ConfigError("priority sets must be subsets of the class set")
        if self.high & self.low:
            raise ConfigError("high and low priority sets must be disjoint")
        if not self.low:
            raise ConfigError("the low-priority set must be nonempty")

    @property
    def served(self) -> frozenset[str]:
        return self.high | self.low


@dataclass(frozen=True)
class NodeRates:
    """Declared long-run rates backing the stability check in warm-up mode."""

    arrival: Mapping[str, float]
    service: Mapping[str, float]


@dataclass(frozen=True)
class NodePrimitives:
    """Arrival paths per class and service paths per served class."""

    arrivals: Mapping[str, PiecewisePath]
    services: Mapping[str, PiecewisePath]
    rates: NodeRates | None = None


@dataclass(frozen=True)
class NodeOutput:
    idle_high: PiecewisePath
    workload_high: PiecewisePath
    idle_total: PiecewisePath
    workload_low: PiecewisePath
    departures: dict[str, PiecewisePath]
    queue_lengths: dict[str, PiecewisePath]
    sojourn: dict[str, PiecewisePath]
    busy: dict[str, PiecewisePath] = field(repr=False, default_factory=dict)
    truncation_sensitive: bool = False


def validate_primitives(prims: NodePrimitives, spec: NodeSpec) -> None:
    for j in spec.classes:
        if j not in prims.arrivals:
            raise ConfigError(f"missing arrival path for class {j!r}")
        if not pc.is_nondecreasing(prims.arrivals[j], tol=0.0):
            raise ConfigError(f"arrival path for class {j!r} is not nondecreasing")
    for j in spec.served:
        if j not in prims.services:
            raise ConfigError(f"missing service path for class {j!r}")
        s = prims.services[j]
        if not pc.is_continuous(s):
            raise ConfigError(f"service path for class {j!r} has jumps")
        if not pc.is_nondecreasing(s, tol=0.0):
            raise ConfigError(f"service path for class {j!r} is not nondecreasing")
        if not s.right[-1] - s.right[0] > 0:
            raise ConfigError(f"service path for class {j!r} has no total increase")


def check_regular(prims: NodePrimitives, spec: NodeSpec) -> bool:
    """Stability of the declared rates: served load strictly below one."""
    if prims.rates is None:
        raise ConfigError("declared rates are required for the stability check")
    load = sum(
        prims.rates.arrival[j] / prims.rates.service[j] for j in spec.served
    )
    return load < 1.0


def _busy_paths(prims: NodePrimitives, spec: NodeSpec) -> dict[str, PiecewisePath]:
    """s_j^{-1} composed with a_j: busy time required per class vs. time."""
    out = {}
    for j in sorted(spec.served):
        inv = pc.rc_inverse(prims.services[j])
        out[j] = pc.compose(inv, prims.arrivals[j])
    return out


def _group_departures(
    arrivals: Mapping[str, PiecewisePath],
    busy: Mapping[str, PiecewisePath],
    group: frozenset[str],
    backlog: PiecewisePath,
    domain: tuple[float, float],
) -> dict[str, PiecewisePath]:
    """Fifo departures of one priority group.

    The departure count of class j at time t is the supremum of a_j over the
    times tau whose required busy time C(tau) fits into the busy time the
    node has devoted to the group by t, which is theta = C - backlog.  Both
    theta and C are nondecreasing, so the supremum factors through the
    monotone graph sup{a_j : C <= x} composed with theta.
    """
    if not group:
        return {}
    csum = pc.sum_paths([busy[j] for j in sorted(group)])
    if not csum.right[-1] - csum.right[0] > 0:
        # no work ever requested: everything departs immediately
        return {j: arrivals[j] for j in group}
    theta = pc.sub(csum, backlog)
    out = {}
    for j in sorted(group):
        graph = pc.sup_graph(arrivals[j], csum)
        dj = pc.compose(graph, theta)
        out[j] = pc.path_min(dj, arrivals[j])
    return out


def _group_sojourn(
    arrivals: Mapping[str, PiecewisePath],
    departures: Mapping[str, PiecewisePath],
    group: frozenset[str],
    domain: tuple[float, float],
) -> PiecewisePath:
    """Departure time of a time-t observer of the group: the first time every
    class's departures have caught up with its arrivals at t."""
    z = pc.identity(*domain)
    for ell in sorted(group):
        a = arrivals[ell]
        if not a.max_value() - a.min_value() > 0:
            continue  # no arrivals: the constraint is vacuous
        z = pc.path_max(z, pc.first_passage_compose(departures[ell], a))
    return z


def solve_node(
    prims: NodePrimitives,
    spec: NodeSpec,
    *,
    warmup_end: float | None = None,
    validate: bool = True,
) -> NodeOutput:
    """All node quantities from one primitives pair.

    ``warmup_end`` marks the time separating the warm-up window from the
    observation window; when given, the output is flagged truncation
    sensitive if a running supremum is still pinned to the window start at
    that time (the finite window then visibly truncates the model's
    infinite-past suprema).
    """
    if validate:
        validate_primitives(prims, spec)
    busy = _busy_paths(prims, spec)
    domain = pc.common_domain(list(prims.arrivals.values()))
    ident = pc.identity(*domain)

    if spec.high:
        high_deficit = pc.linear_combination(
            [(1.0, ident)] + [(-1.0, busy[j]) for j in sorted(spec.high)]
        )
        idle_high = pc.running_sup(high_deficit)
        workload_high = pc.sub(idle_high, high_deficit)
    else:
        idle_high = ident
        workload_high = pc.zero(*domain)

    low_terms = [(1.0, idle_high)] + [(-1.0, busy[j]) for j in sorted(spec.low)]
    low_deficit = pc.linear_combination(low_terms)
    idle_total = pc.running_sup(low_deficit)
    workload_low = pc.sub(idle_total, low_deficit)

    departures: dict[str, PiecewisePath] = {}
    departures.update(
        _group_departures(prims.arrivals, busy, spec.high, workload_high, domain)
    )
    departures.update(
        _group_departures(prims.arrivals, busy, spec.low, workload_low, domain)
    )
    for j in spec.classes:
        if j not in spec.served:
            departures[j] = prims.arrivals[j]

    queues = {j: pc.sub(prims.arrivals[j], departures[j]) for j in spec.classes}

    sojourn: dict[str, PiecewisePath] = {}
    if spec.high:
        z_high = _group_sojourn(prims.arrivals, departures, spec.high, domain)
        for j in spec.high:
            sojourn[j] = z_high
    if spec.low:
        z_low = _group_sojourn(prims.arrivals, departures, spec.low, domain)
        for j in spec.low:
            sojourn[j] = z_low
    for j in spec.classes:
        if j not in spec.served:
            sojourn[j] = pc.identity(*domain)

    sensitive = False
    if warmup_end is not None:
        sensitive = (
            idle_high.eval(warmup_end) == idle_high.eval(domain[0])
            or idle_total.eval(warmup_end) == idle_total.eval(domain[0])
        )

    return NodeOutput(
        idle_high=idle_high,
        workload_high=workload_high,
        idle_total=idle_total,
        workload_low=workload_low,
        departures=departures,
        queue_lengths=queues,
        sojourn=sojourn,
        busy=busy,
        truncation_sensitive=sensitive,
    )


# Convenience wrappers mirroring the individual node maps.


def idle_high(prims: NodePrimitives, spec: NodeSpec) -> PiecewisePath:
    return solve_node(prims, spec).idle_high


def workload_high(prims: NodePrimitives, spec: NodeSpec) -> PiecewisePath:
    return solve_node(prims, spec).workload_high


def idle_total(prims: NodePrimitives, spec: NodeSpec) -> PiecewisePath:
    return solve_node(prims, spec).idle_total


def workload_low(prims: NodePrimitives, spec: NodeSpec) -> PiecewisePath:
    return solve_node(prims, spec).workload_low


def departures(prims: NodePrimitives, spec: NodeSpec) -> dict[str, PiecewisePath]:
    return solve_node(prims, spec).departures


def queue_lengths(prims: NodePrimitives, spec: NodeSpec) -> dict[str, PiecewisePath]:
    return solve_node(prims, spec).queue_lengths


def sojourn(prims: NodePrimitives, spec: NodeSpec) -> dict[str, PiecewisePath]:
    return solve_node(prims, spec).sojourn
