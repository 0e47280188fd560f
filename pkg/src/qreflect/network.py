"""Feedforward composition of queueing nodes.

Nodes are numbered 0..n-1 and every class visits the nodes that list it, in
increasing order, so the departures of node i are the arrivals of node i+1.
The composition is therefore a plain left-to-right iteration of the single
node maps; no routing state is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

from .errors import ConfigError, QReflectError
from .node import NodeOutput, NodePrimitives, NodeRates, NodeSpec, solve_node
from .paths import PiecewisePath


@dataclass(frozen=True)
class NetworkSpec:
    classes: tuple[str, ...]
    high: tuple[frozenset[str], ...]
    low: tuple[frozenset[str], ...]

    def __post_init__(self):
        if len(self.high) != len(self.low):
            raise ConfigError("per-node priority lists must have equal length")
        if not self.high:
            raise ConfigError("a network needs at least one node")
        for i in range(len(self.high)):
            self.node_spec(i)  # runs the per-node validation

    @property
    def n(self) -> int:
        return len(self.high)

    def node_spec(self, i: int) -> NodeSpec:
        return NodeSpec(classes=self.classes, high=self.high[i], low=self.low[i])

    def served(self, i: int) -> frozenset[str]:
        return self.high[i] | self.low[i]


@dataclass(frozen=True)
class NetworkRates:
    arrival: Mapping[str, float]
    service: tuple[Mapping[str, float], ...]


@dataclass(frozen=True)
class NetworkPrimitives:
    arrivals: Mapping[str, PiecewisePath]
    services: tuple[Mapping[str, PiecewisePath], ...]
    rates: NetworkRates | None = None


@dataclass(frozen=True)
class NetworkOutput:
    nodes: tuple[NodeOutput, ...]

    def departures(self, i: int) -> dict[str, PiecewisePath]:
        return self.nodes[i].departures


def check_network_regular(prims: NetworkPrimitives, spec: NetworkSpec) -> bool:
    """Declared-rate stability at every node."""
    if prims.rates is None:
        raise ConfigError("declared rates are required for the stability check")
    for i in range(spec.n):
        load = sum(
            prims.rates.arrival[j] / prims.rates.service[i][j]
            for j in spec.served(i)
        )
        if not load < 1.0:
            return False
    return True


def propagate(
    prims: NetworkPrimitives,
    spec: NetworkSpec,
    *,
    warmup_end: float | None = None,
    validate: bool = True,
) -> NetworkOutput:
    """Run the node maps along the feedforward order.

    Node i receives the departures of node i-1 as its arrivals (node 0
    receives the exogenous arrivals); truncation-sensitivity flags propagate
    downstream.
    """
    if len(prims.services) != spec.n:
        raise ConfigError("one service path family per node is required")
    inputs: Mapping[str, PiecewisePath] = prims.arrivals
    outputs: list[NodeOutput] = []
    sensitive = False
    for i in range(spec.n):
        node_prims = NodePrimitives(arrivals=inputs, services=prims.services[i])
        try:
            out = solve_node(
                node_prims,
                spec.node_spec(i),
                warmup_end=warmup_end,
                validate=validate,
            )
        except QReflectError as exc:
            raise type(exc)(f"node {i}: {exc}") from exc
        sensitive = sensitive or out.truncation_sensitive
        if sensitive and not out.truncation_sensitive:
            out = replace(out, truncation_sensitive=True)
        outputs.append(out)
        inputs = out.departures
    return NetworkOutput(nodes=tuple(outputs))
