"""Staged cause-and-effect graphs for impact evaluation.

A logic model is an acyclic weighted graph over the five stages
inputs -> activities -> outputs -> outcomes -> impacts. Propagation is
linear with additive baselines, which keeps every impact auditable as a
sum over paths. Fact values couple on the left side only: they replace the
exogenous value of inputs nodes and inject into activities/outputs nodes.
Negative edge weights are allowed so policies can carry negative impact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import StageBindingError, UnknownNodeError
from .graphs import CycleError, topological_order

STAGES = ("inputs", "activities", "outputs", "outcomes", "impacts")
BINDABLE_STAGES = ("inputs", "activities", "outputs")


@dataclass(frozen=True)
class Node:
    name: str
    stage: str
    baseline: float = 0.0

    def __post_init__(self):
        if self.stage not in STAGES:
            raise ValueError(f"unknown stage {self.stage!r} for node {self.name!r}")
        if not math.isfinite(self.baseline):
            raise ValueError(f"node {self.name!r} baseline must be finite")


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    weight: float


@dataclass(frozen=True)
class LogicModel:
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]

    def node_map(self) -> dict[str, Node]:
        return {n.name: n for n in self.nodes}

    def stage_nodes(self, stage: str) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if n.stage == stage)


def validate(model: LogicModel) -> list[str]:
    """All structural findings at once; an empty list means the model is ok.

    Checks: duplicate names, unknown edge endpoints, stage-order violations
    (edges may only run to the same or a later stage), cycles, and the
    presence of at least one impacts node.
    """
    findings = []
    names = [n.name for n in model.nodes]
    dupes = {n for n in names if names.count(n) > 1}
    if dupes:
        findings.append(f"duplicate node names: {', '.join(sorted(dupes))}")

    by_name = model.node_map()
    rank = {stage: i for i, stage in enumerate(STAGES)}
    checkable = []
    for e in model.edges:
        unknown = [x for x in (e.source, e.target) if x not in by_name]
        if unknown:
            findings.append(
                f"edge {e.source}->{e.target} references unknown nodes: "
                + ", ".join(unknown)
            )
            continue
        if rank[by_name[e.source].stage] > rank[by_name[e.target].stage]:
            findings.append(
                f"edge {e.source}->{e.target} runs backwards: "
                f"{by_name[e.source].stage} -> {by_name[e.target].stage}"
            )
        checkable.append((e.source, e.target))

    if not dupes:
        try:
            topological_order(names, checkable)
        except CycleError as err:
            findings.append(str(err))

    if not model.stage_nodes("impacts"):
        findings.append("model has no impacts-stage node")
    return findings


def _require_valid(model: LogicModel):
    findings = validate(model)
    if findings:
        raise ValueError("invalid logic model: " + "; ".join(findings))


def _propagate_values(
    model: LogicModel, exogenous: Mapping[str, float]
) -> tuple[dict[str, float], dict[str, float]]:
    order = topological_order(
        [n.name for n in model.nodes], [(e.source, e.target) for e in model.edges]
    )
    incoming: dict[str, list[Edge]] = {n.name: [] for n in model.nodes}
    for e in model.edges:
        incoming[e.target].append(e)
    by_name = model.node_map()

    values: dict[str, float] = {}
    for name in order:
        acc = by_name[name].baseline + exogenous.get(name, 0.0)
        for e in incoming[name]:
            acc += e.weight * values[e.source]
        values[name] = acc
    impacts = {n.name: values[n.name] for n in model.stage_nodes("impacts")}
    return {n.name: values[n.name] for n in model.nodes}, impacts


def propagate(
    model: LogicModel, input_values: Mapping[str, float]
) -> tuple[dict[str, float], dict[str, float]]:
    """Evaluate the model given exogenous values for every inputs node.

    Each node's value is its baseline plus the weight-sum of its upstream
    values; inputs nodes additionally receive their given exogenous value.
    Returns (all node values, impacts-stage vector), both in declaration
    order.
    """
    _require_valid(model)
    input_names = {n.name for n in model.stage_nodes("inputs")}
    unknown = [k for k in input_values if k not in input_names]
    if unknown:
        raise UnknownNodeError(
            f"values given for non-inputs nodes: {', '.join(sorted(unknown))}"
        )
    missing = sorted(input_names - set(input_values))
    if missing:
        raise ValueError(f"missing values for inputs nodes: {', '.join(missing)}")
    return _propagate_values(model, dict(input_values))


@dataclass(frozen=True)
class FactBinding:
    """Fact elements bound onto left-side nodes of a logic model."""

    bindings: Mapping[str, str]  # node name -> fact element name
    elements: tuple[str, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.elements) != len(self.values):
            raise ValueError(
                f"{len(self.elements)} element names for {len(self.values)} values"
            )
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("fact element names must be unique")
        unknown = [e for e in self.bindings.values() if e not in self.elements]
        if unknown:
            raise UnknownNodeError(
                f"bindings reference unknown fact elements: {', '.join(sorted(set(unknown)))}"
            )

    def value_for(self, node: str) -> float:
        return self.values[self.elements.index(self.bindings[node])]


def couple_facts(
    model: LogicModel,
    binding: FactBinding,
    input_values: Mapping[str, float] | None = None,
) -> dict[str, float]:
    """Impacts after coupling fact values onto the model's left side.

    Facts replace the exogenous value of bound inputs nodes and add an
    exogenous injection at bound activities/outputs nodes. Binding to
    outcomes or impacts stages is rejected: those ends of the model stay
    subjective. Unbound inputs default to the given input_values (or 0).
    """
    _require_valid(model)
    by_name = model.node_map()
    for node in binding.bindings:
        if node not in by_name:
            raise UnknownNodeError(f"binding references unknown node {node!r}")
        if by_name[node].stage not in BINDABLE_STAGES:
            raise StageBindingError(
                f"cannot bind fact to {by_name[node].stage}-stage node {node!r}; "
                f"facts couple to the left side ({', '.join(BINDABLE_STAGES)})"
            )

    exogenous = {n.name: 0.0 for n in model.stage_nodes("inputs")}
    if input_values:
        for k, v in input_values.items():
            if k not in exogenous:
                raise UnknownNodeError(f"values given for non-inputs node {k!r}")
            exogenous[k] = v
    for node in binding.bindings:
        value = binding.value_for(node)
        if by_name[node].stage == "inputs":
            exogenous[node] = value
        else:
            exogenous[node] = exogenous.get(node, 0.0) + value
    _, impacts = _propagate_values(model, exogenous)
    return impacts
