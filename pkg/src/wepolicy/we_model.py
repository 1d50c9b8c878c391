"""Weighted aggregation of well-being across nested WE scopes.

A model is an ordered list of scope layers, each carrying a value function
and a normalized weight. The two-layer case covers the narrow/wide split;
more layers extend the same convex combination. Sampling helpers produce
the 3-d surface over a two-scope grid and the single consensus curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DimensionError, MissingScopeError
from .valuefn import AsymmetricSpec, ValueCurve

# Canonical gradation of scope labels, small to large. Free-form labels are
# equally valid; this tuple just names the conventional rungs.
GRADATION = ("I", "family", "community", "municipality", "nation", "world")

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class WEScope:
    """A named scope on the I-to-world gradation (or any free-form group)."""

    label: str

    def __post_init__(self):
        if not self.label:
            raise ValueError("scope label must be non-empty")


@dataclass(frozen=True)
class WELayer:
    """One scope's contribution: value function, weight, optional aggregator.

    `element_weights` turns an element vector into the layer's scalar input
    (weighted sum, then the value function); layers used only with scalar
    assignments can leave it None.
    """

    scope: WEScope
    value_function: ValueCurve
    weight: float
    element_weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError(
                f"layer {self.scope.label!r} weight must be in [0, 1], got {self.weight}"
            )


@dataclass(frozen=True)
class WellbeingModel:
    """Ordered scope layers whose weights form a convex combination."""

    layers: tuple[WELayer, ...]

    def __post_init__(self):
        if not self.layers:
            raise ValueError("model needs at least one layer")
        labels = [layer.scope.label for layer in self.layers]
        if len(set(labels)) != len(labels):
            raise ValueError(f"scope labels must be unique, got {labels}")
        total = math.fsum(layer.weight for layer in self.layers)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"layer weights must sum to 1, got {total!r}")


def weighted_pair(
    r: float,
    narrow_fn: ValueCurve | None = None,
    wide_fn: ValueCurve | None = None,
    labels: tuple[str, str] = ("narrow", "wide"),
) -> WellbeingModel:
    """Two-layer model with weights (r, 1 - r); defaults to the standard
    asymmetric curve (alpha = beta = 1, lambda = 2) on both layers."""
    narrow_fn = narrow_fn if narrow_fn is not None else AsymmetricSpec()
    wide_fn = wide_fn if wide_fn is not None else AsymmetricSpec()
    return WellbeingModel(
        layers=(
            WELayer(WEScope(labels[0]), narrow_fn, r),
            WELayer(WEScope(labels[1]), wide_fn, 1.0 - r),
        )
    )


def aggregate(model: WellbeingModel, assignment: Mapping[str, float]) -> float:
    """Weighted sum of per-layer values at the assigned scalar inputs.

    Raises MissingScopeError listing every scope label absent from the
    assignment. Extra labels are ignored.
    """
    missing = [l.scope.label for l in model.layers if l.scope.label not in assignment]
    if missing:
        raise MissingScopeError(missing)
    total = 0.0
    for layer in model.layers:
        total += layer.weight * layer.value_function(assignment[layer.scope.label])
    return total


def sample_surface(
    model: WellbeingModel,
    xs_narrow: Sequence[float],
    xs_wide: Sequence[float],
) -> list[tuple[float, float, float]]:
    """Evaluate a two-layer model over a rectangular grid.

    Rows come back in row-major order (narrow axis outer, wide axis inner)
    so CSV output is byte-stable.
    """
    if len(model.layers) != 2:
        raise DimensionError(
            f"surface sampling needs exactly 2 layers, model has {len(model.layers)}"
        )
    if not xs_narrow or not xs_wide:
        raise ValueError("grid must be non-empty on both axes")
    narrow, wide = model.layers
    rows = []
    for xn in xs_narrow:
        wn = narrow.weight * narrow.value_function(xn)
        for xw in xs_wide:
            rows.append((xn, xw, wn + wide.weight * wide.value_function(xw)))
    return rows


def consensus_curve(layer: WELayer, xs: Sequence[float]) -> list[tuple[float, float]]:
    """Value of a single shared function along a grid — the curve the
    surface collapses to when both scopes agree, independent of weights."""
    if not xs:
        raise ValueError("grid must be non-empty")
    return [(x, layer.value_function(x)) for x in xs]
