"""Policy selection: couple sweep indicators into the fitted target and rank.

For each sweep row the fact indicators perturb the baseline subjective
vector through a weighting profile's coupling, the fitted target scores the
result, and rows are ranked by score (ties to the smallest policy id).
Different profiles express different social/environmental/economic
emphases and generally select different policies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .coupling import FactCoupling, apply_fact_coupling
from .policy_sim import SweepTable
from .survey import RegressionModel, predict


@dataclass(frozen=True)
class WeightingProfile:
    name: str
    coupling: FactCoupling


@dataclass(frozen=True)
class RankedRow:
    policy_id: int
    x_w_prime: tuple[float, ...]
    w_prime: float


@dataclass(frozen=True)
class RankedPolicies:
    """Rows sorted by score descending, then policy id ascending."""

    rows: tuple[RankedRow, ...]
    perturbation_warnings: int = 0


def evaluate_policies(
    target: RegressionModel,
    baseline_x_w: Sequence[float],
    profile: WeightingProfile,
    sweep: SweepTable,
) -> RankedPolicies:
    """Score every sweep row through coupling + target and rank.

    Scoring is row-sequential so results are bit-identical to a plain scan
    over the same rows.
    """
    if not sweep.rows:
        raise ValueError("sweep table is empty")
    scored = []
    warnings = 0
    for row in sweep.rows:
        coupled = apply_fact_coupling(profile.coupling, baseline_x_w, row.indicators)
        if coupled.warned:
            warnings += 1
        scored.append(
            RankedRow(
                policy_id=row.policy_id,
                x_w_prime=coupled.x_w_prime,
                w_prime=predict(target, coupled.x_w_prime),
            )
        )
    scored.sort(key=lambda r: (-r.w_prime, r.policy_id))
    return RankedPolicies(rows=tuple(scored), perturbation_warnings=warnings)


def select_best(ranked: RankedPolicies) -> int:
    """Policy id with the highest coupled score (ties: smallest id)."""
    if not ranked.rows:
        raise ValueError("cannot select from an empty ranking")
    return ranked.rows[0].policy_id


def compare_profiles(
    target: RegressionModel,
    baseline_x_w: Sequence[float],
    profiles: Sequence[WeightingProfile],
    sweep: SweepTable,
) -> dict[str, int]:
    """Selected policy id per profile, in profile order."""
    if not profiles:
        raise ValueError("need at least one weighting profile")
    return {
        p.name: select_best(evaluate_policies(target, baseline_x_w, p, sweep))
        for p in profiles
    }
