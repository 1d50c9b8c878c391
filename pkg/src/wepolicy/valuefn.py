"""Well-being value functions.

Three families live here:

* `ValueFunctionSpec` — the classic curve menagerie (linear, logarithmic,
  power, quadratic, exponential, linear+exponential), defined for x >= 0.
* `AsymmetricSpec` — the loss-averse two-branch exponential: saturating
  gains, amplified losses, continuous and zero at the origin.
* `SarchSpec` — a signed power form whose exponent discounts (< 1) or
  inflates (> 1) increments of net enjoyment.

All specs are immutable and callable; evaluation is pure, so concurrent use
is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

FAMILIES = ("linear", "logarithmic", "power", "quadratic", "exponential", "lin_exp")

REGIME_DISCOUNTED = "discounted"
REGIME_NEUTRAL = "neutral"
REGIME_INFLATED = "inflated"


@dataclass(frozen=True)
class ValueFunctionSpec:
    """One member of the curve menagerie, defined on x >= 0.

    Coefficient meaning per family:
        linear       x            (a, b unused)
        logarithmic  ln(a + x)    (a > 0 so the curve exists at x = 0)
        power        x ** a       (a > 0)
        quadratic    a*x - x^2    (non-monotone past x = a/2; see
                                   `quadratic_monotone_limit`)
        exponential  1 - e^(-a*x) (a > 0)
        lin_exp      b*x - e^(-a*x)
    """

    family: str
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(
                f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}"
            )
        if self.family in ("logarithmic", "power", "exponential") and not self.a > 0:
            raise ValueError(f"{self.family} family requires a > 0, got {self.a}")
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("coefficients must be finite")

    def __call__(self, x: float) -> float:
        return evaluate_family(self, x)


def evaluate_family(spec: ValueFunctionSpec, x: float) -> float:
    """Evaluate the family formula at x >= 0.

    Raises DomainError for x < 0 or a non-positive logarithm argument.
    """
    if x < 0:
        raise DomainError(f"{spec.family} family is defined for x >= 0, got {x}")
    if spec.family == "linear":
        return x
    if spec.family == "logarithmic":
        arg = spec.a + x
        if arg <= 0:
            raise DomainError(f"logarithm argument must be positive, got a + x = {arg}")
        return math.log(arg)
    if spec.family == "power":
        return x**spec.a
    if spec.family == "quadratic":
        return spec.a * x - x * x
    if spec.family == "exponential":
        return 1.0 - math.exp(-spec.a * x)
    # lin_exp
    return spec.b * x - math.exp(-spec.a * x)


def quadratic_monotone_limit(spec: ValueFunctionSpec) -> float:
    """Largest x up to which the quadratic family is increasing (its peak a/2)."""
    if spec.family != "quadratic":
        raise ValueError("monotone limit only applies to the quadratic family")
    return spec.a / 2.0


@dataclass(frozen=True)
class AsymmetricSpec:
    """Loss-averse two-branch exponential value function.

        W(x) = 1 - e^(-gain_alpha * x)            x >= 0
        W(x) = -loss_lambda * (1 - e^(loss_beta * x))   x < 0

    Continuous at 0 with W(0) = 0, strictly increasing, bounded in
    (-loss_lambda, 1). loss_lambda >= 1 makes losses loom at least as
    large as gains.
    """

    gain_alpha: float = 1.0
    loss_beta: float = 1.0
    loss_lambda: float = 2.0

    def __post_init__(self):
        if not self.gain_alpha > 0:
            raise ValueError(f"gain_alpha must be > 0, got {self.gain_alpha}")
        if not self.loss_beta > 0:
            raise ValueError(f"loss_beta must be > 0, got {self.loss_beta}")
        if not self.loss_lambda >= 1:
            raise ValueError(f"loss_lambda must be >= 1, got {self.loss_lambda}")

    def __call__(self, x: float) -> float:
        return evaluate_asymmetric(self, x)


def evaluate_asymmetric(spec: AsymmetricSpec, x: float) -> float:
    if x >= 0:
        return 1.0 - math.exp(-spec.gain_alpha * x)
    return -spec.loss_lambda * (1.0 - math.exp(spec.loss_beta * x))


def asymmetric_derivative(spec: AsymmetricSpec, x: float) -> float:
    """Analytic dW/dx; the right derivative is used at x = 0."""
    if x >= 0:
        return spec.gain_alpha * math.exp(-spec.gain_alpha * x)
    return spec.loss_lambda * spec.loss_beta * math.exp(spec.loss_beta * x)


@dataclass(frozen=True)
class MirroredFamily:
    """Any x >= 0 family extended to losses as -loss_lambda * family(-x).

    The asymmetric exponential is exactly this wrapper applied to the
    exponential family; the wrapper makes the rest of the menagerie usable
    on the full line with the same loss asymmetry.
    """

    base: ValueFunctionSpec
    loss_lambda: float = 2.0

    def __post_init__(self):
        if not self.loss_lambda >= 1:
            raise ValueError(f"loss_lambda must be >= 1, got {self.loss_lambda}")

    def __call__(self, x: float) -> float:
        if x >= 0:
            return evaluate_family(self.base, x)
        return -self.loss_lambda * evaluate_family(self.base, -x)


@dataclass(frozen=True)
class SarchSpec:
    """Signed power form with an achievement-conditioned exponent.

    The exponent is taken as a direct numeric input; only its position
    relative to 1 matters for the regime.
    """

    exponent: float

    def __post_init__(self):
        if not self.exponent > 0:
            raise ValueError(f"exponent must be > 0, got {self.exponent}")

    def __call__(self, x: float) -> float:
        return evaluate_sarch(self, x)


def evaluate_sarch(spec: SarchSpec, x: float) -> float:
    if x >= 0:
        return x**spec.exponent
    return -((-x) ** spec.exponent)


def sarch_regime(spec: SarchSpec) -> str:
    """Classify the exponent: < 1 discounted, = 1 neutral, > 1 inflated."""
    if spec.exponent < 1:
        return REGIME_DISCOUNTED
    if spec.exponent == 1:
        return REGIME_NEUTRAL
    return REGIME_INFLATED


# Anything a WE layer can evaluate: full-line curves plus the raw families
# (raw families are restricted to x >= 0 and raise DomainError below it).
ValueCurve = AsymmetricSpec | MirroredFamily | ValueFunctionSpec
