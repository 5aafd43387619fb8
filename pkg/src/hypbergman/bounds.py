"""Closed-form bound constants and growth envelopes for the kernel norm.

Two regimes are covered, split at half the injectivity radius r:

* near: 0 <= delta <= r/2, bounded by ``constant_c2``
* mid:  r/2 < delta < r,   bounded by ``constant_c1``

(delta >= r belongs to a different estimate and is out of scope here; the
``prior-am1`` envelope exposes only its shape for comparison plots.)
Noncompact surfaces add ``noncompact_extra``, which accounts for the cusp
stabilizer's contribution.  Envelopes are growth shapes without their
surface-dependent constants and are never used as certified bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PreconditionError
from .kernel import log_cosh

__all__ = [
    "BoundInput",
    "BoundReport",
    "constant_c1",
    "constant_c2",
    "noncompact_extra",
    "theorem_bound",
    "envelope",
    "classify_regime",
]

ENVELOPE_KINDS = ("remark-mid", "remark-near", "prior-am1", "diag-compact", "diag-noncompact")


def _pow_sech(x: float, p: float) -> float:
    """cosh(x)^(-p) in log space."""
    return math.exp(-p * log_cosh(x))


def classify_regime(delta: float, r_x: float) -> str:
    """near on [0, r/2] (inclusive at r/2), mid on (r/2, r), else error."""
    if delta < 0:
        raise PreconditionError("delta must be nonnegative")
    if delta <= r_x / 2.0:
        return "near"
    if delta < r_x:
        return "mid"
    raise PreconditionError(
        f"delta = {delta} is not below the injectivity radius {r_x}"
    )


@dataclass(frozen=True)
class BoundInput:
    """One bound-evaluation site.

    y and v (the imaginary parts of the pair) are only consulted for
    noncompact surfaces, where the cusp correction needs them.
    """

    k: int
    r_x: float
    delta: float
    kind: str  # compact | noncompact
    regime: str  # near | mid
    y: float | None = None
    v: float | None = None

    def __post_init__(self):
        if self.k < 3:
            raise PreconditionError(f"weight k must be >= 3, got {self.k}")
        if not (math.isfinite(self.r_x) and self.r_x > 0):
            raise PreconditionError("a finite positive injectivity radius is required")
        if self.kind not in ("compact", "noncompact"):
            raise PreconditionError(f"unknown surface kind {self.kind!r}")
        if self.regime != classify_regime(self.delta, self.r_x):
            raise PreconditionError(
                f"regime {self.regime!r} is inconsistent with delta = {self.delta}, "
                f"r_X = {self.r_x}"
            )
        if self.kind == "noncompact" and (self.y is None or self.v is None):
            raise PreconditionError("noncompact inputs carry y and v")


@dataclass(frozen=True)
class BoundReport:
    """Bound vs measurement at one site; passed iff the margin is >= 0."""

    bound_value: float
    measured_value: float
    margin: float
    passed: bool

    @classmethod
    def compare(cls, bound_value: float, measured_value: float) -> "BoundReport":
        margin = bound_value - measured_value
        return cls(bound_value, measured_value, margin, margin >= 0.0)


def constant_c1(k: int, r_x: float, delta: float) -> float:
    """Mid-regime bound constant (r/2 < delta < r)."""
    if k < 3:
        raise PreconditionError(f"weight k must be >= 3, got {k}")
    if not (r_x / 2.0 < delta < r_x):
        raise PreconditionError(
            f"delta = {delta} outside the mid regime ({r_x / 2.0}, {r_x})"
        )
    lead = (2.0 * k - 1.0) / (4.0 * math.pi)
    bracket = _pow_sech((r_x - delta) / 2.0, 2 * k) + 32.0 * _pow_sech(r_x / 4.0, 2 * k - 4)
    second = (
        (2.0 * k - 1.0)
        / (math.pi * (k - 2.0) * math.sinh(r_x / 4.0) ** 2)
        * _pow_sech(r_x / 4.0, 2 * k - 4)
    )
    return lead * bracket + second


def constant_c2(k: int, r_x: float, delta: float) -> float:
    """Near-regime bound constant (0 <= delta <= r/2)."""
    if k < 3:
        raise PreconditionError(f"weight k must be >= 3, got {k}")
    if not (0.0 <= delta <= r_x / 2.0):
        raise PreconditionError(
            f"delta = {delta} outside the near regime [0, {r_x / 2.0}]"
        )
    lead = (2.0 * k - 1.0) / (4.0 * math.pi)
    bracket = (
        2.0 * _pow_sech(delta / 2.0, 2 * k)
        + 16.0 * _pow_sech(r_x / 4.0, 2 * k - 4)
        + 8.0 * _pow_sech(r_x / 2.0, 2 * k - 3)
    )
    second = (
        (2.0 * k - 1.0)
        / (2.0 * math.pi * math.sinh(r_x / 4.0) ** 2)
        * (
            _pow_sech(r_x / 2.0, 2 * k - 3) / (2.0 * k - 2.0)
            + _pow_sech(r_x / 2.0, 2 * k - 4) / (k - 2.0)
        )
    )
    return lead * bracket + second


def noncompact_extra(k: int, delta: float, y: float, v: float) -> float:
    """Cusp-stabilizer correction added to either constant when noncompact.

    The Gamma ratio goes through log-gamma and the (4yv)^k/(y+v)^(2k-1)
    factor through logs, so the term survives k in the hundreds.
    """
    if k < 3:
        raise PreconditionError(f"weight k must be >= 3, got {k}")
    if not (y > 0 and v > 0):
        raise PreconditionError("y and v must be positive")
    first = (2.0 * k - 1.0) / (4.0 * math.pi) * _pow_sech(delta / 2.0, 2 * k)
    log_factor = k * math.log(4.0 * y * v) - (2.0 * k - 1.0) * math.log(y + v)
    log_gamma_ratio = math.lgamma(k - 0.5) - math.lgamma(k)
    second = math.exp(
        log_factor
        + math.log(2.0 * k - 1.0)
        + log_gamma_ratio
        - math.log(2.0 * math.sqrt(math.pi))
    )
    return first + second


def theorem_bound(inp: BoundInput) -> float:
    """Dispatch to the regime constant, plus the cusp term when noncompact."""
    if inp.regime == "mid":
        base = constant_c1(inp.k, inp.r_x, inp.delta)
    else:
        base = constant_c2(inp.k, inp.r_x, inp.delta)
    if inp.kind == "noncompact":
        base += noncompact_extra(inp.k, inp.delta, inp.y, inp.v)
    return base


def envelope(k: int, delta: float, r_x: float, which: str) -> float:
    """Growth shape without its surface constant; for ratio fits only,
    never a certified bound."""
    if which == "remark-mid":
        return k * _pow_sech((r_x - delta) / 2.0, 2 * k)
    if which == "remark-near":
        return k * _pow_sech(delta / 2.0, 2 * k)
    if which == "prior-am1":
        return k * _pow_sech((delta - r_x) / 2.0, 2 * k - 4)
    if which == "diag-compact":
        return float(k)
    if which == "diag-noncompact":
        return float(k) ** 1.5
    raise PreconditionError(f"unknown envelope kind {which!r}; expected one of {ENVELOPE_KINDS}")
