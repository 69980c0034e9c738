"""Closed-form bounds on the corrected-trapezoid remainder.

Ten selectable variants, keyed T2.1..T3.3 and C2.1..C2.4.  All bound
|integral - Q| over the segment from b to b + h in terms of the endpoint
third-derivative magnitudes A = |f'''(a)| and B = |f'''(b)| and a power
h^4.  The T2.x family assumes |f'''|^q is preinvex along the path and uses
a power mean of (A, B); the T3.x family assumes prequasiinvexity and uses
max(A, B).  The C2.x values are the straight-line corollaries.

Every prefactor decomposes into moments of the weight w(t) = t(1-t)(2t-1)
that are also exposed individually, so each closed form can be cross-
checked against quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "THEOREM_ORDER",
    "COROLLARIES",
    "POWER_MEAN_BOUNDS",
    "HOLDER_BOUNDS",
    "BoundSpec",
    "DerivativeData",
    "BoundValue",
    "moment_c1",
    "moment_c2",
    "holder_weighted_moment",
    "beta_moment",
    "abs_moment",
    "gamma_ratio",
    "bound",
]

# Tie-break order used by the tournament.
THEOREM_ORDER = ("T2.1", "T2.2", "T2.3", "T3.1", "T3.2", "T3.3")
COROLLARIES = ("C2.1", "C2.2", "C2.3", "C2.4")

# q >= 1 suffices for these; the rest need q > 1 for the conjugate exponent.
POWER_MEAN_BOUNDS = ("T2.1", "T3.1", "C2.1", "C2.2", "C2.3", "C2.4")
HOLDER_BOUNDS = ("T2.2", "T2.3", "T3.2", "T3.3")


@dataclass(frozen=True)
class BoundSpec:
    """Which bound to evaluate, and at which exponent q."""

    theorem: str
    q: float = 1.0

    def __post_init__(self):
        if self.theorem not in POWER_MEAN_BOUNDS and self.theorem not in HOLDER_BOUNDS:
            raise ValueError(f"unknown bound selector {self.theorem!r}")
        if not math.isfinite(self.q):
            raise ValueError("q must be finite")
        if self.theorem in HOLDER_BOUNDS:
            if self.q <= 1.0:
                raise ValueError(f"{self.theorem} requires q > 1")
        elif self.q < 1.0:
            raise ValueError(f"{self.theorem} requires q >= 1")

    @property
    def p(self) -> float:
        """Conjugate exponent q/(q-1); defined only for q > 1."""
        if self.q <= 1.0:
            raise ValueError("conjugate exponent needs q > 1")
        return self.q / (self.q - 1.0)

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "q": self.q}

    @classmethod
    def from_json(cls, obj: dict) -> "BoundSpec":
        return cls(str(obj["theorem"]), float(obj.get("q", 1.0)))


@dataclass(frozen=True)
class DerivativeData:
    """Endpoint third-derivative magnitudes A = |f'''(a)|, B = |f'''(b)|."""

    a3: float
    b3: float

    def __post_init__(self):
        if not (math.isfinite(self.a3) and math.isfinite(self.b3)):
            raise ValueError("derivative magnitudes must be finite")
        if self.a3 < 0.0 or self.b3 < 0.0:
            raise ValueError("derivative magnitudes must be nonnegative")

    @classmethod
    def from_function(cls, f, a: float, b: float) -> "DerivativeData":
        return cls(abs(f.jet3(a).d3), abs(f.jet3(b).d3))


@dataclass(frozen=True)
class BoundValue:
    """A bound evaluation with the constants that entered it, for audit."""

    value: float
    spec: BoundSpec
    constants_used: dict

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "theorem": self.spec.theorem,
            "q": self.spec.q,
            "constants_used": dict(self.constants_used),
        }


def moment_c1() -> float:
    """integral_0^1 t(1-t)|2t-1| dt = 1/16."""
    return 1.0 / 16.0


def moment_c2() -> float:
    """integral_0^1 t^2(1-t)|2t-1| dt = integral_0^1 t(1-t)^2|2t-1| dt = 1/32."""
    return 1.0 / 32.0


def holder_weighted_moment(p: float) -> float:
    """integral_0^1 t(1-t)|2t-1|^p dt = 1 / (2(p+1)(p+3)) for p > 1."""
    if not p > 1.0:
        raise ValueError("p must exceed 1")
    return 1.0 / (2.0 * (p + 1.0) * (p + 3.0))


def beta_moment(p: float) -> float:
    """integral_0^1 (t - t^2)^p dt = 2^(-1-2p) sqrt(pi) Gamma(1+p)/Gamma(3/2+p)."""
    if not p > 0.0:
        raise ValueError("p must be positive")
    log_val = (
        (-1.0 - 2.0 * p) * math.log(2.0)
        + 0.5 * math.log(math.pi)
        + math.lgamma(1.0 + p)
        - math.lgamma(1.5 + p)
    )
    return math.exp(log_val)


def abs_moment(q: float) -> float:
    """integral_0^1 t|2t-1|^q dt = integral_0^1 (1-t)|2t-1|^q dt = 1/(2(q+1))."""
    if not q > 0.0:
        raise ValueError("q must be positive")
    return 1.0 / (2.0 * (q + 1.0))


def gamma_ratio(p: float) -> float:
    """Gamma(1+p)/Gamma(3/2+p), computed stably via lgamma."""
    if not p > 0.0:
        raise ValueError("p must be positive")
    return math.exp(math.lgamma(1.0 + p) - math.lgamma(1.5 + p))


def _power_mean(a: float, b: float, q: float) -> float:
    # Exact at a == b: skip the pow round trip so symmetric data gives
    # bit-identical T2.1 and T3.1 values.
    if a == b:
        return a
    return ((a ** q + b ** q) / 2.0) ** (1.0 / q)


def bound(spec: BoundSpec, h: float, d: DerivativeData, tight: bool = False) -> BoundValue:
    """Evaluate the selected bound for displacement ``h`` and data ``d``.

    ``tight`` applies only to T3.3: the printed constant h^4/48*(...) can be
    sharpened by 2^(-1/p) by splitting the weight integral at t = 1/2; the
    default reproduces the printed form.
    """
    if not math.isfinite(h):
        raise ValueError("displacement h must be finite")
    if tight and spec.theorem != "T3.3":
        raise ValueError("tight variant exists only for T3.3")

    h4 = h ** 4
    A, B = d.a3, d.b3
    q = spec.q
    thm = spec.theorem

    if thm in ("T2.1", "C2.2"):
        mean = _power_mean(A, B, q)
        constants = {
            "kernel_moment": moment_c1(),
            "weighted_kernel_moments": moment_c2(),
            "prefactor": 1.0 / 192.0,
        }
        if thm == "C2.2":
            # The printed corollary constant 1/384 agrees with the power
            # mean form only at q = 1; the power mean form is what holds.
            constants["printed_q1_prefactor"] = 1.0 / 384.0
        return BoundValue(h4 / 192.0 * mean, spec, constants)

    if thm == "C2.1":
        return BoundValue(
            h4 / 384.0 * (A + B),
            spec,
            {"weighted_kernel_moments": moment_c2(), "prefactor": 1.0 / 384.0},
        )

    if thm in ("T3.1", "C2.3", "C2.4"):
        return BoundValue(
            h4 / 192.0 * max(A, B),
            spec,
            {"kernel_moment": moment_c1(), "prefactor": 1.0 / 192.0},
        )

    p = spec.p
    if thm == "T2.2":
        prefactor = 1.0 / (24.0 * 6.0 ** (1.0 / q))
        value = (
            h4
            * prefactor
            * ((p + 1.0) * (p + 3.0)) ** (-1.0 / p)
            * (A ** q + B ** q) ** (1.0 / q)
        )
        return BoundValue(
            value,
            spec,
            {"holder_weighted_moment": holder_weighted_moment(p), "prefactor": prefactor},
        )

    if thm == "T3.2":
        prefactor = 1.0 / (24.0 * 3.0 ** (1.0 / q))
        value = h4 * prefactor * ((p + 1.0) * (p + 3.0)) ** (-1.0 / p) * max(A, B)
        return BoundValue(
            value,
            spec,
            {"holder_weighted_moment": holder_weighted_moment(p), "prefactor": prefactor},
        )

    gr = gamma_ratio(p)
    if thm == "T2.3":
        value = (
            h4
            / 96.0
            * math.sqrt(math.pi) ** (1.0 / p)
            * gr ** (1.0 / p)
            * (q + 1.0) ** (-1.0 / q)
            * (A ** q + B ** q) ** (1.0 / q)
        )
        return BoundValue(
            value,
            spec,
            {
                "beta_moment": beta_moment(p),
                "abs_moment": abs_moment(q),
                "gamma_ratio": gr,
                "prefactor": 1.0 / 96.0,
            },
        )

    # T3.3
    value = (
        h4
        / 48.0
        * math.sqrt(math.pi) ** (1.0 / p)
        * gr ** (1.0 / p)
        * (q + 1.0) ** (-1.0 / q)
        * max(A, B)
    )
    constants = {
        "beta_moment": beta_moment(p),
        "kernel_abs_moment": 1.0 / (q + 1.0),
        "gamma_ratio": gr,
        "prefactor": 1.0 / 48.0,
        "tight_factor": 2.0 ** (-1.0 / p),
    }
    if tight:
        value *= 2.0 ** (-1.0 / p)
    return BoundValue(value, spec, constants)
