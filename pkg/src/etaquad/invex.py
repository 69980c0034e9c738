"""Direction maps and grid-sampled hypothesis checks.

A direction map eta(v, u) generalises the straight-line displacement
v - u: the path from u toward v is u + t*eta(v, u) for t in [0, 1].  A set
is invex under a map when every such path stays inside it; a function f is
preinvex when f along the path lies under the chord (1-t)f(u) + t*f(v),
and prequasiinvex when it lies under max(f(u), f(v)).

The checks here sample (u, v, t) on uniform grids and report the worst
normalised slack together with a witness triple when the property fails.
Grid sampling refutes but never proves; a pass means "no counterexample on
this grid", which is exactly what the harness needs for gating.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

import numpy as np

__all__ = [
    "EtaMapError",
    "EtaMap",
    "DifferenceMap",
    "ScaledMap",
    "PiecewiseSignMap",
    "TablePiece",
    "TableMap",
    "eta_from_json",
    "Domain",
    "HypothesisReport",
    "eta_eval",
    "path_point",
    "check_invex_set",
    "check_preinvex",
    "check_prequasiinvex",
]


class EtaMapError(ValueError):
    """A direction map was queried outside its covered region."""


class EtaMap:
    """Base class: callable as m(v, u), serialisable via to_json()."""

    kind: ClassVar[str] = ""

    def __call__(self, v, u):
        raise NotImplementedError

    def to_json(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class DifferenceMap(EtaMap):
    """eta(v, u) = v - u, the straight-line special case."""

    kind: ClassVar[str] = "difference"

    def __call__(self, v, u):
        return v - u


@dataclass(frozen=True)
class ScaledMap(EtaMap):
    """eta(v, u) = lam * (v - u) for a fixed nonzero lam."""

    lam: float
    kind: ClassVar[str] = "scaled"

    def __post_init__(self):
        if not np.isfinite(self.lam) or self.lam == 0.0:
            raise ValueError("lam must be finite and nonzero")

    def __call__(self, v, u):
        return self.lam * (v - u)

    def to_json(self) -> dict:
        return {"kind": self.kind, "lambda": self.lam}


@dataclass(frozen=True)
class PiecewiseSignMap(EtaMap):
    """eta(v, u) = v - u when u and v share a weak sign, u - v otherwise.

    The classic example map under which f(u) = -|u| is preinvex though not
    convex.  The same-sign branch wins at zero.  Serialised kind tag:
    ``paper_piecewise``.
    """

    kind: ClassVar[str] = "paper_piecewise"

    def __call__(self, v, u):
        same = ((u <= 0.0) & (v <= 0.0)) | ((u >= 0.0) & (v >= 0.0))
        return np.where(same, v - u, u - v)


@dataclass(frozen=True)
class TablePiece:
    """One affine piece, valid on [u_lo, u_hi] x [v_lo, v_hi]."""

    u_lo: float
    u_hi: float
    v_lo: float
    v_hi: float
    c0: float
    cu: float
    cv: float

    def __post_init__(self):
        if not (self.u_lo < self.u_hi and self.v_lo < self.v_hi):
            raise ValueError("piece rectangle must have positive extent")

    def to_json(self) -> dict:
        return {
            "u_lo": self.u_lo,
            "u_hi": self.u_hi,
            "v_lo": self.v_lo,
            "v_hi": self.v_hi,
            "c0": self.c0,
            "cu": self.cu,
            "cv": self.cv,
        }


@dataclass(frozen=True)
class TableMap(EtaMap):
    """Piecewise-affine map given by a table of rectangular pieces.

    Piece interiors must be pairwise disjoint; on shared boundaries the
    earliest piece wins.  Querying an uncovered (u, v) raises EtaMapError.
    """

    pieces: tuple[TablePiece, ...]
    kind: ClassVar[str] = "table"

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("table map needs at least one piece")
        for i, p in enumerate(self.pieces):
            for q in self.pieces[i + 1 :]:
                overlap_u = min(p.u_hi, q.u_hi) > max(p.u_lo, q.u_lo)
                overlap_v = min(p.v_hi, q.v_hi) > max(p.v_lo, q.v_lo)
                if overlap_u and overlap_v:
                    raise ValueError("piece interiors overlap")

    def __call__(self, v, u):
        u_arr, v_arr = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        out = np.zeros(u_arr.shape)
        covered = np.zeros(u_arr.shape, dtype=bool)
        for p in self.pieces:
            mask = (
                (u_arr >= p.u_lo)
                & (u_arr <= p.u_hi)
                & (v_arr >= p.v_lo)
                & (v_arr <= p.v_hi)
                & ~covered
            )
            out = np.where(mask, p.c0 + p.cu * u_arr + p.cv * v_arr, out)
            covered |= mask
        if not covered.all():
            bad = np.argwhere(~covered)[0]
            raise EtaMapError(
                f"(u, v) = ({u_arr[tuple(bad)]}, {v_arr[tuple(bad)]}) is outside every piece"
            )
        if out.ndim == 0 and not isinstance(u, np.ndarray) and not isinstance(v, np.ndarray):
            return float(out)
        return out

    def to_json(self) -> dict:
        return {"kind": self.kind, "pieces": [p.to_json() for p in self.pieces]}


def eta_from_json(obj: dict) -> EtaMap:
    """Inverse of EtaMap.to_json()."""
    kind = obj.get("kind")
    if kind == "difference":
        return DifferenceMap()
    if kind == "scaled":
        return ScaledMap(float(obj["lambda"]))
    if kind == "paper_piecewise":
        return PiecewiseSignMap()
    if kind == "table":
        pieces = tuple(
            TablePiece(
                float(p["u_lo"]),
                float(p["u_hi"]),
                float(p["v_lo"]),
                float(p["v_hi"]),
                float(p["c0"]),
                float(p["cu"]),
                float(p["cv"]),
            )
            for p in obj["pieces"]
        )
        return TableMap(pieces)
    raise ValueError(f"unknown direction map kind {kind!r}")


@dataclass(frozen=True)
class Domain:
    """A closed interval [lo, hi].  ``unbounded`` marks the interval as a
    sampling proxy for the whole line rather than a hard membership set."""

    lo: float
    hi: float
    unbounded: bool = False

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi) and self.lo < self.hi):
            raise ValueError("domain needs finite lo < hi")

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.lo, self.hi, n)


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of a sampled check.

    ``worst_slack`` is the largest normalised violation observed (<= 0 or
    tiny when passing); ``witness`` is the first grid triple (u, v, t)
    attaining it, present exactly when the check failed.
    """

    passed: bool
    checked: int
    worst_slack: float
    witness: tuple[float, float, float] | None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "worst_slack": self.worst_slack,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def eta_eval(emap: EtaMap, v, u):
    """eta(v, u): the displacement that points from u toward v."""
    return emap(v, u)


def path_point(emap: EtaMap, u, v, t):
    """u + t*eta(v, u), the path position at parameter t."""
    return u + t * emap(v, u)


def _value_fn(f):
    return f.value if hasattr(f, "value") else f


def _grids(dom: Domain, grid_n: int):
    u = dom.grid(grid_n)
    t = np.linspace(0.0, 1.0, grid_n)
    U = u[:, None, None]
    V = u[None, :, None]
    T = t[None, None, :]
    return u, t, U, V, T


def _verdict(slack: np.ndarray, u: np.ndarray, t: np.ndarray, tol: float) -> HypothesisReport:
    worst = float(np.max(slack))
    passed = worst <= tol
    witness = None
    if not passed:
        i, j, k = np.unravel_index(int(np.argmax(slack)), slack.shape)
        witness = (float(u[i]), float(u[j]), float(t[k]))
    return HypothesisReport(passed, slack.size, worst, witness)


def check_invex_set(
    emap: EtaMap,
    dom: Domain,
    grid_n: int = 65,
    sample: Domain | None = None,
    tol: float = 1e-12,
) -> HypothesisReport:
    """Does every sampled path u -> v stay inside ``dom``?

    Endpoints u, v are drawn from ``sample`` (default: dom itself), which
    matters when dom is an unbounded proxy.  Slack is the absolute distance
    a path point escapes [dom.lo, dom.hi].
    """
    box = sample if sample is not None else dom
    u, t, U, V, T = _grids(box, grid_n)
    points = U + T * emap(V, U)
    outside = np.maximum(dom.lo - points, points - dom.hi)
    slack = np.maximum(outside, 0.0)
    return _verdict(slack, u, t, tol)


def _chord_check(f, emap, dom, grid_n, tol, quasi: bool) -> HypothesisReport:
    fn = _value_fn(f)
    u, t, U, V, T = _grids(dom, grid_n)
    fu = fn(u)
    path = U + T * emap(V, U)
    fpath = fn(path)
    left = fu[:, None, None]
    right = fu[None, :, None]
    if quasi:
        rhs = np.maximum(left, right)
    else:
        rhs = (1.0 - T) * left + T * right
    scale = np.maximum(1.0, np.maximum(np.abs(rhs), np.abs(fpath)))
    slack = (fpath - rhs) / scale
    return _verdict(slack, u, t, tol)


def check_preinvex(
    f, emap: EtaMap, dom: Domain, grid_n: int = 65, tol: float = 1e-9
) -> HypothesisReport:
    """Sampled chord test f(u + t*eta(v,u)) <= (1-t)f(u) + t*f(v)."""
    return _chord_check(f, emap, dom, grid_n, tol, quasi=False)


def check_prequasiinvex(
    f, emap: EtaMap, dom: Domain, grid_n: int = 65, tol: float = 1e-9
) -> HypothesisReport:
    """Sampled test f(u + t*eta(v,u)) <= max(f(u), f(v))."""
    return _chord_check(f, emap, dom, grid_n, tol, quasi=True)
