"""Morse indices of iterated closed geodesics.

Two routes are provided and cross-checked in the tests:

* :func:`index_iterate_general` evaluates the iteration formula for an
  arbitrary basic normal form (all ten splitting numbers);
* :func:`index_iterate_elliptic` is its specialisation to endpoints made
  only of rotations with irrational turn, written with floors instead of
  ceilings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .numerics import (
    ExactReal,
    Rational,
    floor_of,
    from_literal,
    scaled_ceil,
    scaled_floor,
    scaled_varphi,
    to_literal,
)
from .symplectic import NormalFormData, R


class ModelError(ValueError):
    """A geodesic model violating its structural constraints."""


@dataclass(frozen=True)
class SymplecticPathModel:
    """A symplectic path from the identity: its index and endpoint data."""

    initial_index: int
    endpoint: NormalFormData

    def __post_init__(self):
        if not self.endpoint.check_dimension():
            raise ModelError("endpoint splitting numbers do not add up to the dimension")


@dataclass(frozen=True)
class GeodesicModel:
    """An irrationally elliptic prime closed geodesic on ``S^n``.

    ``turns`` are the ``n - 1`` rotation angles of the Poincare map written
    as fractions of a full turn, ``theta_k / 2pi``; each lies in ``(0, 1)``
    and is irrational.
    """

    n: int
    index: int
    turns: tuple[ExactReal, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "turns", tuple(self.turns))
        if self.n < 2:
            raise ModelError("ambient dimension must be at least 2")
        if self.index < 0:
            raise ModelError("initial index must be non-negative")
        if (self.index - (self.n - 1)) % 2:
            raise ModelError(
                f"initial index {self.index} must have the parity of n-1 = {self.n - 1}"
            )
        if len(self.turns) != self.n - 1:
            raise ModelError(f"expected {self.n - 1} angles, got {len(self.turns)}")
        for t in self.turns:
            if t.is_rational is True:
                raise ModelError(f"angle turn {t} is rational; the geodesic must be irrationally elliptic")
            if t.is_rational is None:
                raise ModelError(f"angle turn {t} is not known to be irrational")
            if not 0 < t < 1:
                raise ModelError(f"angle turn {t} outside (0, 1)")

    @property
    def name(self) -> str:
        return self.label or f"c(i={self.index})"

    def as_path_model(self) -> SymplecticPathModel:
        return SymplecticPathModel(self.index, NormalFormData(tuple(R(t) for t in self.turns)))

    def to_dict(self) -> dict:
        out = {"index": self.index, "angles": [to_literal(t) for t in self.turns]}
        if self.label:
            out = {"label": self.label, **out}
        return out

    @classmethod
    def from_dict(cls, n: int, obj: dict) -> GeodesicModel:
        return cls(n, int(obj["index"]), tuple(from_literal(a) for a in obj["angles"]), obj.get("label", ""))


@dataclass(frozen=True)
class IndexSequence:
    model: GeodesicModel
    values: tuple[int, ...]
    nullities: tuple[int, ...] = field(default=())

    @property
    def iterates(self) -> range:
        return range(1, len(self.values) + 1)


def index_iterate_general(path: SymplecticPathModel, m: int) -> int:
    """Index of the ``m``-th iterate from the full normal-form data."""
    if m < 1:
        raise ValueError("iterate must be positive")
    nf = path.endpoint
    p_minus, p_zero, r = nf.p_minus, nf.p_zero, nf.r
    even = 1 if m % 2 == 0 else 0
    total = m * (path.initial_index + p_minus + p_zero - r)
    total += 2 * sum(scaled_ceil(t, m) for t in nf.rotation_turns) - r
    total -= p_minus + p_zero + even * (nf.q_zero + nf.q_plus)
    total += 2 * sum(scaled_varphi(t, m) for t in nf.nontrivial_turns) - 2 * nf.r_star
    return total


def index_iterate_elliptic(g: GeodesicModel, m: int) -> int:
    """``m(i - n + 1) + 2 * sum_k [m t_k] + n - 1`` with exact floors."""
    if m < 1:
        raise ValueError("iterate must be positive")
    return m * (g.index - g.n + 1) + 2 * sum(scaled_floor(t, m) for t in g.turns) + g.n - 1


def index_sequence(g: GeodesicModel, count: int) -> IndexSequence:
    values = tuple(index_iterate_elliptic(g, m) for m in range(1, count + 1))
    return IndexSequence(g, values, (0,) * count)


def mean_index(g: GeodesicModel) -> ExactReal:
    """``i - (n - 1) + sum_k theta_k / pi``."""
    total: ExactReal = Rational(Fraction(g.index - (g.n - 1)))
    for t in g.turns:
        total = total + 2 * t
    return total


def parity_gap(g: GeodesicModel, m: int) -> int:
    """``i(c^{m+1}) - i(c^m)``; always even."""
    return index_iterate_elliptic(g, m + 1) - index_iterate_elliptic(g, m)


def mean_index_lower_bound(g: GeodesicModel) -> float:
    """A float not exceeding the mean index (may be <= 0)."""
    mid, rad = mean_index(g).enclosure(30)
    with mpmath.workdps(30):
        return float(mpmath.mpf(mid) - rad) - 1e-12


def iterate_bound(g: GeodesicModel, degree: int) -> int:
    """An iterate count past which every index exceeds ``degree``.

    Uses ``i(c^m) > m * mean - (n - 1)``; the extra slack matches the
    a-priori bound ``ceil((D + 2(n-1) + |i - n + 1|) / mean) + 1``.
    """
    lo = mean_index_lower_bound(g)
    if lo <= 0:
        raise ModelError(f"mean index of {g.name} is not positive; enumeration is unbounded")
    slack = degree + 2 * (g.n - 1) + abs(g.index - g.n + 1)
    return max(1, math.ceil(slack / lo) + 1)


def iterates_up_to(g: GeodesicModel, degree: int) -> list[tuple[int, int]]:
    """All ``(m, i(c^m))`` with ``i(c^m) <= degree``."""
    return [
        (m, i)
        for m in range(1, iterate_bound(g, degree) + 1)
        if (i := index_iterate_elliptic(g, m)) <= degree
    ]


def models_share_dimension(models: Sequence[GeodesicModel]) -> int | None:
    dims = {g.n for g in models}
    if len(dims) > 1:
        raise ModelError(f"models live on spheres of different dimensions {sorted(dims)}")
    return dims.pop() if dims else None


def floor_turns(g: GeodesicModel, m: int) -> list[int]:
    """``[m t_k]`` for each angle, handy for explaining index jumps."""
    return [floor_of(t * m) for t in g.turns]
