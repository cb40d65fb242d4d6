"""Morse-type numbers of the iterates and the Morse inequalities."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .iteration import (
    GeodesicModel,
    index_iterate_elliptic,
    iterate_bound,
    models_share_dimension,
)
from .topology import BettiTable


def critical_module_rank(g: GeodesicModel, m: int, p: int) -> int:
    """Rank of the local critical module of ``c^m`` in degree ``p``.

    For a non-degenerate iterate this is 1 exactly when ``i(c^m) - i(c)`` is
    even and ``p = i(c^m)``; the parity condition always holds for
    irrationally elliptic models.
    """
    i_m = index_iterate_elliptic(g, m)
    return int((i_m - g.index) % 2 == 0 and p == i_m)


@dataclass(frozen=True)
class MorseTable:
    models: tuple[GeodesicModel, ...]
    max_degree: int
    per_model: tuple[tuple[int, ...], ...]
    iterate_bounds: tuple[int, ...]

    @property
    def totals(self) -> tuple[int, ...]:
        if not self.per_model:
            return (0,) * (self.max_degree + 1)
        return tuple(sum(col) for col in zip(*self.per_model))

    def __getitem__(self, p: int) -> int:
        if p < 0 or p > self.max_degree:
            raise IndexError(f"degree {p} outside table range 0..{self.max_degree}")
        return self.totals[p]

    def __add__(self, other: MorseTable) -> MorseTable:
        if self.max_degree != other.max_degree:
            raise ValueError("tables must share the degree bound")
        return MorseTable(
            self.models + other.models,
            self.max_degree,
            self.per_model + other.per_model,
            self.iterate_bounds + other.iterate_bounds,
        )


def morse_counts(models: Sequence[GeodesicModel], max_degree: int, bound_factor: int = 1) -> MorseTable:
    """``M_p(j) = #{m >= 1 : i(c_j^m) = p}`` for ``0 <= p <= max_degree``.

    Enumeration stops at the a-priori iterate bound (scaled by
    ``bound_factor``), beyond which every index exceeds ``max_degree``.
    """
    models = tuple(models)
    models_share_dimension(models)
    rows, bounds = [], []
    for g in models:
        bound = iterate_bound(g, max_degree) * bound_factor
        counts = [0] * (max_degree + 1)
        for m in range(1, bound + 1):
            p = index_iterate_elliptic(g, m)
            if 0 <= p <= max_degree:
                counts[p] += 1
        rows.append(tuple(counts))
        bounds.append(bound)
    return MorseTable(models, max_degree, tuple(rows), tuple(bounds))


def _alternating(values: Sequence[int], p: int) -> int:
    return sum((-1) ** (p - k) * values[k] for k in range(p + 1))


@dataclass(frozen=True)
class InequalityRow:
    degree: int
    morse: int
    betti: int
    morse_alternating: int
    betti_alternating: int

    @property
    def plain_ok(self) -> bool:
        return self.morse >= self.betti

    @property
    def alternating_ok(self) -> bool:
        return self.morse_alternating >= self.betti_alternating

    @property
    def status(self) -> str:
        if self.plain_ok and self.alternating_ok:
            return "ok"
        failed = [name for name, ok in (("M<b", self.plain_ok), ("alt", self.alternating_ok)) if not ok]
        return "violated:" + ",".join(failed)


@dataclass(frozen=True)
class InequalityReport:
    rows: tuple[InequalityRow, ...]

    @property
    def first_violation(self) -> int | None:
        for row in self.rows:
            if row.status != "ok":
                return row.degree
        return None

    @property
    def holds(self) -> bool:
        return self.first_violation is None

    def row(self, p: int) -> InequalityRow:
        return self.rows[p]


def check_morse_inequalities(M: MorseTable, b: BettiTable, max_degree: int | None = None) -> InequalityReport:
    """``M_p >= b_p`` and the alternating partial sums, degree by degree."""
    D = M.max_degree if max_degree is None else max_degree
    if D > M.max_degree or D > b.max_degree:
        raise ValueError("degree bound exceeds the tables")
    Ms = M.totals
    bs = [b[p] for p in range(D + 1)]
    rows = tuple(
        InequalityRow(p, Ms[p], bs[p], _alternating(Ms, p), _alternating(bs, p))
        for p in range(D + 1)
    )
    return InequalityReport(rows)


@dataclass(frozen=True)
class ParityReport:
    """Wrong-parity vanishing is forced; right-parity equality is only a
    realizability diagnostic."""

    vanishing_failures: tuple[int, ...]
    equality_failures: tuple[int, ...]

    @property
    def vanishing_holds(self) -> bool:
        return not self.vanishing_failures

    @property
    def equality_holds(self) -> bool:
        return not self.equality_failures


def check_parity_vanishing(
    M: MorseTable, b: BettiTable, n: int, max_degree: int | None = None, degrees: Sequence[int] | None = None
) -> ParityReport:
    D = M.max_degree if max_degree is None else max_degree
    span = range(D + 1) if degrees is None else degrees
    vanishing, equality = [], []
    for p in span:
        if (p - n) % 2 == 0:
            if M[p] != 0 or b[p] != 0:
                vanishing.append(p)
        elif M[p] != b[p]:
            equality.append(p)
    return ParityReport(tuple(vanishing), tuple(equality))
