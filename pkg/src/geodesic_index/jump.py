"""Search and verification of common index jump certificates.

A certificate is ``(N, m_1, ..., m_q)`` with a divisor ``M0 | N`` such that
for every geodesic

    i(c_j^{2m_j - 1}) = 2N - i(c_j),    i(c_j^{2m_j + 1}) = 2N + i(c_j),
    2N - (n-1) <= i(c_j^{2m_j}) <= 2N + (n-1),

and, for the distinguished geodesic (initial index ``n - 1``), some angle
with turn ``t`` in ``(1/2, 1)`` satisfies

    {2 m_1 t} > max(1 - {2t}, 1 - t)    and    {2 m_1 t} > max({2t}, t),

which makes the indices jump by two right after ``2m_1 + 1`` and right
before ``2m_1 - 1``.  The search returns the smallest admissible ``N``
below a bound; later ones are reached by raising ``N_min``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .iteration import (
    GeodesicModel,
    index_iterate_elliptic,
    mean_index,
    models_share_dimension,
)
from .numerics import ExactReal, Rational, compare, floor_of, frac_of

HALF = Rational(Fraction(1, 2))

MODEL_CONDITIONS = ("lower_jump", "upper_jump", "middle_in_window")
FRACTION_CONDITIONS = ("gap_after", "gap_before")


class PreconditionError(ValueError):
    def __init__(self, message: str, model: int | None = None):
        super().__init__(message)
        self.model = model


class CertificateNotFound(LookupError):
    pass


@dataclass(frozen=True)
class JumpCertificate:
    N: int
    iterates: tuple[int, ...]
    M0: int
    distinguished: int
    witness: int | None = None
    checks: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "iterates": list(self.iterates),
            "M0": self.M0,
            "distinguished": self.distinguished,
            "witness": self.witness,
            "checks": dict(self.checks),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> JumpCertificate:
        return cls(
            int(obj["N"]),
            tuple(int(m) for m in obj["iterates"]),
            int(obj["M0"]),
            int(obj["distinguished"]),
            obj.get("witness"),
            dict(obj.get("checks", {})),
        )


def distinguished_index(models: Sequence[GeodesicModel]) -> int:
    """Position of the unique model with initial index ``n - 1``."""
    n = models_share_dimension(models)
    hits = [j for j, g in enumerate(models) if g.index == n - 1]
    if len(hits) != 1:
        raise PreconditionError(f"expected exactly one model with index n-1={n - 1}, found {len(hits)}")
    return hits[0]


def witness_angles(g: GeodesicModel) -> list[int]:
    """Angles with ``theta / pi`` in ``(1, 2)``."""
    return [k for k, t in enumerate(g.turns) if compare(t, HALF) > 0]


def check_preconditions(models: Sequence[GeodesicModel]) -> int:
    if not models:
        raise PreconditionError("no models given")
    n = models_share_dimension(models)
    star = distinguished_index(models)
    for j, g in enumerate(models):
        if j != star and g.index < n + 1:
            raise PreconditionError(f"model {g.name} has index {g.index} < n+1", j)
        if compare(mean_index(g), 0) <= 0:
            raise PreconditionError(f"model {g.name} has non-positive mean index", j)
    if not witness_angles(models[star]):
        raise PreconditionError(
            f"distinguished model {models[star].name} has no angle in (pi, 2pi)", star
        )
    return star


def model_conditions(g: GeodesicModel, N: int, m: int, index=index_iterate_elliptic) -> dict[str, bool]:
    if m < 1:
        return dict.fromkeys(MODEL_CONDITIONS, False)
    lo, hi = 2 * N - (g.n - 1), 2 * N + (g.n - 1)
    return {
        "lower_jump": index(g, 2 * m - 1) == 2 * N - g.index,
        "upper_jump": index(g, 2 * m + 1) == 2 * N + g.index,
        "middle_in_window": lo <= index(g, 2 * m) <= hi,
    }


def fraction_conditions(turn: ExactReal, m: int) -> dict[str, bool]:
    """The two fractional-part inequalities for one witnessing angle."""
    x = frac_of(2 * m * turn)
    a = frac_of(2 * turn)
    return {
        "gap_after": compare(x, 1 - a) > 0 and compare(x, 1 - turn) > 0,
        "gap_before": compare(x, a) > 0 and compare(x, turn) > 0,
    }


def _first_witness(g: GeodesicModel, m: int) -> int | None:
    for k in witness_angles(g):
        if all(fraction_conditions(g.turns[k], m).values()):
            return k
    return None


def _mean_bounds(g: GeodesicModel) -> tuple[float, float]:
    mid, rad = mean_index(g).enclosure(30)
    with mpmath.workdps(30):
        return float(mid - rad) * (1 - 1e-12), float(mid + rad) * (1 + 1e-12)


def candidate_iterates(g: GeodesicModel, N: int, window: int | None = None) -> range:
    """Iterates ``m`` that can satisfy the jump equalities at ``N``.

    With ``window=None`` the range is derived from
    ``k * mean - (n-1) < i(c^k) < k * mean + (n-1)`` and is complete; an
    integer ``window`` gives ``round(N / mean) +- window`` instead.
    """
    lo_mean, hi_mean = _mean_bounds(g)
    if window is not None:
        centre = round(N / ((lo_mean + hi_mean) / 2))
        return range(max(1, centre - window), centre + window + 1)
    spread = g.n - 1
    m_lo = math.floor(((2 * N - g.index - spread) / hi_mean + 1) / 2) - 1
    m_hi = math.ceil(((2 * N - g.index + spread) / lo_mean + 1) / 2) + 1
    return range(max(1, m_lo), m_hi + 1)


def _smallest_iterate(g: GeodesicModel, N: int, distinguished: bool, window: int | None):
    for m in candidate_iterates(g, N, window):
        if all(model_conditions(g, N, m).values()):
            if not distinguished:
                return m, None
            k = _first_witness(g, m)
            if k is not None:
                return m, k
    return None


def find_common_jump(
    models: Sequence[GeodesicModel],
    M0: int = 1,
    N_max: int = 10_000,
    N_min: int = 1,
    window: int | None = None,
) -> JumpCertificate:
    """Smallest ``N`` in ``[N_min, N_max]`` with ``M0 | N`` admitting a
    certificate, with the lexicographically smallest iterates."""
    if M0 < 1:
        raise ValueError("M0 must be positive")
    models = list(models)
    star = check_preconditions(models)
    start = max(M0, -(-N_min // M0) * M0)
    for N in range(start, N_max + 1, M0):
        iterates, witness = [], None
        for j, g in enumerate(models):
            hit = _smallest_iterate(g, N, j == star, window)
            if hit is None:
                break
            iterates.append(hit[0])
            if j == star:
                witness = hit[1]
        else:
            cert = JumpCertificate(N, tuple(iterates), M0, star, witness)
            return _with_checks(models, cert)
    raise CertificateNotFound(f"no certificate with {M0} | N and N <= {N_max}")


def find_certificates(models, count: int, M0: int = 1, N_max: int = 10_000, **kw) -> list[JumpCertificate]:
    """``count`` successive certificates, raising ``N_min`` past each hit."""
    found, N_min = [], 1
    for _ in range(count):
        cert = find_common_jump(models, M0, N_max, N_min, **kw)
        found.append(cert)
        N_min = cert.N + 1
    return found


# ---------------------------------------------------------------------------
# verification, deliberately through the generic ExactReal path

def _direct_index(g: GeodesicModel, m: int) -> int:
    return m * (g.index - g.n + 1) + 2 * sum(floor_of(t * m) for t in g.turns) + g.n - 1


@dataclass(frozen=True)
class CertificateCheck:
    per_model: tuple[dict, ...]
    fractions: dict
    divisibility: bool

    @property
    def passed(self) -> bool:
        return (
            self.divisibility
            and all(all(c.values()) for c in self.per_model)
            and bool(self.fractions) and all(self.fractions.values())
        )

    def failures(self) -> list[str]:
        out = [] if self.divisibility else ["divisibility"]
        for j, conds in enumerate(self.per_model):
            out += [f"model {j}: {k}" for k, ok in conds.items() if not ok]
        if not self.fractions:
            out.append("no witnessing angle")
        out += [k for k, ok in self.fractions.items() if not ok]
        return out

    def flat(self) -> dict[str, bool]:
        out = {"divisibility": self.divisibility}
        for j, conds in enumerate(self.per_model):
            out.update({f"model{j}.{k}": v for k, v in conds.items()})
        out.update(self.fractions)
        return out


def verify_certificate(models: Sequence[GeodesicModel], cert: JumpCertificate) -> CertificateCheck:
    """Re-evaluate every condition of ``cert`` from scratch."""
    models = list(models)
    if len(models) != len(cert.iterates):
        raise ValueError("certificate and model list have different lengths")
    per_model = tuple(
        model_conditions(g, cert.N, m, index=_direct_index) for g, m in zip(models, cert.iterates)
    )
    g = models[cert.distinguished]
    m1 = cert.iterates[cert.distinguished]
    fractions: dict[str, bool] = {}
    candidates = [cert.witness] if cert.witness is not None else witness_angles(g)
    for k in candidates:
        if compare(g.turns[k], HALF) <= 0:
            continue
        fractions = fraction_conditions(g.turns[k], m1)
        if all(fractions.values()):
            break
    return CertificateCheck(per_model, fractions, cert.N % cert.M0 == 0)


def _with_checks(models, cert: JumpCertificate) -> JumpCertificate:
    check = verify_certificate(models, cert)
    return JumpCertificate(cert.N, cert.iterates, cert.M0, cert.distinguished, cert.witness, check.flat())


@dataclass(frozen=True)
class GapReport:
    above_failures: tuple[int, ...]
    below_failures: tuple[int, ...]
    gap_after: int
    gap_before: int | None

    @property
    def passed(self) -> bool:
        return (
            not self.above_failures
            and not self.below_failures
            and self.gap_after >= 2
            and (self.gap_before is None or self.gap_before >= 2)
        )


def isolation_check(g: GeodesicModel, cert: JumpCertificate, m_range: int = 10) -> GapReport:
    """Confirm that no iterate of the distinguished geodesic other than
    ``2m_1 - 1, 2m_1, 2m_1 + 1`` reaches the window around ``2N``.

    Checks ``i(c^{2m_1+m}) >= 2N + n + 1`` and ``i(c^{2m_1-m}) <= 2N - n - 1``
    for ``2 <= m <= m_range`` (the latter only while ``2m_1 - m >= 1``) and
    the two jumps of size at least two on either side.
    """
    N, n = cert.N, g.n
    m1 = cert.iterates[cert.distinguished]
    base = 2 * m1
    above = tuple(m for m in range(2, m_range + 1) if _direct_index(g, base + m) < 2 * N + n + 1)
    below = tuple(
        m for m in range(2, m_range + 1)
        if base - m >= 1 and _direct_index(g, base - m) > 2 * N - (n + 1)
    )
    after = _direct_index(g, base + 2) - _direct_index(g, base + 1)
    before = None if base - 2 < 1 else _direct_index(g, base - 1) - _direct_index(g, base - 2)
    return GapReport(above, below, after, before)
