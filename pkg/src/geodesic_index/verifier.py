"""Multiplicity bookkeeping for irrationally elliptic closed geodesics on ``S^n``.

The pipeline checks, for a finite candidate set of prime closed geodesics,
the necessary conditions that index data alone can decide:

1. initial indices have the parity of ``n - 1``;
2. every initial index is at least ``n - 1`` and exactly one iterate in the
   whole family has index ``n - 1``;
3. a common index jump certificate exists with ``(n - 1) | N``;
4. in the degree window ``[2N - (n-1), 2N + (n-1)]`` the distinguished
   geodesic contributes three iterates and every other geodesic one;
5. the window count ``q + 2`` equals the Betti sum over the same window.

Step 5 can only hold when ``q = 2[(n+1)/2]``.  Whether a consistent set is
realised by an actual Finsler metric is outside what these checks decide.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

from .iteration import (
    GeodesicModel,
    ModelError,
    index_iterate_elliptic,
    iterate_bound,
    models_share_dimension,
)
from .jump import (
    CertificateNotFound,
    JumpCertificate,
    PreconditionError,
    find_common_jump,
    isolation_check,
    verify_certificate,
)
from .morse import MorseTable, check_morse_inequalities, morse_counts
from .topology import betti, betti_table, betti_window_sum, window, window_is_canonical

SCOPE_NOTE = (
    "checks necessary index-theoretic conditions only; realisability of the "
    "model set by a Finsler metric is not decided, and an infinite family of "
    "closed geodesics has no finite model set to check"
)

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"
UNDETERMINED = "undetermined"


def conclude_multiplicity(n: int) -> int:
    """``2[(n+1)/2]``: ``n`` for even ``n``, ``n + 1`` for odd ``n``."""
    if n < 2:
        raise ValueError("sphere dimension must be at least 2")
    return 2 * ((n + 1) // 2)


# ---------------------------------------------------------------------------
# initial indices

def _partial_counts(models, degree: int, cap: int = 2000) -> tuple[MorseTable, bool]:
    try:
        return morse_counts(models, degree), True
    except ModelError:
        # non-positive mean index: count what a finite scan sees, a lower bound
        rows = []
        for g in models:
            counts = [0] * (degree + 1)
            for m in range(1, cap + 1):
                p = index_iterate_elliptic(g, m)
                if 0 <= p <= degree:
                    counts[p] += 1
            rows.append(tuple(counts))
        return MorseTable(tuple(models), degree, tuple(rows), (cap,) * len(models)), False


@dataclass(frozen=True)
class InitialIndexReport:
    n: int
    indices: tuple[int, ...]
    below: tuple[int, ...]
    at_threshold: tuple[int, ...]
    threshold_count: int
    distinguished: int | None
    contradiction: dict | None = None
    complete: bool = True

    @property
    def passed(self) -> bool:
        return not self.below and len(self.at_threshold) == 1 and self.threshold_count == 1

    def messages(self) -> list[str]:
        out = []
        if self.contradiction:
            c = self.contradiction
            out.append(
                f"alternating sum at degree {c['degree']}: {c['morse']} >= {c['betti']} fails"
            )
        if len(self.at_threshold) != 1:
            out.append(f"{len(self.at_threshold)} geodesics have index n-1; exactly one is forced")
        if self.threshold_count != 1:
            out.append(f"M_(n-1) = {self.threshold_count} but b_(n-1) = 1")
        return out


def initial_index_check(models: Sequence[GeodesicModel]) -> InitialIndexReport:
    """Every initial index is at least ``n - 1`` and exactly one iterate of
    the family has index ``n - 1``.

    A geodesic with ``i(c) < n - 1`` yields an alternating Morse sum of at
    most ``-1`` at degree ``i(c) + 1`` against a Betti sum of ``0``; the
    report records that violation.
    """
    models = list(models)
    n = models_share_dimension(models)
    if n is None:
        return InitialIndexReport(0, (), (), (), 0, None)
    indices = tuple(g.index for g in models)
    below = tuple(j for j, i in enumerate(indices) if i < n - 1)
    at = tuple(j for j, i in enumerate(indices) if i == n - 1)
    table, complete = _partial_counts(models, n - 1)
    contradiction = None
    if below:
        degree = min(indices[j] for j in below) + 1
        low, complete_low = _partial_counts(models, degree)
        report = check_morse_inequalities(low, betti_table(n, degree), degree)
        row = report.row(degree)
        contradiction = {
            "degree": degree,
            "morse": row.morse_alternating,
            "betti": row.betti_alternating,
        }
        complete = complete and complete_low
    return InitialIndexReport(
        n, indices, below, at, table[n - 1], at[0] if len(at) == 1 else None, contradiction, complete
    )


# ---------------------------------------------------------------------------
# window counts

@dataclass(frozen=True)
class WindowCount:
    N: int
    degrees: tuple[int, int]
    per_model: tuple[int, ...]
    landing: tuple[tuple[int, ...], ...]
    intrusions: tuple[tuple[int, int], ...]
    expected: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.per_model)

    @property
    def matches_expected(self) -> bool:
        return self.per_model == self.expected and not self.intrusions


def window_count(models: Sequence[GeodesicModel], cert: JumpCertificate) -> WindowCount:
    """Iterates of each geodesic whose index falls in the window around ``2N``."""
    models = list(models)
    if not models:
        return WindowCount(cert.N, (0, 0), (), (), (), ())
    n = models[0].n
    span = window(n, cert.N)
    lo, hi = span.start, span.stop - 1
    per_model, landing, intrusions, expected = [], [], [], []
    for j, g in enumerate(models):
        hits = tuple(
            m for m in range(1, iterate_bound(g, hi) + 1)
            if lo <= index_iterate_elliptic(g, m) <= hi
        )
        landing.append(hits)
        per_model.append(len(hits))
        m_j = cert.iterates[j]
        allowed = {2 * m_j - 1, 2 * m_j, 2 * m_j + 1} if j == cert.distinguished else {2 * m_j}
        intrusions += [(j, m) for m in hits if m not in allowed]
        expected.append(3 if j == cert.distinguished else 1)
    return WindowCount(cert.N, (lo, hi), tuple(per_model), tuple(landing), tuple(intrusions), tuple(expected))


# ---------------------------------------------------------------------------
# full pipeline

@dataclass
class VerificationReport:
    n: int
    q: int
    models: list = field(default_factory=list)
    parity_ok: bool = True
    gap_parity_ok: bool = True
    initial_index: dict = field(default_factory=dict)
    certificate: dict | None = None
    certificate_ok: bool = False
    isolation: dict | None = None
    window_counts: list = field(default_factory=list)
    window_total: int | None = None
    betti_window_sum: int | None = None
    verdict: str = UNDETERMINED
    forced_multiplicity: int = 0
    reasons: list = field(default_factory=list)
    scope: str = SCOPE_NOTE

    @property
    def consistent(self) -> bool:
        return self.verdict == CONSISTENT

    @property
    def mismatch(self) -> int | None:
        if self.window_total is None or self.betti_window_sum is None:
            return None
        return self.window_total - self.betti_window_sum

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> VerificationReport:
        return cls(**obj)


def _first_canonical_N(n: int, M0: int) -> int:
    N = M0
    while not window_is_canonical(n, N) or N % M0:
        N += M0
    return N


def verify_model_set(
    models: Sequence[GeodesicModel],
    M0: int | None = None,
    N_max: int = 20_000,
    gap_range: int = 10,
) -> VerificationReport:
    """Run the whole multiplicity pipeline on a candidate model set.

    ``M0`` defaults to ``n - 1``.  Certificates whose window is intruded by
    a stray iterate are skipped in favour of the next admissible ``N``.
    """
    models = list(models)
    n = models_share_dimension(models)
    if n is None:
        raise ValueError("empty model set")
    q = len(models)
    report = VerificationReport(n, q, [g.to_dict() for g in models], forced_multiplicity=conclude_multiplicity(n))
    M0 = n - 1 if M0 is None else M0

    report.parity_ok = all((g.index - (n - 1)) % 2 == 0 for g in models)
    report.gap_parity_ok = all(
        (index_iterate_elliptic(g, m + 1) - index_iterate_elliptic(g, m)) % 2 == 0
        for g in models for m in range(1, 50)
    )
    if not (report.parity_ok and report.gap_parity_ok):
        report.verdict = INCONSISTENT
        report.reasons.append("index parity violated")
        return report

    initial = initial_index_check(models)
    report.initial_index = {
        "indices": list(initial.indices),
        "below": list(initial.below),
        "at_threshold": list(initial.at_threshold),
        "threshold_count": initial.threshold_count,
        "distinguished": initial.distinguished,
        "contradiction": initial.contradiction,
        "passed": initial.passed,
    }
    if not initial.passed:
        report.verdict = INCONSISTENT
        report.reasons += initial.messages()
        return report

    N_min = _first_canonical_N(n, M0)
    while True:
        try:
            cert = find_common_jump(models, M0, N_max, N_min)
        except CertificateNotFound as exc:
            report.verdict = UNDETERMINED
            report.reasons.append(f"certificate search exhausted: {exc}")
            return report
        except PreconditionError as exc:
            report.verdict = INCONSISTENT
            report.reasons.append(str(exc))
            return report
        counts = window_count(models, cert)
        if not counts.intrusions:
            break
        report.reasons.append(f"window at N={cert.N} intruded by {list(counts.intrusions)}; escalating")
        N_min = cert.N + 1

    check = verify_certificate(models, cert)
    gaps = isolation_check(models[cert.distinguished], cert, gap_range)
    report.certificate = cert.to_dict()
    report.certificate_ok = check.passed
    report.isolation = {
        "above_failures": list(gaps.above_failures),
        "below_failures": list(gaps.below_failures),
        "gap_after": gaps.gap_after,
        "gap_before": gaps.gap_before,
        "passed": gaps.passed,
    }
    report.window_counts = list(counts.per_model)
    report.window_total = counts.total
    report.betti_window_sum = betti_window_sum(n, cert.N)

    if not check.passed:
        report.reasons.append("certificate failed re-verification: " + ", ".join(check.failures()))
    if not gaps.passed:
        report.reasons.append("distinguished geodesic is not isolated around the window")
    if counts.per_model != counts.expected:
        report.reasons.append(f"window counts {list(counts.per_model)} differ from {list(counts.expected)}")
    if report.window_total != report.betti_window_sum:
        report.reasons.append(
            f"window Morse count {report.window_total} != window Betti sum {report.betti_window_sum}"
        )
    ok = (
        check.passed and gaps.passed
        and counts.per_model == counts.expected
        and report.window_total == report.betti_window_sum
    )
    report.verdict = CONSISTENT if ok else INCONSISTENT
    if ok and q != report.forced_multiplicity:
        # cannot happen for valid arithmetic: the window identity forces q
        report.verdict = INCONSISTENT
        report.reasons.append("window identity holds but q differs from the forced multiplicity")
    return report


# ---------------------------------------------------------------------------
# three-sphere application

@dataclass
class ThreeSphereReport:
    preconditions_ok: bool
    precondition_messages: list
    verdict: str
    forced_multiplicity: int
    pipeline: VerificationReport | None

    def to_dict(self) -> dict:
        out = asdict(self)
        return out


def three_sphere_check(models: Sequence[GeodesicModel], N_max: int = 20_000) -> ThreeSphereReport:
    """Pipeline run for a candidate set on ``S^3`` with non-zero initial
    indices.  The verdict is inconsistent unless the set has four members."""
    models = list(models)
    messages = []
    n = models_share_dimension(models) if models else None
    if n != 3:
        messages.append(f"models must live on S^3, got n={n}")
    if any(g.index == 0 for g in models):
        messages.append("a geodesic with zero Morse index is excluded by hypothesis")
    forced = conclude_multiplicity(3)
    if messages:
        return ThreeSphereReport(False, messages, UNDETERMINED, forced, None)
    pipeline = verify_model_set(models, N_max=N_max)
    if len(models) != forced:
        verdict = INCONSISTENT
    else:
        verdict = pipeline.verdict
    return ThreeSphereReport(True, messages, verdict, forced, pipeline)
