"""Symplectic matrices, basic normal-form blocks and their classification.

Coordinates are ``(x_1..x_k, y_1..y_k)`` with ``J = [[0, -I], [I, 0]]``; the
diamond sum interleaves two matrices in these coordinates.  Blocks carry
rotation angles as fractions of a full turn, ``theta / 2pi``, held as
:class:`~geodesic_index.numerics.ExactReal` so that index formulas stay exact.
"""
from __future__ import annotations

import math
import warnings
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .numerics import CertifiedDecimal, ExactReal, Rational, is_integer

DEFAULT_TOL = 1e-9


class NotSymplecticError(ValueError):
    pass


class ClassificationError(ValueError):
    """Spectral data that cannot be classified at the given tolerance."""


class ClassificationWarning(UserWarning):
    pass


def standard_form(k: int) -> np.ndarray:
    """The standard symplectic form on R^{2k}."""
    z, i = np.zeros((k, k)), np.eye(k)
    return np.block([[z, -i], [i, z]])


def symplectic_defect(M: np.ndarray) -> float:
    M = np.asarray(M, dtype=float)
    J = standard_form(M.shape[0] // 2)
    return float(np.max(np.abs(M.T @ J @ M - J)))


def as_symplectic(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate ``M`` as a real symplectic matrix and return it as an array.

    The defect ``|M^T J M - J|_inf`` is measured relative to ``|M|^2`` so that
    conjugated test matrices are not rejected for rounding.
    """
    M = np.array(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise NotSymplecticError(f"expected an even square matrix, got shape {M.shape}")
    scale = max(1.0, float(np.max(np.abs(M)))) ** 2
    defect = symplectic_defect(M)
    if defect > max(tol, 1e-12) * scale * M.shape[0]:
        raise NotSymplecticError(f"symplectic defect {defect:.3g} exceeds tolerance")
    return M


def diamond_sum(A, B) -> np.ndarray:
    """Direct sum of ``2i x 2i`` and ``2j x 2j`` matrices, interleaving the
    x- and y-blocks of each factor."""
    A, B = np.asarray(A, dtype=float), np.asarray(B, dtype=float)
    i, j = A.shape[0] // 2, B.shape[0] // 2
    n = i + j
    out = np.zeros((2 * n, 2 * n))
    a_idx = np.r_[0:i, n:n + i]
    b_idx = np.r_[i:n, n + i:2 * n]
    out[np.ix_(a_idx, a_idx)] = A
    out[np.ix_(b_idx, b_idx)] = B
    return out


def diamond_sum_all(mats: Iterable) -> np.ndarray:
    result = None
    for m in mats:
        result = m if result is None else diamond_sum(result, m)
    if result is None:
        return np.zeros((0, 0))
    return np.asarray(result, dtype=float)


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _turn(x) -> ExactReal:
    if isinstance(x, ExactReal):
        return x
    if isinstance(x, float):
        return CertifiedDecimal.from_float(x, 1e-15)
    return Rational(x)


# ---------------------------------------------------------------------------
# basic normal-form blocks

@dataclass(frozen=True)
class N1:
    """``[[lam, a], [0, lam]]`` with ``lam = +-1``; ``a = 0`` gives ``+-I_2``."""

    lam: int
    a: float

    def __post_init__(self):
        if self.lam not in (1, -1):
            raise ValueError("N1 eigenvalue must be +1 or -1")

    def matrix(self) -> np.ndarray:
        return np.array([[self.lam, self.a], [0.0, self.lam]], dtype=float)

    @property
    def dim(self) -> int:
        return 2


@dataclass(frozen=True)
class H:
    b: float

    def __post_init__(self):
        if self.b == 0 or abs(self.b) == 1:
            raise ValueError("H(b) needs b outside {0, 1, -1}")

    def matrix(self) -> np.ndarray:
        return np.diag([self.b, 1.0 / self.b])

    @property
    def dim(self) -> int:
        return 2


@dataclass(frozen=True)
class R:
    """Rotation by ``theta = 2*pi*turn``."""

    turn: ExactReal

    def __post_init__(self):
        object.__setattr__(self, "turn", _turn(self.turn))
        t = float(self.turn)
        if not 0 < t < 1 or self.turn == Rational(Fraction(1, 2)):
            raise ValueError(f"rotation turn {self.turn} outside (0, 1/2) u (1/2, 1)")

    @property
    def theta(self) -> float:
        return 2 * math.pi * float(self.turn)

    def matrix(self) -> np.ndarray:
        return rotation(self.theta)

    @property
    def dim(self) -> int:
        return 2


def _n2_constraint(theta: float, B) -> float:
    # [[R, B], [0, R]] is symplectic iff B^T R is symmetric
    b1, b2, b3, b4 = B
    return (b3 - b2) * math.cos(theta) - (b1 + b4) * math.sin(theta)


@dataclass(frozen=True)
class N2:
    """``[[R(theta), B], [0, R(theta)]]`` with ``B = ((b1, b2), (b3, b4))``
    flattened row-major, ``b2 != b3``.

    Nontrivial iff ``(b2 - b3) * sin(theta) < 0``.
    """

    turn: ExactReal
    B: tuple[float, float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "turn", _turn(self.turn))
        object.__setattr__(self, "B", tuple(float(b) for b in self.B))
        t = float(self.turn)
        if not 0 < t < 1 or self.turn == Rational(Fraction(1, 2)):
            raise ValueError(f"N2 turn {self.turn} outside (0, 1/2) u (1/2, 1)")
        if self.B[1] == self.B[2]:
            raise ValueError("N2 needs b2 != b3")
        if abs(_n2_constraint(self.theta, self.B)) > 1e-9 * (1 + max(map(abs, self.B))):
            raise ValueError("B does not make the N2 block symplectic")

    @classmethod
    def canonical(cls, turn, trivial: bool) -> N2:
        """The representative with ``b2 - b3 = +-2`` and ``b1 = b4``."""
        turn = _turn(turn)
        theta = 2 * math.pi * float(turn)
        s = math.copysign(1.0, math.sin(theta))
        b2, b3 = (s, -s) if trivial else (-s, s)
        b1 = (b3 - b2) * math.cos(theta) / (2 * math.sin(theta))
        return cls(turn, (b1, b2, b3, b1))

    @property
    def theta(self) -> float:
        return 2 * math.pi * float(self.turn)

    @property
    def trivial(self) -> bool:
        return (self.B[1] - self.B[2]) * math.sin(self.theta) > 0

    def matrix(self) -> np.ndarray:
        Rt = rotation(self.theta)
        Bm = np.array(self.B, dtype=float).reshape(2, 2)
        return np.block([[Rt, Bm], [np.zeros((2, 2)), Rt]])

    @property
    def dim(self) -> int:
        return 4


Block = Union[N1, H, R, N2]


def _block_rank(block: Block) -> tuple:
    """Position of a block in the canonical ordering of the normal form."""
    if isinstance(block, N1):
        sign = 0 if block.a > 0 else 1 if block.a == 0 else 2
        return (0 if block.lam == 1 else 1, sign)
    if isinstance(block, N2):
        return (2 if not block.trivial else 3, float(block.turn))
    if isinstance(block, R):
        rational = block.turn.is_rational is True
        return (4, int(rational), float(block.turn))
    return (5, block.b)


@dataclass(frozen=True)
class NormalFormData:
    """Endpoint data of the homotopy to the basic normal form.

    ``blocks`` are kept in the canonical order: ``N1(1,1)``, ``I_2``,
    ``N1(1,-1)``, the same three for ``-1``, nontrivial then trivial ``N2``,
    rotations with irrational turn, rotations with rational (or unknown)
    turn, and finally hyperbolic blocks.
    """

    blocks: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(sorted(self.blocks, key=_block_rank)))

    @classmethod
    def from_counts(
        cls,
        p_minus: int = 0,
        p_zero: int = 0,
        p_plus: int = 0,
        q_minus: int = 0,
        q_zero: int = 0,
        q_plus: int = 0,
        rotations: Sequence = (),
        nontrivial: Sequence = (),
        trivial: Sequence = (),
        hyperbolic: Sequence[float] = (),
    ) -> NormalFormData:
        blocks: list[Block] = []
        blocks += [N1(1, 1.0)] * p_minus + [N1(1, 0.0)] * p_zero + [N1(1, -1.0)] * p_plus
        blocks += [N1(-1, 1.0)] * q_minus + [N1(-1, 0.0)] * q_zero + [N1(-1, -1.0)] * q_plus
        blocks += [N2.canonical(t, trivial=False) for t in nontrivial]
        blocks += [N2.canonical(t, trivial=True) for t in trivial]
        blocks += [R(t) for t in rotations]
        blocks += [H(b) for b in hyperbolic]
        return cls(tuple(blocks))

    def _n1_count(self, lam: int, sign: int) -> int:
        return sum(
            1 for b in self.blocks
            if isinstance(b, N1) and b.lam == lam and (b.a > 0) - (b.a < 0) == sign
        )

    @property
    def p_minus(self) -> int:
        return self._n1_count(1, 1)

    @property
    def p_zero(self) -> int:
        return self._n1_count(1, 0)

    @property
    def p_plus(self) -> int:
        return self._n1_count(1, -1)

    @property
    def q_minus(self) -> int:
        return self._n1_count(-1, 1)

    @property
    def q_zero(self) -> int:
        return self._n1_count(-1, 0)

    @property
    def q_plus(self) -> int:
        return self._n1_count(-1, -1)

    @property
    def rotations(self) -> list[R]:
        return [b for b in self.blocks if isinstance(b, R)]

    @property
    def r(self) -> int:
        return len(self.rotations)

    @property
    def nontrivial(self) -> list[N2]:
        return [b for b in self.blocks if isinstance(b, N2) and not b.trivial]

    @property
    def trivial(self) -> list[N2]:
        return [b for b in self.blocks if isinstance(b, N2) and b.trivial]

    @property
    def r_star(self) -> int:
        return len(self.nontrivial)

    @property
    def r_zero(self) -> int:
        return len(self.trivial)

    @property
    def h(self) -> int:
        return sum(1 for b in self.blocks if isinstance(b, H))

    @property
    def half_dim(self) -> int:
        return sum(b.dim for b in self.blocks) // 2

    def splitting_numbers(self) -> dict[str, int]:
        return {
            "p_minus": self.p_minus, "p_zero": self.p_zero, "p_plus": self.p_plus,
            "q_minus": self.q_minus, "q_zero": self.q_zero, "q_plus": self.q_plus,
            "r": self.r, "r_star": self.r_star, "r_zero": self.r_zero, "h": self.h,
        }

    def check_dimension(self) -> bool:
        c = self.splitting_numbers()
        total = (
            c["p_minus"] + c["p_zero"] + c["p_plus"] + c["q_minus"] + c["q_zero"]
            + c["q_plus"] + c["r"] + 2 * c["r_star"] + 2 * c["r_zero"] + c["h"]
        )
        return total == self.half_dim

    @property
    def rotation_turns(self) -> list[ExactReal]:
        return [b.turn for b in self.rotations]

    @property
    def nontrivial_turns(self) -> list[ExactReal]:
        return [b.turn for b in self.nontrivial]

    @property
    def trivial_turns(self) -> list[ExactReal]:
        return [b.turn for b in self.trivial]


def assemble(nf: NormalFormData) -> np.ndarray:
    """Diamond sum of the blocks in canonical order."""
    return diamond_sum_all(b.matrix() for b in nf.blocks)


def is_irrationally_elliptic(nf: NormalFormData) -> bool | None:
    """True iff every block is a rotation with irrational turn.

    ``None`` when only rotations are present but some turn has unknown
    rationality (numerically recovered angles).
    """
    if not nf.blocks or any(not isinstance(b, R) for b in nf.blocks):
        return False
    flags = [b.turn.is_rational for b in nf.blocks]
    if any(f is True for f in flags):
        return False
    if any(f is None for f in flags):
        return None
    return True


# ---------------------------------------------------------------------------
# spectra

@dataclass(frozen=True)
class Spectrum:
    """Clustered eigenvalues with algebraic multiplicities.

    ``nullities`` maps each unit-circle eigenvalue to ``dim ker(M - w I)``.
    """

    values: tuple[complex, ...]
    multiplicities: tuple[int, ...]
    on_circle: tuple[bool, ...]
    nullities: dict = field(default_factory=dict)

    def unit_eigenvalues(self) -> list[tuple[complex, int]]:
        return [(v, m) for v, m, u in zip(self.values, self.multiplicities, self.on_circle) if u]

    def nullity(self, omega: complex, tol: float = 1e-6) -> int:
        for w, nu in self.nullities.items():
            if abs(w - omega) <= tol:
                return nu
        return 0

    def is_symmetric(self, tol: float = 1e-6) -> bool:
        """Check ``lam -> 1/lam`` and ``lam -> conj(lam)`` preserve multiplicity."""
        def mult(z):
            return sum(m for v, m in zip(self.values, self.multiplicities) if abs(v - z) <= tol)
        return all(
            mult(1 / v) == m and mult(np.conj(v)) == m
            for v, m in zip(self.values, self.multiplicities)
        )


def _cluster_radius(tol: float) -> float:
    # defective eigenvalues split like eps**(1/2); clusters must absorb that
    return max(math.sqrt(tol), 1e-7)


def _cluster(eigs: np.ndarray, radius: float) -> list[list[complex]]:
    clusters: list[list[complex]] = []
    for z in sorted(eigs, key=lambda z: (round(z.real, 6), z.imag)):
        joined = [c for c in clusters if min(abs(z - w) for w in c) <= radius]
        if not joined:
            clusters.append([z])
            continue
        base = joined[0]
        base.append(z)
        for other in joined[1:]:
            base.extend(other)
            clusters.remove(other)
    return clusters


def _kernel(A: np.ndarray, threshold: float, context: str, strict: bool):
    """Orthonormal kernel basis of ``A`` plus a straddle diagnostic."""
    _, s, vh = np.linalg.svd(A)
    small = s <= threshold
    k = int(small.sum())
    # ambiguous if a singular value sits in the band around the threshold
    grey = np.any((s > threshold * 1e-3) & (s < threshold * 1e2))
    if grey:
        msg = (
            f"singular values straddle the kernel threshold {threshold:.3g} "
            f"({context}); smallest: {np.array2string(s[-4:], precision=3)}"
        )
        if strict:
            raise ClassificationError(msg)
        warnings.warn(msg, ClassificationWarning, stacklevel=3)
    return vh[len(s) - k:].conj().T


def _kernel_threshold(M: np.ndarray, power: int, tol: float) -> float:
    return tol * (float(np.linalg.norm(M, 2)) + 1.0) ** power


def _snap(c: complex, radius: float) -> tuple[complex, bool]:
    if abs(c - 1) <= radius:
        return 1 + 0j, True
    if abs(c + 1) <= radius:
        return -1 + 0j, True
    on_circle = abs(abs(c) - 1) <= radius
    if abs(c.imag) <= radius:
        c = complex(c.real, 0.0)
    if on_circle:
        c = c / abs(c)
    return c, on_circle


def _raw_spectrum(M: np.ndarray, tol: float, strict: bool):
    n = M.shape[0]
    eigs = np.linalg.eigvals(M)
    radius = _cluster_radius(tol)
    clusters = _cluster(eigs, radius)
    centers = [complex(np.mean(c)) for c in clusters]
    for a in range(len(centers)):
        for b in range(a + 1, len(centers)):
            if abs(centers[a] - centers[b]) < 100 * radius:
                msg = f"eigenvalues {centers[a]:.6g} and {centers[b]:.6g} cannot be separated"
                if strict:
                    raise ClassificationError(msg)
                warnings.warn(msg, ClassificationWarning, stacklevel=3)
    out = []
    for c, members in zip(centers, clusters):
        value, unit = _snap(c, radius)
        out.append((value, len(members), unit))
    out.sort(key=lambda t: (not t[2], -t[0].imag if t[2] else 0, t[0].real, t[0].imag))
    assert sum(m for _, m, _ in out) == n
    return out


def spectrum_of(M, tol: float = DEFAULT_TOL) -> Spectrum:
    """Eigenvalues of a symplectic matrix grouped into clusters.

    Unit-circle membership is decided on the cluster centre; the nullity of
    ``M - w I`` uses a singular-value threshold of ``tol``.  Borderline
    cases emit :class:`ClassificationWarning`.
    """
    M = as_symplectic(M, tol)
    raw = _raw_spectrum(M, tol, strict=False)
    n = M.shape[0]
    nullities = {}
    for w, mult, unit in raw:
        if unit:
            K = _kernel(M - w * np.eye(n), _kernel_threshold(M, 1, tol), f"w={w:.6g}", strict=False)
            nullities[w] = K.shape[1]
    return Spectrum(
        tuple(w for w, _, _ in raw),
        tuple(m for _, m, _ in raw),
        tuple(u for _, _, u in raw),
        nullities,
    )


def elliptic_height(M, tol: float = DEFAULT_TOL) -> int:
    """Total algebraic multiplicity of the unit-circle eigenvalues."""
    spectrum = spectrum_of(M, tol)
    return sum(m for _, m in spectrum.unit_eigenvalues())


# ---------------------------------------------------------------------------
# decomposition

def _signature(Hm: np.ndarray, tol: float, context: str) -> tuple[int, int, int]:
    Hm = (Hm + Hm.conj().T) / 2
    if Hm.size == 0:
        return 0, 0, 0
    ev = np.linalg.eigvalsh(Hm)
    scale = max(1.0, float(np.max(np.abs(ev))))
    small = np.abs(ev) <= math.sqrt(tol) * scale
    grey = (np.abs(ev) > math.sqrt(tol) * scale * 1e-3) & ~small
    grey &= np.abs(ev) < math.sqrt(tol) * scale * 1e3
    if np.any(grey):
        raise ClassificationError(f"indefinite Krein data near zero ({context})")
    return int(np.sum((ev > 0) & ~small)), int(np.sum((ev < 0) & ~small)), int(small.sum())


def _generalized_structure(M, w, mult, tol, context):
    n = M.shape[0]
    A = M - w * np.eye(n)
    K1 = _kernel(A, _kernel_threshold(M, 1, tol), context, strict=True)
    K2 = _kernel(A @ A, _kernel_threshold(M, 2, tol), context, strict=True)
    nu = K1.shape[1]
    if K2.shape[1] != mult:
        raise ClassificationError(
            f"Jordan chains longer than 2 or unresolved multiplicity at {context}"
        )
    # complement of the eigenspace inside the generalized eigenspace
    P = K2 - K1 @ (K1.conj().T @ K2)
    u, s, _ = np.linalg.svd(P, full_matrices=False)
    W = u[:, : mult - nu]
    return A, K1, W, nu


def _match_turn(turn: float, annotations: Sequence[ExactReal], radius: float) -> ExactReal:
    for a in annotations:
        if abs(float(a) - turn) <= 1e-7:
            return a
    return CertifiedDecimal.from_float(turn, radius)


def decompose(M, tol: float = DEFAULT_TOL, exact_turns: Sequence[ExactReal] = ()) -> NormalFormData:
    """Basic normal-form data of the homotopy component of ``M``.

    Rotation and N2 angles are read off unit eigenvalues in the upper half
    plane.  A positive Krein sign ``-i conj(xi)^T J xi`` of the eigenvector
    keeps the angle in ``(0, pi)``; a negative one reflects it to
    ``2pi - angle``.  Recovered turns are certified decimals of unknown
    rationality unless they match one of ``exact_turns`` within ``1e-7``.
    """
    M = as_symplectic(M, tol)
    n = M.shape[0]
    J = standard_form(n // 2)
    raw = _raw_spectrum(M, tol, strict=True)
    blocks: list[Block] = []
    radius = max(tol, 1e-12)
    used = set()

    for idx, (w, mult, unit) in enumerate(raw):
        if idx in used:
            continue
        ctx = f"eigenvalue {w:.6g}"
        if unit and w.imag == 0:
            lam = int(round(w.real))
            if mult % 2:
                raise ClassificationError(f"odd multiplicity {mult} at {ctx}")
            A, K1, W, nu = _generalized_structure(M, w.real, mult, tol, ctx)
            A, K1, W = A.real, K1.real, W.real
            zero = nu - mult // 2
            if zero < 0:
                raise ClassificationError(f"inconsistent Jordan data at {ctx}")
            pos, neg, null = _signature(W.T @ J @ A @ W, tol, ctx)
            if null:
                raise ClassificationError(f"degenerate chain form at {ctx}")
            blocks += [N1(lam, 1.0)] * pos + [N1(lam, 0.0)] * zero + [N1(lam, -1.0)] * neg
        elif unit:
            if w.imag < 0:
                continue
            A, K1, W, nu = _generalized_structure(M, w, mult, tol, ctx)
            n_chains = mult - nu
            pos, neg, null = _signature(-1j * K1.conj().T @ J @ K1, tol, ctx)
            if null != n_chains:
                raise ClassificationError(f"Krein form rank does not match chain count at {ctx}")
            phi = math.atan2(w.imag, w.real)
            turn = phi / (2 * math.pi)
            blocks += [R(_match_turn(turn, exact_turns, radius)) for _ in range(pos)]
            blocks += [R(_match_turn(1 - turn, exact_turns, radius)) for _ in range(neg)]
            if n_chains:
                form = np.conj(w) * (W.conj().T @ J @ A @ W)
                t_pos, t_neg, t_null = _signature(form, tol, ctx)
                if t_null:
                    raise ClassificationError(f"degenerate N2 form at {ctx}")
                exact = _match_turn(turn, exact_turns, radius)
                blocks += [N2.canonical(exact, trivial=False)] * t_pos
                blocks += [N2.canonical(exact, trivial=True)] * t_neg
        else:
            if abs(w) < 1 or (w.imag < 0):
                continue
            partner = next(
                (j for j, (v, m, _) in enumerate(raw)
                 if j not in used and abs(v - 1 / w) <= 1e-6 * max(1, abs(w)) and m == mult),
                None,
            )
            if partner is None:
                raise ClassificationError(f"no reciprocal partner for {ctx}")
            used.add(partner)
            if w.imag == 0:
                blocks += [H(float(w.real))] * mult
            else:
                b = abs(w) if w.real >= 0 else -abs(w)
                blocks += [H(float(b))] * (2 * mult)
    nf = NormalFormData(tuple(blocks))
    if nf.half_dim != n // 2:
        raise ClassificationError("recovered blocks do not fill the dimension")
    return nf


def turn_is_admissible(turn: ExactReal) -> bool:
    """``0 < turn < 1`` and ``turn != 1/2``, decided exactly where possible."""
    return 0 < turn < 1 and not (turn.is_rational and is_integer(2 * turn))
