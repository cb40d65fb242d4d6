"""Exact and certified reals for the bracket functions ``[a]``, ``E(a)``,
``phi(a)`` and ``{a}``.

Every Morse index in this package is an integer assembled from floors of
irrational multiples, so the arguments are kept exact whenever possible:

* :class:`Rational` wraps :class:`fractions.Fraction`;
* :class:`Quadratic` is ``(p + q*sqrt(d)) / r`` in canonical form, with floors
  and sign tests done in pure integer arithmetic;
* :class:`CertifiedDecimal` is anything else, represented by an interval
  enclosure that can be recomputed at higher precision on demand.
"""
from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Callable

import mpmath
from mpmath import iv

START_DIGITS = 64
MAX_DIGITS = 4096

# mpmath's interval context keeps its precision in global state.
_IV_LOCK = threading.RLock()


class BracketError(ArithmeticError):
    """A floor or comparison that stays undecided at the maximum precision."""

    UNDECIDABLE_FLOOR = "undecidable-floor"
    PRECISION_EXHAUSTED = "precision-exhausted"

    def __init__(self, kind: str, context: str):
        super().__init__(f"{kind}: {context}")
        self.kind = kind
        self.context = context


@contextmanager
def _digits(dps: int):
    with _IV_LOCK:
        saved = iv.prec
        iv.dps = dps
        try:
            yield
        finally:
            iv.prec = saved


def _endpoints(box) -> tuple[mpmath.mpf, mpmath.mpf]:
    # convert at the interval precision; the default mp precision would round
    with mpmath.workprec(iv.prec):
        return +mpmath.mpf(box.a), +mpmath.mpf(box.b)


def _squarefree_split(d: int) -> tuple[int, int]:
    """Return ``(s, d0)`` with ``d == s*s*d0`` and ``d0`` squarefree."""
    s, d0 = 1, d
    k = 2
    while k * k <= d0:
        while d0 % (k * k) == 0:
            d0 //= k * k
            s *= k
        k += 1
    return s, d0


class ExactReal:
    """Common interface of the three real representations."""

    __slots__ = ()

    @property
    def is_rational(self) -> bool | None:
        raise NotImplementedError

    def _iv(self):
        """Interval enclosure at the current mpmath interval precision."""
        raise NotImplementedError

    def enclosure(self, digits: int = START_DIGITS) -> tuple[mpmath.mpf, mpmath.mpf]:
        """Midpoint and radius of an enclosure computed at ``digits`` digits."""
        with _digits(digits + 10):
            lo, hi = _endpoints(self._iv())
        with mpmath.workdps(digits + 10):
            return (lo + hi) / 2, (hi - lo) / 2

    def __float__(self) -> float:
        mid, _ = self.enclosure(20)
        return float(mid)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return _scale(self, Fraction(-1))

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _add(self, -other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _add(other, -self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            value = other.value if isinstance(other, Rational) else Fraction(other)
            return _scale(self, 1 / value)
        return NotImplemented

    # ordering through compare(); equality stays structural
    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0


@dataclass(frozen=True, eq=True, order=False)
class Rational(ExactReal):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    @property
    def is_rational(self) -> bool:
        return True

    def _iv(self):
        return iv.mpf(self.value.numerator) / self.value.denominator

    def __repr__(self) -> str:
        return f"Rational({self.value})"

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, eq=True, order=False)
class Quadratic(ExactReal):
    """``(p + q*sqrt(d)) / r`` with ``gcd(p, q, r) == 1``, ``r > 0``,
    ``q != 0`` and ``d > 1`` squarefree.  Build through :func:`quadratic`."""

    p: int
    q: int
    d: int
    r: int

    def __post_init__(self):
        if self.r <= 0 or self.q == 0 or self.d <= 1:
            raise ValueError(f"non-canonical quadratic {self!r}")
        if math.gcd(math.gcd(self.p, self.q), self.r) != 1:
            raise ValueError(f"quadratic {self!r} is not gcd-reduced")
        if _squarefree_split(self.d)[0] != 1:
            raise ValueError(f"radicand {self.d} is not squarefree")

    @property
    def is_rational(self) -> bool:
        return False

    def _iv(self):
        return (iv.mpf(self.p) + iv.mpf(self.q) * iv.sqrt(self.d)) / self.r

    def __repr__(self) -> str:
        return f"Quadratic({self.p}, {self.q}, {self.d}, {self.r})"

    def __str__(self) -> str:
        coef = {1: "", -1: "-"}.get(self.q, str(self.q))
        surd = f"{coef}√{self.d}"
        if self.p:
            surd = f"{self.p}{'' if surd.startswith('-') else '+'}{surd}"
        num = surd
        return num if self.r == 1 else f"({num})/{self.r}"


@dataclass(frozen=True, eq=True, order=False)
class CertifiedDecimal(ExactReal):
    """A real known through interval enclosures.

    ``source`` is called under the current mpmath interval precision and
    returns an enclosure; raising the precision is the escalation step.
    Literal decimals cannot be refined past their stated digits, so their
    enclosure stops shrinking there.
    """

    label: str
    source: Callable = field(compare=False, repr=False)
    irrational: bool | None = None
    literal: tuple[str, int] | None = None

    @property
    def is_rational(self) -> bool | None:
        if self.irrational is None:
            return None
        return not self.irrational

    def _iv(self):
        return self.source()

    @classmethod
    def from_literal(cls, value: str, digits: int, irrational: bool | None = None) -> CertifiedDecimal:
        mpmath.mpf(value)  # validates the literal
        if digits <= 0:
            raise ValueError("digits must be positive")

        def source():
            with mpmath.workdps(max(iv.dps, digits) + 10):
                mid = mpmath.mpf(value)
                rad = mpmath.mpf(10) ** (-digits)
                return iv.mpf([mid - rad, mid + rad])

        return cls(value, source, irrational, (value, digits))

    @classmethod
    def from_float(cls, value: float, radius: float) -> CertifiedDecimal:
        if not radius > 0:
            raise ValueError("radius must be positive")

        def source():
            return iv.mpf([value - radius, value + radius])

        return cls(f"{value!r}±{radius:g}", source)

    @classmethod
    def from_function(cls, label: str, fn: Callable, irrational: bool | None = None) -> CertifiedDecimal:
        """Wrap an interval-valued function such as ``lambda: iv.pi / 7``."""
        return cls(label, fn, irrational)

    def __str__(self) -> str:
        return self.label


def quadratic(p: int, q: int, d: int, r: int = 1) -> ExactReal:
    """Canonical ``(p + q*sqrt(d)) / r``; collapses to :class:`Rational`
    when ``q == 0`` or ``d`` is a perfect square."""
    if r == 0:
        raise ZeroDivisionError("r must be non-zero")
    if d < 0:
        raise ValueError("negative radicand")
    if r < 0:
        p, q, r = -p, -q, -r
    if q == 0 or d in (0, 1):
        return Rational(Fraction(p + (q if d == 1 else 0), r))
    s, d0 = _squarefree_split(d)
    q *= s
    if d0 == 1:
        return Rational(Fraction(p + q, r))
    g = math.gcd(math.gcd(p, q), r)
    return Quadratic(p // g, q // g, d0, r // g)


def sqrt_of(d: int) -> ExactReal:
    return quadratic(0, 1, d, 1)


def _coerce(x) -> ExactReal | None:
    if isinstance(x, ExactReal):
        return x
    if isinstance(x, bool):
        return None
    if isinstance(x, (int, _RationalABC)):
        return Rational(Fraction(x))
    return None


def _common_radicand(a: ExactReal, b: ExactReal) -> int | None:
    """Radicand shared by two exact operands (``1`` when both are rational)."""
    da = a.d if isinstance(a, Quadratic) else 1 if isinstance(a, Rational) else None
    db = b.d if isinstance(b, Quadratic) else 1 if isinstance(b, Rational) else None
    if da is None or db is None:
        return None
    if da == 1 or db == 1 or da == db:
        return max(da, db)
    return None


def _parts(x: ExactReal) -> tuple[int, int, int]:
    if isinstance(x, Rational):
        return x.value.numerator, 0, x.value.denominator
    return x.p, x.q, x.r


def _certified(label: str, fn: Callable) -> CertifiedDecimal:
    return CertifiedDecimal(label, fn)


def _add(a: ExactReal, b: ExactReal) -> ExactReal:
    d = _common_radicand(a, b)
    if d is None:
        return _certified(f"({a} + {b})", lambda: a._iv() + b._iv())
    if d == 1:
        return Rational(a.value + b.value)
    p1, q1, r1 = _parts(a)
    p2, q2, r2 = _parts(b)
    return quadratic(p1 * r2 + p2 * r1, q1 * r2 + q2 * r1, d, r1 * r2)


def _scale(a: ExactReal, c: Fraction) -> ExactReal:
    if isinstance(a, Rational):
        return Rational(a.value * c)
    if isinstance(a, Quadratic):
        return quadratic(a.p * c.numerator, a.q * c.numerator, a.d, a.r * c.denominator)
    if c == -1:
        return CertifiedDecimal(f"-{a}", lambda: -a._iv(), a.irrational)
    irr = a.irrational if c != 0 else False
    return CertifiedDecimal(
        f"{c}*{a}", lambda: a._iv() * c.numerator / c.denominator, irr
    )


def _mul(a: ExactReal, b: ExactReal) -> ExactReal:
    if isinstance(b, Rational):
        return _scale(a, b.value)
    if isinstance(a, Rational):
        return _scale(b, a.value)
    d = _common_radicand(a, b)
    if d is None:
        return _certified(f"({a} * {b})", lambda: a._iv() * b._iv())
    p1, q1, r1 = _parts(a)
    p2, q2, r2 = _parts(b)
    return quadratic(p1 * p2 + q1 * q2 * d, p1 * q2 + p2 * q1, d, r1 * r2)


# ---------------------------------------------------------------------------
# bracket functions

def _quadratic_sign(p: int, q: int, d: int) -> int:
    """Sign of ``p + q*sqrt(d)`` for squarefree ``d > 1`` and ``q != 0``."""
    if p >= 0 and q > 0:
        return 1
    if p <= 0 and q < 0:
        return -1
    # opposite signs: compare squares, never equal since sqrt(d) is irrational
    if p * p > q * q * d:
        return 1 if p > 0 else -1
    return 1 if q > 0 else -1


def _quadratic_floor(p: int, q: int, d: int, r: int) -> int:
    # q*sqrt(d) lies strictly between consecutive integers s and s+1
    s = math.isqrt(q * q * d)
    base = p + s if q > 0 else p - s - 1
    return base // r


def _certified_floor(a: ExactReal, start: int, cap: int) -> int:
    digits = start
    while True:
        with _digits(digits + 10):
            lo, hi = (int(mpmath.floor(x)) for x in _endpoints(a._iv()))
        if lo == hi:
            return lo
        if digits >= cap:
            raise BracketError(
                BracketError.UNDECIDABLE_FLOOR,
                f"enclosure of {a} still contains the integer {hi} at {cap} digits",
            )
        digits = min(2 * digits, cap)


def floor_of(a: ExactReal, start_digits: int = START_DIGITS, max_digits: int = MAX_DIGITS) -> int:
    """``[a]``: the largest integer not exceeding ``a``."""
    a = _coerce(a)
    if isinstance(a, Rational):
        return math.floor(a.value)
    if isinstance(a, Quadratic):
        return _quadratic_floor(a.p, a.q, a.d, a.r)
    return _certified_floor(a, start_digits, max_digits)


def scaled_floor(a: ExactReal, m: int) -> int:
    """``[m*a]`` without building the intermediate value (hot path of the
    index formulas)."""
    if isinstance(a, Quadratic):
        return _quadratic_floor(m * a.p, m * a.q, a.d, a.r)
    if isinstance(a, Rational):
        return math.floor(m * a.value)
    return floor_of(a * m)


def is_integer(a: ExactReal) -> bool:
    a = _coerce(a)
    if isinstance(a, Rational):
        return a.value.denominator == 1
    if isinstance(a, Quadratic):
        return False
    if a.irrational:
        return False
    # a certified value is only provably non-integral
    floor_of(a)
    return False


def ceil_of(a: ExactReal, start_digits: int = START_DIGITS, max_digits: int = MAX_DIGITS) -> int:
    """``E(a)``: the smallest integer not below ``a``."""
    a = _coerce(a)
    if isinstance(a, Rational):
        return math.ceil(a.value)
    return floor_of(a, start_digits, max_digits) + varphi_of(a)


def varphi_of(a: ExactReal) -> int:
    """``E(a) - [a]``: 0 on integers, 1 elsewhere."""
    return 0 if is_integer(a) else 1


def scaled_ceil(a: ExactReal, m: int) -> int:
    if isinstance(a, Rational):
        return math.ceil(m * a.value)
    return scaled_floor(a, m) + scaled_varphi(a, m)


def scaled_varphi(a: ExactReal, m: int) -> int:
    if isinstance(a, Rational):
        return 0 if (m * a.value).denominator == 1 else 1
    if isinstance(a, Quadratic):
        return 1
    return varphi_of(a * m)


def frac_of(a: ExactReal) -> ExactReal:
    """``{a} = a - [a]``, in ``[0, 1)``; representation is preserved."""
    a = _coerce(a)
    return a - floor_of(a)


def sign_of(a: ExactReal, start_digits: int = START_DIGITS, max_digits: int = MAX_DIGITS) -> int:
    a = _coerce(a)
    if isinstance(a, Rational):
        return (a.value > 0) - (a.value < 0)
    if isinstance(a, Quadratic):
        return _quadratic_sign(a.p, a.q, a.d)
    digits = start_digits
    while True:
        with _digits(digits + 10):
            lo, hi = _endpoints(a._iv())
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if digits >= max_digits:
            raise BracketError(
                BracketError.PRECISION_EXHAUSTED,
                f"cannot separate {a} from 0 at {max_digits} digits",
            )
        digits = min(2 * digits, max_digits)


def compare(a, b, start_digits: int = START_DIGITS, max_digits: int = MAX_DIGITS) -> int:
    """Three-way comparison: -1, 0 or 1 as ``a`` is less than, equal to or
    greater than ``b``.

    Exact when both operands are rational or quadratic over one radicand;
    otherwise the difference is enclosed with escalating precision.
    """
    a, b = _coerce(a), _coerce(b)
    if a is None or b is None:
        raise TypeError("compare() needs real operands")
    return sign_of(a - b, start_digits, max_digits)


# ---------------------------------------------------------------------------
# literal grammar

def from_literal(obj: dict) -> ExactReal:
    """Parse ``{"kind": "rational"|"quadratic"|"decimal", ...}``."""
    kind = obj.get("kind")
    if kind == "rational":
        return Rational(Fraction(int(obj["p"]), int(obj["q"])))
    if kind == "quadratic":
        return quadratic(int(obj["p"]), int(obj["q"]), int(obj["d"]), int(obj.get("r", 1)))
    if kind == "decimal":
        value = str(obj["value"])
        digits = obj.get("digits")
        if digits is None:
            digits = len(value.partition(".")[2]) or 1
        return CertifiedDecimal.from_literal(value, int(digits), obj.get("irrational"))
    raise ValueError(f"unknown literal kind {kind!r}")


def to_literal(x: ExactReal) -> dict:
    if isinstance(x, Rational):
        return {"kind": "rational", "p": x.value.numerator, "q": x.value.denominator}
    if isinstance(x, Quadratic):
        return {"kind": "quadratic", "p": x.p, "q": x.q, "d": x.d, "r": x.r}
    if x.literal is not None:
        value, digits = x.literal
    else:
        digits = 60
        mid, _ = x.enclosure(digits + 5)
        value = mpmath.nstr(mid, digits + 5, strip_zeros=False)
    out = {"kind": "decimal", "value": value, "digits": digits}
    if x.irrational is not None:
        out["irrational"] = x.irrational
    return out
