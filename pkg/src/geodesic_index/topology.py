"""Rational Betti numbers of the pair ``(Lambda S^n / S^1, Lambda^0 S^n / S^1)``."""
from __future__ import annotations

import warnings
from dataclasses import dataclass


class WindowWarning(UserWarning):
    """The summation window reaches the irregular low degrees."""


def _doubled_degrees(n: int, j: int) -> bool:
    # j = k(n-1) with k >= 2 (n odd) or k >= 3 odd (n even)
    if j % (n - 1):
        return False
    k = j // (n - 1)
    if n % 2:
        return k >= 2
    return k >= 3 and k % 2 == 1


def betti(n: int, j: int) -> int:
    if n < 2:
        raise ValueError("sphere dimension must be at least 2")
    if j < n - 1 or (j - (n - 1)) % 2:
        return 0
    return 2 if _doubled_degrees(n, j) else 1


@dataclass(frozen=True)
class BettiTable:
    n: int
    max_degree: int
    values: tuple[int, ...]

    def __post_init__(self):
        assert all(v in (0, 1, 2) for v in self.values)
        # the low-degree vanishing is what makes the initial-index argument work
        assert all(v == 0 for v in self.values[: self.n - 1])
        assert all(v == 0 for j, v in enumerate(self.values) if (j - self.n + 1) % 2)

    def __getitem__(self, j: int) -> int:
        if j < 0:
            return 0
        if j > self.max_degree:
            return betti(self.n, j)
        return self.values[j]

    def rows(self):
        return list(enumerate(self.values))


def betti_table(n: int, max_degree: int) -> BettiTable:
    return BettiTable(n, max_degree, tuple(betti(n, j) for j in range(max_degree + 1)))


def window(n: int, N: int) -> range:
    """Degrees ``2N - (n-1) .. 2N + (n-1)``."""
    return range(2 * N - (n - 1), 2 * N + n)


def window_is_canonical(n: int, N: int) -> bool:
    return N > 0 and N % (n - 1) == 0 and 2 * N - (n - 1) > 2 * (n - 1)


def betti_window_sum(n: int, N: int) -> int:
    """Sum of ``b_p`` over the window around ``2N``.

    For ``(n-1) | N`` and a window past degree ``2(n-1)`` this is ``n + 2``
    for even ``n`` and ``n + 3`` for odd ``n``.  Other ``N`` are summed all
    the same, with a :class:`WindowWarning`.
    """
    if not window_is_canonical(n, N):
        warnings.warn(
            f"window for n={n}, N={N} is not canonical: need (n-1) | N and 2N-(n-1) > 2(n-1)",
            WindowWarning,
            stacklevel=2,
        )
    return sum(betti(n, p) for p in window(n, N))


def expected_window_sum(n: int) -> int:
    return n + 2 if n % 2 == 0 else n + 3
