"""Irrationally elliptic model sets with a common index jump at a chosen ``N``.

Each angle is put just off a multiple of ``1/(2m_j)``:
``t = (K + eps) / (2 m_j)`` with a tiny irrational ``eps``.  Then
``[(2m_j - 1) t] = K - 1`` and ``[(2m_j + 1) t] = K``, so the jump
equalities at ``N`` reduce to ``N = m_j (i_j - n + 1) + sum_l K_l``.  The
distinguished geodesic gets one angle with ``K > m_1`` and ``eps < 0``,
which puts ``{2 m_1 t}`` close to 1 and satisfies both fractional-part
conditions.

The middle iterate lands at ``2N + (n - 1) - 2 * (number of eps < 0)``, so
the signs decide where in the window each geodesic is counted.
"""
from __future__ import annotations

import random
from typing import Sequence

from .iteration import GeodesicModel
from .numerics import ExactReal, quadratic
from .topology import betti, window

RADICANDS = (2, 3, 5, 6, 7, 10, 11, 13)
SCALE = 10**6


def _nudged(K: int, m: int, sign: int, d: int) -> ExactReal:
    # (K + sign * (sqrt(d) - floor(sqrt(d))) / SCALE) / (2m)
    s = int(d**0.5)
    return quadratic(K * SCALE - sign * s, sign, d, 2 * m * SCALE)


def _split(total: int, parts: int, lo: int, hi: int, rng: random.Random) -> list[int]:
    """Random integers in ``[lo, hi]`` summing to ``total``."""
    if not parts * lo <= total <= parts * hi:
        raise ValueError("infeasible split")
    out = [lo] * parts
    rest = total - parts * lo
    while rest:
        k = rng.randrange(parts)
        if out[k] < hi:
            out[k] += 1
            rest -= 1
    return out


def _signs(k: int, negatives: int | None, rng: random.Random) -> list[int]:
    if negatives is None:
        return [rng.choice((1, -1)) for _ in range(k)]
    out = [-1] * negatives + [1] * (k - negatives)
    rng.shuffle(out)
    return out


def _distinguished(n: int, N: int, rng: random.Random, negatives: int | None = None) -> GeodesicModel:
    k = n - 1
    # need N = sum K with K_0 in [m+1, 2m-1] and the rest in [1, 2m-1]
    for m in rng.sample(range(2, N + 2), len(range(2, N + 2))):
        if (m + 1) + (k - 1) <= N <= k * (2 * m - 1):
            break
    else:
        raise ValueError(f"no distinguished geodesic fits N={N}")
    K0_lo = max(m + 1, N - (k - 1) * (2 * m - 1))
    K0_hi = min(2 * m - 1, N - (k - 1))
    K0 = rng.randint(K0_lo, K0_hi)
    rest = _split(N - K0, k - 1, 1, 2 * m - 1, rng) if k > 1 else []
    signs = _signs(k - 1, None if negatives is None else negatives - 1, rng)
    turns = [_nudged(K0, m, -1, rng.choice(RADICANDS))]
    turns += [_nudged(K, m, sign, rng.choice(RADICANDS)) for K, sign in zip(rest, signs)]
    return GeodesicModel(n, n - 1, tuple(turns), "c1")


def _ordinary(
    n: int, N: int, index: int, label: str, rng: random.Random, negatives: int | None = None
) -> GeodesicModel:
    k = n - 1
    shift = index - n + 1
    options = [
        m for m in range(1, N + 1)
        if k <= N - m * shift <= k * (2 * m - 1)
    ]
    if not options:
        raise ValueError(f"no geodesic with index {index} fits N={N}")
    m = rng.choice(options)
    Ks = _split(N - m * shift, k, 1, 2 * m - 1, rng)
    signs = _signs(k, negatives, rng)
    turns = [_nudged(K, m, sign, rng.choice(RADICANDS)) for K, sign in zip(Ks, signs)]
    return GeodesicModel(n, index, tuple(turns), label)


def betti_matching_negatives(n: int, q: int, N: int) -> list[int] | None:
    """Negative-nudge counts placing the middle iterates so that the window
    Morse numbers equal the Betti numbers degree by degree.

    ``None`` when ``q`` geodesics cannot fill the window profile.
    """
    lo, hi = window(n, N)[0], window(n, N)[-1]
    needed = {p: betti(n, p) for p in window(n, N)}
    needed[lo] -= 1  # the distinguished geodesic's outer iterates
    needed[hi] -= 1
    degrees = sorted(p for p, c in needed.items() for _ in range(max(c, 0)))
    if any(c < 0 for c in needed.values()) or len(degrees) != q:
        return None
    # the distinguished middle cannot sit at the top of the window: give it the lowest slot
    return [(hi - p) // 2 for p in degrees]


def synthetic_model_set(
    n: int,
    q: int,
    N: int | None = None,
    indices: Sequence[int] | None = None,
    seed: int = 0,
    match_betti: bool = False,
) -> list[GeodesicModel]:
    """``q`` irrationally elliptic geodesics on ``S^n`` sharing a jump at ``N``.

    The first model has index ``n - 1``; the others default to indices
    ``n + 1, n + 3, ...``.  ``N`` defaults to a multiple of ``n - 1`` large
    enough for the summation window to sit above degree ``2(n - 1)``.
    With ``match_betti`` the middle iterates are placed so that the window
    Morse numbers equal the Betti numbers degree by degree.
    """
    if indices is None:
        indices = [n + 1 + 2 * (j % 3) for j in range(q - 1)]
    if len(indices) != q - 1:
        raise ValueError("need one index per non-distinguished geodesic")
    if N is not None:
        return _build(n, q, N, indices, seed, match_betti)
    # not every N admits every index; step through multiples of n - 1
    N = 6 * (n - 1) * max(2, q)
    for _ in range(1000):
        try:
            return _build(n, q, N, indices, seed, match_betti)
        except ValueError:
            N += n - 1
    raise ValueError(f"no admissible N found for n={n}, indices={list(indices)}")


def _build(n, q, N, indices, seed, match_betti) -> list[GeodesicModel]:
    rng = random.Random(seed)
    negatives: list[int | None] = [None] * q
    if match_betti:
        plan = betti_matching_negatives(n, q, N)
        if plan is None:
            raise ValueError(f"{q} geodesics cannot match the Betti numbers of the window at N={N}")
        negatives = list(plan)
    models = [_distinguished(n, N, rng, negatives[0])]
    for j, (i, neg) in enumerate(zip(indices, negatives[1:]), start=2):
        models.append(_ordinary(n, N, i, f"c{j}", rng, neg))
    return models


def extra_geodesic(models: Sequence[GeodesicModel], N: int, index: int | None = None, seed: int = 1) -> GeodesicModel:
    """One more geodesic jumping at the same ``N``."""
    n = models[0].n
    rng = random.Random(seed)
    return _ordinary(n, N, n + 1 if index is None else index, f"c{len(models) + 1}", rng)
