"""Independent reference implementations used by several test modules."""
import mpmath


def betti_by_membership(n: int, D: int) -> list[int]:
    """Tabulate from explicitly built degree sets."""
    if n % 2:
        doubled = {k * (n - 1) for k in range(2, D + 1)}
    else:
        doubled = {k * (n - 1) for k in range(3, D + 1, 2)}
    single = {n - 1 + 2 * k for k in range(D + 1)}
    return [2 if j in doubled else 1 if j in single else 0 for j in range(D + 1)]


def _float_turn(t, dps=80):
    with mpmath.workdps(dps):
        mid, _ = t.enclosure(dps)
        return mpmath.mpf(mid)


def oracle_certificates(models, N_max, M0=1):
    """Brute force over every ``N`` and every iterate, with 80-digit floats."""
    n = models[0].n
    star = next(j for j, g in enumerate(models) if g.index == n - 1)
    with mpmath.workdps(80):
        turns = [[_float_turn(t) for t in g.turns] for g in models]

        def index(j, m):
            g = models[j]
            return m * (g.index - n + 1) + 2 * sum(int(mpmath.floor(m * t)) for t in turns[j]) + n - 1

        def frac(x):
            return x - mpmath.floor(x)

        def witness_ok(m):
            for t in turns[star]:
                if t > 0.5:
                    x = frac(2 * m * t)
                    if x > max(1 - frac(2 * t), 1 - t) and x > max(frac(2 * t), t):
                        return True
            return False

        found = []
        for N in range(M0, N_max + 1, M0):
            iterates = []
            for j, g in enumerate(models):
                hit = None
                for m in range(1, 2 * N + 2):
                    ok = (
                        index(j, 2 * m - 1) == 2 * N - g.index
                        and index(j, 2 * m + 1) == 2 * N + g.index
                        and 2 * N - (n - 1) <= index(j, 2 * m) <= 2 * N + n - 1
                        and (j != star or witness_ok(m))
                    )
                    if ok:
                        hit = m
                        break
                if hit is None:
                    break
                iterates.append(hit)
            else:
                found.append((N, tuple(iterates)))
    return found
