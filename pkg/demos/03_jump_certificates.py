"""Common index jumps: where every geodesic's indices straddle 2N at once."""
from geodesic_index import find_certificates, find_common_jump, index_iterate_elliptic, isolation_check
from geodesic_index.synthetic import synthetic_model_set

models = synthetic_model_set(3, 4)
for g in models:
    print(g.name, "index", g.index, "turns", [f"{float(t):.6f}" for t in g.turns])

cert = find_common_jump(models, M0=2)
print(f"\nsmallest N with 2 | N: {cert.N}, iterates {cert.iterates}")
for g, m in zip(models, cert.iterates):
    around = [index_iterate_elliptic(g, k) for k in (2 * m - 1, 2 * m, 2 * m + 1)]
    print(f"  {g.name}: i(c^(2m-1)), i(c^2m), i(c^(2m+1)) = {around}   2N = {2 * cert.N}")

gap = isolation_check(models[cert.distinguished], cert)
print("\ndistinguished geodesic isolated around the window:", gap.passed)

print("\nthe next few certificates:")
for c in find_certificates(models, 5, M0=2, N_max=20_000):
    print(" ", c.N, c.iterates)
