"""Window bookkeeping: how many irrationally elliptic geodesics can there be?

Around degree 2N the Morse numbers of the iterates must add up to the Betti
numbers.  The distinguished geodesic contributes three iterates, every other
geodesic one, so the count only closes for one value of q.
"""
from geodesic_index import conclude_multiplicity, three_sphere_check, verify_model_set
from geodesic_index.synthetic import extra_geodesic, synthetic_model_set

for n in (2, 3, 4, 5):
    forced = conclude_multiplicity(n)
    for q in (forced - 1, forced, forced + 1):
        if q < 1:
            continue
        models = synthetic_model_set(n, q)
        r = verify_model_set(models)
        print(f"S^{n}  q={q}:  {r.verdict:12s} window count {r.window_total} vs Betti sum {r.betti_window_sum}")
    print()

# a consistent set stops being consistent as soon as one more geodesic joins
models = synthetic_model_set(3, 4)
N = verify_model_set(models).certificate["N"]
print("S^3 with a fifth geodesic:", verify_model_set(models + [extra_geodesic(models, N)]).verdict)

# two irrationally elliptic geodesics on S^3 cannot be the whole story
report = three_sphere_check(synthetic_model_set(3, 2))
print("S^3 pair:", report.verdict, "- forced count", report.forced_multiplicity)
