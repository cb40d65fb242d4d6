"""Indices of iterates for a single irrationally elliptic closed geodesic.

The rotation angle is kept as an exact quadratic irrational, so every floor
in the index formula is decided by integer arithmetic.
"""
from geodesic_index import GeodesicModel, index_iterate_elliptic, index_iterate_general, mean_index, quadratic

# a geodesic on S^2 with Morse index 1 and Poincare map rotating by sqrt(2)/2 of a turn
c = GeodesicModel(2, 1, (quadratic(0, 1, 2, 2),), "c")

print("m   i(c^m)   i(c^m)/m")
for m in range(1, 13):
    i_m = index_iterate_elliptic(c, m)
    print(f"{m:<3d} {i_m:<8d} {i_m / m:.4f}")

# the ratio settles on the mean index, here exactly sqrt(2)
print("mean index:", mean_index(c), "=", float(mean_index(c)))

# the same numbers come out of the general formula for the rotation endpoint
path = c.as_path_model()
assert all(index_iterate_general(path, m) == index_iterate_elliptic(c, m) for m in range(1, 200))
print("general and elliptic formulas agree for m < 200")

# gaps between consecutive indices are always even, and never negative at index n-1
gaps = [index_iterate_elliptic(c, m + 1) - index_iterate_elliptic(c, m) for m in range(1, 30)]
print("gaps:", gaps)
