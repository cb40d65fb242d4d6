"""Reading normal-form data back off a conjugated symplectic matrix."""
import numpy as np
import scipy.linalg

from geodesic_index import NormalFormData, assemble, decompose, quadratic
from geodesic_index.symplectic import elliptic_height, standard_form

rng = np.random.default_rng(0)

# two rotations (one past half a turn), a nontrivial N2 block and a hyperbolic pair
nf = NormalFormData.from_counts(
    rotations=[quadratic(-1, 1, 2), quadratic(3, -1, 3, 2)],
    nontrivial=[0.12],
    hyperbolic=[-3.0],
)
M = assemble(nf)

# hide the block structure behind a random symplectic change of basis
J = standard_form(nf.half_dim)
S = rng.normal(size=M.shape)
S = 0.2 * (S + S.T) / np.linalg.norm(S + S.T, 2)
g = scipy.linalg.expm(J @ S)
P = g @ M @ np.linalg.inv(g)
print("condition of the conjugator:", round(np.linalg.cond(g), 3))

found = decompose(P, exact_turns=nf.rotation_turns)
print("splitting numbers:", found.splitting_numbers())
print("rotation turns:", [str(t) for t in found.rotation_turns])
print("N2 turns:", [round(float(t), 12) for t in found.nontrivial_turns])
print("elliptic height:", elliptic_height(P))

# the two rotations differ only in their Krein sign: one sits below half a turn, one above
for t in found.rotation_turns:
    print(f"  turn {float(t):.6f} ->", "first half" if float(t) < 0.5 else "second half")
