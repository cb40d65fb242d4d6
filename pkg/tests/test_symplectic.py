import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from geodesic_index.numerics import Rational, quadratic
from geodesic_index.symplectic import (
    H,
    N1,
    N2,
    R,
    ClassificationError,
    NormalFormData,
    NotSymplecticError,
    as_symplectic,
    assemble,
    decompose,
    diamond_sum,
    diamond_sum_all,
    elliptic_height,
    is_irrationally_elliptic,
    rotation,
    spectrum_of,
    standard_form,
    symplectic_defect,
)
from normal_forms import random_conjugator, random_normal_form, round_trip_matches


def sorted_eigs(M):
    ev = np.linalg.eigvals(M)
    return sorted(ev, key=lambda z: (round(z.real, 6), round(z.imag, 6)))


class TestDiamondSum:
    def test_interleaves_blocks(self):
        A = np.arange(1, 5, dtype=float).reshape(2, 2)
        B = np.arange(5, 9, dtype=float).reshape(2, 2)
        expected = np.array([
            [1, 0, 2, 0],
            [0, 5, 0, 6],
            [3, 0, 4, 0],
            [0, 7, 0, 8],
        ], dtype=float)
        assert np.array_equal(diamond_sum(A, B), expected)

    def test_identity(self):
        assert np.array_equal(diamond_sum(np.eye(2), np.eye(2)), np.eye(4))

    def test_spectrum_is_union(self):
        M = diamond_sum(H(2).matrix(), rotation(math.pi / 3))
        expected = [2, 0.5, np.exp(1j * math.pi / 3), np.exp(-1j * math.pi / 3)]
        assert np.allclose(sorted_eigs(M), sorted(expected, key=lambda z: (round(complex(z).real, 6), round(complex(z).imag, 6))))

    def test_result_symplectic(self):
        M = diamond_sum_all([rotation(0.3), H(-3).matrix(), N1(1, 1).matrix()])
        assert symplectic_defect(M) < 1e-12

    def test_associative_up_to_relabeling(self):
        a, b, c = rotation(0.3), H(2).matrix(), N1(-1, 1).matrix()
        left = diamond_sum(diamond_sum(a, b), c)
        right = diamond_sum(a, diamond_sum(b, c))
        assert np.array_equal(left, right)


class TestBlocks:
    def test_rejects_half_turn(self):
        with pytest.raises(ValueError):
            R(Rational(Fraction(1, 2)))

    def test_hyperbolic_parameter(self):
        with pytest.raises(ValueError):
            H(1.0)

    def test_n2_triviality_sign_test(self):
        turn = 0.1
        for trivial in (True, False):
            block = N2.canonical(turn, trivial)
            b1, b2, b3, b4 = block.B
            assert block.trivial == trivial
            assert ((b2 - b3) * math.sin(block.theta) < 0) == (not trivial)
            assert symplectic_defect(block.matrix()) < 1e-12

    def test_n2_rejects_non_symplectic_b(self):
        with pytest.raises(ValueError):
            N2(0.1, (0.0, 1.0, -1.0, 0.0))

    def test_not_symplectic(self):
        with pytest.raises(NotSymplecticError):
            as_symplectic(np.array([[2.0, 0], [0, 2.0]]))


class TestAssemble:
    def test_single_rotation(self):
        nf = NormalFormData.from_counts(rotations=[0.2])
        assert np.allclose(assemble(nf), rotation(0.4 * math.pi))

    def test_rotation_family(self):
        turns = [quadratic(-1, 1, 2), quadratic(-1, 1, 3), quadratic(0, 1, 2, 2)]
        nf = NormalFormData.from_counts(rotations=turns)
        M = assemble(nf)
        assert M.shape == (6, 6)
        assert np.allclose(M, diamond_sum_all(rotation(2 * math.pi * float(t)) for t in nf.rotation_turns))
        assert is_irrationally_elliptic(nf) is True

    def test_n1_and_h_spectrum(self):
        M = assemble(NormalFormData.from_counts(p_minus=1, hyperbolic=[2.0]))
        assert np.allclose(sorted(np.linalg.eigvals(M).real), [0.5, 1, 1, 2])


class TestSpectrum:
    def test_rotation(self):
        spectrum = spectrum_of(rotation(1.0))
        assert all(spectrum.on_circle)
        assert np.allclose(sorted(np.angle(spectrum.values)), [-1.0, 1.0])
        assert spectrum.nullity(1.0) == 0

    def test_hyperbolic(self):
        spectrum = spectrum_of(H(2).matrix())
        assert not any(spectrum.on_circle)
        assert np.allclose(sorted(np.real(spectrum.values)), [0.5, 2])

    def test_n1(self):
        spectrum = spectrum_of(N1(1, 1).matrix())
        assert spectrum.multiplicities == (2,)
        assert spectrum.nullity(1.0) == 1

    def test_symmetry(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            nf = random_normal_form(rng)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                assert spectrum_of(assemble(nf)).is_symmetric()


class TestEllipticHeight:
    def test_examples(self):
        assert elliptic_height(rotation(1.0)) == 2
        assert elliptic_height(diamond_sum(H(2).matrix(), H(3).matrix())) == 0
        assert elliptic_height(diamond_sum(rotation(1.0), H(2).matrix())) == 2

    def test_formula(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            nf = random_normal_form(rng)
            s = nf.splitting_numbers()
            expected = 2 * sum(s[k] for k in ("p_minus", "p_zero", "p_plus", "q_minus", "q_zero", "q_plus"))
            expected += 2 * s["r"] + 4 * s["r_star"] + 4 * s["r_zero"]
            assert elliptic_height(assemble(nf)) == expected


class TestDecompose:
    def test_two_rotations(self):
        turns = [quadratic(-1, 1, 2), quadratic(-1, 1, 3)]
        nf = decompose(assemble(NormalFormData.from_counts(rotations=turns)))
        s = nf.splitting_numbers()
        assert s["r"] == 2 and sum(s.values()) == 2
        assert np.allclose(sorted(float(t) for t in nf.rotation_turns), sorted(float(t) for t in turns), atol=1e-9)

    def test_identity(self):
        for k in (1, 2, 3):
            s = decompose(np.eye(2 * k)).splitting_numbers()
            assert s["p_zero"] == k and sum(s.values()) == k

    @pytest.mark.parametrize("a, key", [(1.0, "p_minus"), (-1.0, "p_plus")])
    def test_conjugated_n1_and_h(self, a, key):
        rng = np.random.default_rng(3)
        g = random_conjugator(rng, 2)
        M = g @ assemble(NormalFormData((N1(1, a), H(3.0)))) @ np.linalg.inv(g)
        s = decompose(M).splitting_numbers()
        assert s[key] == 1 and s["h"] == 1 and sum(s.values()) == 2

    def test_krein_branch(self):
        # R(turn) and R(1 - turn) have the same eigenvalues; only the Krein sign tells them apart
        for turn in (0.15, 0.85):
            nf = decompose(rotation(2 * math.pi * turn))
            assert float(nf.rotation_turns[0]) == pytest.approx(turn, abs=1e-12)

    def test_n2_triviality_recovered(self):
        for trivial in (True, False):
            nf = decompose(N2.canonical(0.2, trivial).matrix())
            assert (nf.r_zero, nf.r_star) == ((1, 0) if trivial else (0, 1))

    def test_exact_annotations(self):
        t = quadratic(-1, 1, 2)
        nf = decompose(rotation(2 * math.pi * float(t)), exact_turns=[t])
        assert nf.rotation_turns[0] == t
        assert is_irrationally_elliptic(nf) is True

    def test_numeric_angles_have_unknown_rationality(self):
        nf = decompose(rotation(1.0))
        assert is_irrationally_elliptic(nf) is None

    def test_irrational_ellipticity_negatives(self):
        assert is_irrationally_elliptic(NormalFormData.from_counts(p_minus=1)) is False
        assert is_irrationally_elliptic(NormalFormData.from_counts(rotations=[Rational(Fraction(1, 3))])) is False

    def test_ambiguous_clusters_raise(self):
        M = diamond_sum(rotation(1.0), rotation(1.0 + 1e-6))
        with pytest.raises(ClassificationError):
            decompose(M)

    def test_long_jordan_chain_unsupported(self):
        # a single 4x4 Jordan block at eigenvalue 1 (checked with sympy's jordan_form)
        M = np.array([[1, 1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, -1, 1]], dtype=float)
        assert symplectic_defect(M) < 1e-12
        with pytest.raises(ClassificationError, match="longer than 2"):
            decompose(M)


@given(st.integers(0, 2**32 - 1))
def test_round_trip_property(seed):
    rng = np.random.default_rng(seed)
    nf = random_normal_form(rng)
    g = random_conjugator(rng, nf.half_dim)
    M = g @ assemble(nf) @ np.linalg.inv(g)
    assert round_trip_matches(nf, decompose(M))
