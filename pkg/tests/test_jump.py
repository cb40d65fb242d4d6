import json

import pytest
from hypothesis import given, settings, strategies as st

from geodesic_index.iteration import GeodesicModel, mean_index
from geodesic_index.jump import (
    CertificateNotFound,
    JumpCertificate,
    PreconditionError,
    candidate_iterates,
    find_certificates,
    find_common_jump,
    isolation_check,
    verify_certificate,
)
from geodesic_index.numerics import quadratic
from geodesic_index.synthetic import synthetic_model_set
from oracles import oracle_certificates


class TestRunningExample:
    def test_certificate(self, root_half):
        cert = find_common_jump([root_half])
        assert (cert.N, cert.iterates) == (3, (2,))
        assert cert.distinguished == 0 and cert.witness == 0
        assert all(cert.checks.values())

    def test_minimal_by_exhaustive_scan(self, root_half):
        found = oracle_certificates([root_half], 50)
        assert found[0] == (3, (2,))
        certs = find_certificates([root_half], len(found), N_max=50)
        assert [(c.N, c.iterates) for c in certs] == found

    def test_divisor(self, root_half):
        cert = find_common_jump([root_half], M0=5)
        assert cert.N % 5 == 0
        assert (cert.N, cert.iterates) == oracle_certificates([root_half], 50, M0=5)[0]

    def test_verify(self, root_half):
        check = verify_certificate([root_half], find_common_jump([root_half]))
        assert check.passed and check.failures() == []

    def test_perturbed_iterate(self, root_half):
        bad = JumpCertificate(3, (3,), 1, 0, 0)
        check = verify_certificate([root_half], bad)
        assert not check.passed
        assert check.per_model[0]["lower_jump"] is False

    def test_divisibility_failure(self, root_half):
        check = verify_certificate([root_half], JumpCertificate(3, (2,), 2, 0, 0))
        assert check.failures() == ["divisibility"]

    def test_isolation(self, root_half):
        report = isolation_check(root_half, find_common_jump([root_half]), 10)
        assert report.passed
        assert (report.gap_after, report.gap_before) == (2, 2)

    def test_infinitely_many(self, root_half):
        certs = find_certificates([root_half], 6)
        Ns = [c.N for c in certs]
        assert Ns == sorted(set(Ns)) and len(Ns) == 6
        assert all(verify_certificate([root_half], c).passed for c in certs)


class TestPreconditions:
    def test_no_angle_past_half_turn(self):
        g = GeodesicModel(2, 1, (quadratic(-1, 1, 2),))
        with pytest.raises(PreconditionError, match="no angle"):
            find_common_jump([g])

    def test_two_distinguished(self, root_half):
        with pytest.raises(PreconditionError, match="exactly one"):
            find_common_jump([root_half, root_half])

    def test_low_index_partner(self):
        star = synthetic_model_set(3, 1)[0]
        partner = GeodesicModel(3, 0, (quadratic(1, 1, 2, 4), quadratic(1, 1, 3, 4)))
        with pytest.raises(PreconditionError, match="index 0 < n\\+1") as info:
            find_common_jump([star, partner])
        assert info.value.model == 1

    def test_not_found(self, root_half):
        with pytest.raises(CertificateNotFound):
            find_common_jump([root_half], M0=7, N_max=6)


class TestSyntheticSets:
    @pytest.mark.parametrize("n, q", [(2, 2), (2, 3), (3, 2), (3, 4), (4, 3)])
    def test_minimal_against_oracle(self, n, q):
        models = synthetic_model_set(n, q, seed=n * 10 + q)
        cert = find_common_jump(models, N_max=400)
        found = oracle_certificates(models, cert.N)
        assert found and found[0] == (cert.N, cert.iterates)

    @pytest.mark.parametrize("seed", range(4))
    def test_window_widening_changes_nothing(self, seed):
        models = synthetic_model_set(3, 4, seed=seed)
        results = {
            w: find_common_jump(models, M0=2, N_max=2000, window=w)
            for w in (2, 5, None)
        }
        assert len({(c.N, c.iterates) for c in results.values()}) == 1

    def test_candidate_range_contains_iterates(self):
        models = synthetic_model_set(4, 4)
        cert = find_common_jump(models, M0=3)
        for g, m in zip(models, cert.iterates):
            assert m in candidate_iterates(g, cert.N)
            assert abs(m - cert.N / float(mean_index(g))) <= 2

    def test_infinitude_sampling(self):
        models = synthetic_model_set(3, 4)
        certs = find_certificates(models, 5, M0=2, N_max=20_000)
        assert len({c.N for c in certs}) == 5
        assert all(verify_certificate(models, c).passed for c in certs)


@settings(max_examples=25)
@given(st.integers(2, 5), st.integers(1, 4), st.integers(0, 10**6))
def test_found_certificates_verify(n, q, seed):
    models = synthetic_model_set(n, q, seed=seed)
    cert = find_common_jump(models, M0=n - 1, N_max=5000)
    assert verify_certificate(models, cert).passed


def test_serialisation(root_half):
    cert = find_common_jump([root_half])
    again = JumpCertificate.from_dict(json.loads(json.dumps(cert.to_dict())))
    assert again == cert and again.checks == cert.checks
