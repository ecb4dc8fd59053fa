import json

import numpy as np
import pytest

from bwmlab.algebra import residual
from bwmlab.params import check_bwma, e_from_s, from_q, limit_params, make_params
from bwmlab.topo import (TopoBasisError, build_rep, gram_matrix, m_domain_survey,
                         normalizer_discrepancy, q1_limit_rep, standard_matrices, standardize,
                         topo_coeffs)

R6 = np.sqrt(6)
GAUGE = np.diag([1, 1j, -1])


def test_gram_q1_limit_values():
    g = gram_matrix(limit_params(1.0, 1.0, 3.0))
    assert np.allclose(g, [[9, 3, 3], [3, 9, 3], [3, 3, 9]])


@pytest.mark.parametrize("q,m", [(1.2, -2), (0.7, -3), (np.exp(1j * np.pi / 7), -2)])
def test_gram_uu_tsep_is_d(q, m):
    p = from_q(q, m)
    assert gram_matrix(p)[1, 2] == pytest.approx(p.d)


def test_gram_unitary_conjugate_symmetric():
    g = gram_matrix(from_q(np.exp(1j * np.pi / 9), -3))
    assert np.allclose(g, g.conj().T, atol=1e-14)


def test_gram_hermitian_symmetric():
    g = gram_matrix(from_q(1.4, -2))
    assert np.allclose(g, g.T)


def test_coeffs_q1_limit_betas():
    # d = 3 at sigma = 1, lambda1 = 1: beta_i = -(1 + lambda_i)/3
    p = limit_params(1.0, 1.0, 3.0)
    beta = [-(1 / p.sigma + lam) / p.d for lam in (p.lambda1, p.lambda2)]
    assert beta[0] == pytest.approx(-2 / 3)
    assert beta[1] == pytest.approx(0)


def test_coeffs_type_ii_normalizers():
    c = topo_coeffs(make_params(np.exp(1j * np.pi / 4), -np.exp(1j * np.pi / 4), "unitary"))
    assert c.f[0] == pytest.approx(1 / np.sqrt(2), abs=1e-14)
    assert c.f[1] == pytest.approx(0.5, abs=1e-14)


@pytest.mark.parametrize("q,m", [(1.2, -2), (0.6, -2), (1.7, -4), (np.exp(1j * np.pi / 5), -2),
                                 (np.exp(1j * np.pi / 11), -3)])
def test_coeffs_invariants(q, m):
    p = from_q(q, m)
    c = topo_coeffs(p)
    assert c.alpha[0] * c.alpha[1] == pytest.approx(-1)
    for a, b in zip(c.alpha, c.beta):
        assert a + b * p.d == pytest.approx(-1 / p.sigma)
    v = c.vectors(p.d)
    assert residual(v.conj().T @ c.gram @ v, np.eye(3)) < 1e-10


def test_q1_normalizers_from_gram():
    # Gram normalization at q = 1, d = 3
    c = q1_limit_rep(-2)
    n1 = np.array([1, 1, -2 / 3]) @ np.array([[9, 3, 3], [3, 9, 3], [3, 3, 9]]) @ np.array([1, 1, -2 / 3])
    assert n1 == pytest.approx(20)
    assert c.params.d == pytest.approx(3, abs=1e-9)


def test_vanishing_normalizer_names_lambda():
    with pytest.raises(TopoBasisError, match="lambda_i"):
        topo_coeffs(from_q(1.2, 0))


def test_negative_normalizer_rejected():
    with pytest.raises(TopoBasisError):
        topo_coeffs(from_q(1.2, 2))


def test_d_zero_rejected():
    with pytest.raises(TopoBasisError):
        topo_coeffs(from_q(1.2, 1))


def test_standard_b33():
    q = 1.2
    rep = build_rep(from_q(q, -2))
    assert rep.b[2, 2] == pytest.approx(q * q / rep.params.d)


def test_standard_eb11():
    rep = build_rep(from_q(1.3, -2))
    d = rep.params.d
    assert rep.e_b[0, 0] == pytest.approx((d * d - d - 1) / d)


@pytest.mark.parametrize("q", [0.65, 0.9, 1.2, 1.75])
def test_standard_closed_forms_match_generic(q):
    rep = build_rep(from_q(q, -2))
    b, eb = standard_matrices(q)
    assert np.max(np.abs(b - rep.b)) < 1e-10
    assert np.max(np.abs(eb - rep.e_b)) < 1e-10


def test_b_inverse(rng):
    for q in rng.uniform(0.6, 1.8, 5):
        rep = build_rep(from_q(q, -3))
        assert residual(rep.b @ np.linalg.inv(rep.b), np.eye(3)) < 1e-12


def test_rep_invariants_hermitian():
    rep = build_rep(from_q(1.35, -2))
    p = rep.params
    assert np.allclose(rep.a, np.diag(p.eigenvalues))
    assert np.allclose(rep.e_a, np.diag([0, 0, p.d]))
    assert residual(rep.a, rep.a.conj().T) < 1e-10
    assert residual(rep.b, rep.b.conj().T) < 1e-10
    assert np.allclose(np.sort(np.linalg.eigvals(rep.b).real), np.sort(np.real(p.eigenvalues)), atol=1e-9)


def test_rep_invariants_unitary():
    rep = build_rep(from_q(np.exp(1j * np.pi / 9), -2))
    for x in (rep.a, rep.b):
        assert residual(x @ x.conj().T, np.eye(3)) < 1e-10


def test_e_b_consistent_with_skein():
    rep = build_rep(from_q(1.25, -2))
    assert residual(e_from_s(rep.b, rep.params), rep.e_b) < 1e-12


def test_unitary_b_matches_hermitian_closed_form_on_unit_circle():
    from bwmlab.topo import _hermitian_matrices, _unitary_matrices

    p = from_q(np.exp(1j * np.pi / 8), -2)
    f1, f2 = topo_coeffs(p).f
    for x, y in zip(_hermitian_matrices(p, f1, f2), _unitary_matrices(p, f1, f2)):
        assert residual(x, y) < 1e-13


def test_standardize_identity_and_inverse():
    rep = build_rep(from_q(1.2, -2))
    same = standardize(rep, np.eye(3))
    assert all(np.allclose(x, y) for x, y in zip(same.matrices(), rep.matrices()))
    back = standardize(standardize(rep, GAUGE), GAUGE.conj().T)
    assert all(residual(x, y) < 1e-14 for x, y in zip(back.matrices(), rep.matrices()))


def test_standardize_type_i_gauge():
    lim = q1_limit_rep(-3)
    g = standardize(lim, GAUGE)
    want = -np.array([[1, 1j * R6, -3], [-1j * R6, 2, -1j * R6], [-3, 1j * R6, 1]]) / 4
    assert np.max(np.abs(-g.b - want)) < 1e-10


def test_standardize_rejects_non_unitary():
    rep = build_rep(from_q(1.2, -2))
    with pytest.raises(TopoBasisError):
        standardize(rep, np.diag([1, 2, 1]))
    with pytest.raises(TopoBasisError):
        standardize(rep, np.ones((3, 3)))


def test_q1_limit_type_i():
    lim = q1_limit_rep(-3)
    assert np.max(np.abs(-lim.a - (-np.diag([1, -1, 1])))) < 1e-10
    want = -np.array([[1, -R6, 3], [-R6, 2, R6], [3, R6, 1]]) / 4
    assert np.max(np.abs(-lim.b - want)) < 1e-10
    assert lim.params.d == pytest.approx(4, abs=1e-9)
    assert lim.report.overall_pass


def test_q1_limit_spread_recorded():
    lim = q1_limit_rep(-2)
    spread = [e for e in lim.report.entries if e.id == "limit_spread"][0]
    assert spread.residual < 1e-8


def test_q1_limit_passes_suite_with_extrapolated_d():
    lim = q1_limit_rep(-1)
    assert check_bwma(*lim.matrices(), lim.params).overall_pass


def test_q1_limit_degenerate_m():
    with pytest.raises(TopoBasisError):
        q1_limit_rep(0)


def test_printed_normalizer_exponent_discrepancy():
    rows = normalizer_discrepancy(from_q(1.2, -2))
    for r in rows:
        # the printed brackets equal the Gram norm; only the exponent sign differs
        assert r["abs_diff_minus_half"] < 1e-12
        assert r["abs_diff_plus_half"] > 1


def test_m_domain_survey_records_rejections():
    rows = {r["m"]: r for r in m_domain_survey(q_values=(1.2,), m_values=range(-3, 3))}
    assert rows[-2]["overall_pass"] and rows[-3]["overall_pass"]
    assert rows[0]["status"] == "rejected" and rows[1]["status"] == "rejected"


def test_rep_json_roundtrip():
    data = json.loads(build_rep(from_q(1.2, -2)).to_json())
    assert set(data) == {"A", "B", "E_A", "E_B", "params", "report"}
    assert len(data["B"]) == 3 and len(data["B"][0][0]) == 2
    assert data["report"]["overall_pass"] is True
