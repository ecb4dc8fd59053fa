import numpy as np
import pytest

from bwmlab.entropy import (CSV_HEADER, ScanError, bound_check, entropy, l1_norm,
                            pi_half_derivative_check, reduced_probs, scan, write_csv)
from bwmlab.wigner import WignerError, m_values

ALL_JM = [(j, m) for j in ("1/2", 1, "3/2", 2) for m in m_values(j)]


def test_probs_at_zero():
    assert np.allclose(reduced_probs(1, 0, 0.0), [0, 1, 0])


def test_probs_spin_half_right_angle():
    assert np.allclose(reduced_probs("1/2", "1/2", np.pi / 2), [0.5, 0.5])


def test_probs_at_pi():
    assert np.allclose(reduced_probs("3/2", "1/2", np.pi), [0, 0, 1, 0], atol=1e-30)


def test_probs_invalid():
    with pytest.raises(WignerError):
        reduced_probs(1, "1/2", 0.3)


def test_entropy_values():
    assert entropy([0.5, 0.5]) == pytest.approx(1.0)
    assert entropy([1.0, 0.0, 0.0]) == 0.0
    assert entropy([1 / 3] * 3) == pytest.approx(1.584963, abs=1e-6)


def test_entropy_rejects_bad_distribution():
    with pytest.raises(ScanError):
        entropy([0.5, 0.6])
    with pytest.raises(ScanError):
        entropy([1.5, -0.5])


def test_l1_values():
    assert l1_norm(1, 1, np.pi) == pytest.approx(1.0)
    assert l1_norm("1/2", "1/2", np.pi / 2) == pytest.approx(np.sqrt(2))
    assert l1_norm(2, 1, 0.0) == pytest.approx(1.0)


def test_bound_equalities():
    assert abs(bound_check("1/2", "1/2", np.pi / 2)) < 1e-12
    assert abs(bound_check(2, 1, np.pi)) < 1e-12


def test_bound_strict_spin1():
    s = entropy(reduced_probs(1, 1, np.pi / 2))
    two_log_f = 2 * np.log2(l1_norm(1, 1, np.pi / 2))
    assert s < two_log_f < np.log2(3)


@pytest.mark.parametrize("j,m", ALL_JM)
def test_grid_invariants(j, m):
    grid = np.linspace(-np.pi, np.pi, 2001)
    p = reduced_probs(j, m, grid)
    assert np.max(np.abs(p.sum(axis=0) - 1)) < 1e-12
    assert np.min(bound_check(j, m, grid)) >= -1e-12
    s = entropy(p)
    assert np.max(np.abs(s - s[::-1])) < 1e-12
    f = l1_norm(j, m, grid)
    assert np.max(np.abs(f - f[::-1])) < 1e-12


@pytest.mark.parametrize("j,m", ALL_JM)
def test_separable_endpoint(j, m):
    assert entropy(reduced_probs(j, m, np.pi)) < 1e-12
    assert abs(l1_norm(j, m, np.pi) - 1) < 1e-12


def _near(items, theta, kind, tol=2e-3):
    return any(abs(e["theta"] - theta) < tol and e["kind"] == kind for e in items)


def test_scan_spin_half():
    res = scan("1/2", "1/2")
    rep = res.report
    assert len(rep.common_extrema) == 2
    assert rep.has_common(np.pi / 2, "max") and rep.has_common(np.pi, "min")
    assert not rep.entropy_only and not rep.l1_only


def test_scan_j1_m0():
    rep = scan(1, 0).report
    assert rep.m_zero
    assert rep.has_common(np.pi / 2, "min")
    a = np.arccos(1 / np.sqrt(3))
    assert rep.has_common(a, "max") and rep.has_common(np.pi - a, "max")
    # at those angles S = 2 log2 f = log2 3
    assert entropy(reduced_probs(1, 0, a)) == pytest.approx(np.log2(3))
    assert 2 * np.log2(l1_norm(1, 0, a)) == pytest.approx(np.log2(3))
    # and at pi/2 the bound is saturated
    assert abs(bound_check(1, 0, np.pi / 2)) < 1e-12


def test_scan_j32_m12():
    rep = scan("3/2", "1/2").report
    assert rep.has_common(np.pi / 2) and rep.has_common(np.pi, "min")
    # four further extrema of S in (0, pi), none shared with f
    assert len(rep.entropy_only) == 4 and len(rep.l1_only) == 4
    assert _near(rep.entropy_extrema, np.pi / 2, "max")


def test_scan_j32_m32():
    res = scan("3/2", "3/2")
    assert res.report.has_common(np.pi / 2, "max")
    s = entropy(reduced_probs("3/2", "3/2", np.pi / 2))
    two_log_f = 2 * np.log2(l1_norm("3/2", "3/2", np.pi / 2))
    assert s < two_log_f < 2


@pytest.mark.parametrize("j,m", [jm for jm in ALL_JM if jm[1] != 0])
def test_common_extrema_for_nonzero_m(j, m):
    rep = scan(j, m).report
    assert rep.has_common(np.pi / 2)
    assert rep.has_common(np.pi, "min")


def test_scan_kink_classified_with_one_sided_slopes():
    rep = scan(1, 0).report
    kinks = [e for e in rep.l1_extrema if e["kink"]]
    assert any(abs(e["theta"] - np.pi / 2) < 1e-9 for e in kinks)


def test_scan_records_fields():
    res = scan(1, 1, points=200)
    r = res.records[0]
    assert {"theta", "entropy", "l1", "d_entropy", "d_l1", "bound_gap"} <= set(vars(r))
    assert len(res.records) == 200 and res.records[-1].theta == pytest.approx(np.pi)


def test_scan_rejects_coarse_grid():
    with pytest.raises(ScanError):
        scan(1, 1, points=50)
    with pytest.raises(ScanError):
        scan(1, 1, theta_grid=np.linspace(0.1, 3, 99))


def test_scan_custom_grid():
    res = scan(1, 1, theta_grid=np.linspace(0.05, np.pi, 400))
    assert res.report.has_common(np.pi / 2, "max", tol=0.02)


@pytest.mark.parametrize("j,m", [jm for jm in ALL_JM if jm[1] != 0])
def test_pi_half_derivative(j, m):
    out = pi_half_derivative_check(j, m)
    assert out["dS_ok"] and out["product_ok"]


def test_pi_half_product_j2_m1():
    out = pi_half_derivative_check(2, 1)
    assert abs(out["product"]) < 1e-10


def test_pi_half_spin_half_structural():
    assert pi_half_derivative_check("1/2", "1/2")["product"] is None


def test_csv_output(tmp_path):
    res = scan("1/2", "1/2", points=150)
    path = tmp_path / "s.csv"
    text = write_csv(res.records, path)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 151
    assert text == path.read_text()
    assert write_csv(res.records) == text
    first = lines[1].split(",")
    assert len(first) == 6 and float(first[0]) == pytest.approx(np.pi / 150)
