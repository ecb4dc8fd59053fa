"""Wigner rotation functions and the D-function solutions of the YBE.

Rows and columns run over m = j, j-1, ..., -j. The phase convention is
D^j_{m'm}(theta, phi) = exp(-i (m' - m) phi) d^j_{m'm}(theta).
"""
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .algebra import DEFAULT_TOL, Tolerance, matexp, residual
from .params import RelationReport

J_MAX = 12


class WignerError(ValueError):
    pass


def half_int(x) -> Fraction:
    """Parse j or m given as int, float, Fraction or a string like '3/2'."""
    try:
        f = Fraction(x) if not isinstance(x, float) else Fraction(x).limit_denominator(4)
    except (ValueError, ZeroDivisionError) as exc:
        raise WignerError(f"cannot read {x!r} as a half-integer") from exc
    if (2 * f).denominator != 1:
        raise WignerError(f"{x!r} is not a half-integer")
    return f


def m_values(j):
    j = half_int(j)
    return [j - k for k in range(int(2 * j) + 1)]


def _check(j, mp, m):
    j, mp, m = half_int(j), half_int(mp), half_int(m)
    if j < 0 or j > J_MAX:
        raise WignerError(f"j must lie in [0, {J_MAX}], got {j}")
    for x in (mp, m):
        if abs(x) > j or (j - x).denominator != 1:
            raise WignerError(f"m = {x} is not a valid projection for j = {j}")
    return j, mp, m


def _terms(j, mp, m):
    """(coefficient, cos power, sin power) of the factorial sum."""
    j, mp, m = _check(j, mp, m)
    jp, jm, kp, km = int(j + mp), int(j - mp), int(j + m), int(j - m)
    pre = np.sqrt(float(factorial(jp) * factorial(jm) * factorial(kp) * factorial(km)))
    dm = int(mp - m)
    out = []
    for k in range(max(0, -dm), min(kp, jm) + 1):
        den = factorial(kp - k) * factorial(k) * factorial(k + dm) * factorial(jm - k)
        out.append(((-1) ** (k + dm) * pre / den, int(2 * j) - 2 * k - dm, 2 * k + dm))
    return out


def little_d(j, mp, m, theta):
    """Wigner small-d d^j_{m'm}(theta); theta may be an array."""
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    total = np.zeros_like(theta)
    for coef, pc, ps in _terms(j, mp, m):
        total = total + coef * c**pc * s**ps
    return total


def little_d_prime(j, mp, m, theta):
    """Analytic theta-derivative of d^j_{m'm}."""
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    total = np.zeros_like(theta)
    for coef, pc, ps in _terms(j, mp, m):
        if pc:
            total = total - coef * pc / 2 * c ** (pc - 1) * s ** (ps + 1)
        if ps:
            total = total + coef * ps / 2 * c ** (pc + 1) * s ** (ps - 1)
    return total


def little_d_matrix(j, theta) -> np.ndarray:
    ms = m_values(j)
    return np.array([[float(little_d(j, mp, m, theta)) for m in ms] for mp in ms])


@dataclass(frozen=True)
class WignerSpec:
    j: Fraction
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "j", half_int(self.j))
        if self.j < Fraction(1, 2) or self.j > J_MAX:
            raise WignerError(f"j must lie in [1/2, {J_MAX}]")


def big_d(spec, theta=None, phi=0.0) -> np.ndarray:
    """D^j(theta, phi); call as big_d(WignerSpec) or big_d(j, theta, phi)."""
    if not isinstance(spec, WignerSpec):
        spec = WignerSpec(spec, theta, phi)
    ms = np.array([float(x) for x in m_values(spec.j)])
    phase = np.exp(-1j * np.subtract.outer(ms, ms) * spec.phi)
    return phase * little_d_matrix(spec.j, spec.theta)


def spin_matrices(j):
    """J_+, J_-, J_z in the descending-m basis."""
    ms = [float(x) for x in m_values(j)]
    jj = float(half_int(j))
    n = len(ms)
    jp = np.zeros((n, n), dtype=complex)
    for i in range(1, n):
        jp[i - 1, i] = np.sqrt(jj * (jj + 1) - ms[i] * (ms[i] + 1))
    return jp, jp.conj().T, np.diag(ms).astype(complex)


def big_d_expm(j, theta, phi=0.0) -> np.ndarray:
    """exp(xi J_+ - xi* J_-) with xi = -(theta/2) exp(-i phi)."""
    jp, jm, _ = spin_matrices(j)
    xi = -(theta / 2) * np.exp(-1j * phi)
    return matexp(xi * jp - np.conj(xi) * jm)


def ybe_cos_phi(theta1, theta2, theta3) -> float:
    """cos(phi) from the YBE condition, in the cotangent form.

    1/2 [c1 c2 + c2 c3 - c1 c3 - 1] with c = cot(theta/2); equal to the
    tangent form wherever that is finite and finite at theta = pi.
    """
    cots = []
    for t in (theta1, theta2, theta3):
        s = np.sin(t / 2)
        if abs(s) < 1e-12:
            raise WignerError(f"theta = {t} is a pole of cot(theta/2)")
        cots.append(np.cos(t / 2) / s)
    c1, c2, c3 = cots
    return 0.5 * (c1 * c2 + c2 * c3 - c1 * c3 - 1)


def ybe_phi(theta1, theta2, theta3):
    """phi in [0, pi] solving the YBE condition, or None outside the domain."""
    c = ybe_cos_phi(theta1, theta2, theta3)
    if abs(c) > 1 + 1e-12:
        return None
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def braid_phi(theta):
    return ybe_phi(theta, theta, theta)


def ybe_products(j, theta1, theta2, theta3, phi, ordering="ABA"):
    a = lambda t: big_d(j, t, 0.0)
    b = lambda t: big_d(j, t, phi)
    if ordering == "ABA":
        return a(theta1) @ b(theta2) @ a(theta3), b(theta3) @ a(theta2) @ b(theta1)
    if ordering == "BAB":
        return b(theta1) @ a(theta2) @ b(theta3), a(theta3) @ b(theta2) @ a(theta1)
    raise WignerError("ordering must be 'ABA' or 'BAB'")


def ybe_residual(j, theta1, theta2, theta3, phi=None, ordering="ABA") -> float:
    """Frobenius norm of A(t1)B(t2,phi)A(t3) - B(t3,phi)A(t2)B(t1,phi)."""
    if phi is None:
        phi = ybe_phi(theta1, theta2, theta3)
        if phi is None:
            raise WignerError("no real phi satisfies the YBE condition for this triple")
    lhs, rhs = ybe_products(j, theta1, theta2, theta3, phi, ordering)
    return float(np.linalg.norm(lhs - rhs))


def x_to_theta(x: float) -> float:
    return float(np.arccos((1 - x) / np.sqrt(2 * (1 + x * x))))


def x_ybe_residual(j, x, y, phi=None):
    """A(x)B(xy)A(y) against B(y)A(xy)B(x); phi from the triple unless given."""
    t1, t2, t3 = x_to_theta(x), x_to_theta(x * y), x_to_theta(y)
    if phi is None:
        phi = ybe_phi(t1, t2, t3)
        if phi is None:
            raise WignerError("no real phi for this (x, y)")
    return ybe_residual(j, t1, t2, t3, phi), (t1, t2, t3), phi


# Type-I and type-II correspondences with the topological-basis matrices

R2, R6 = np.sqrt(2.0), np.sqrt(6.0)
V = np.array([[0.5, 1 / R2, 0.5], [1j / R2, 0, -1j / R2], [-0.5, 1 / R2, -0.5]])
GAUGE = np.diag([1, 1j, -1])  # T^dagger

PRINTED = {
    "A_I": -np.diag([1.0, -1, 1]),
    "B_I": -np.array([[1, 1j * R6, -3], [-1j * R6, 2, -1j * R6], [-3, 1j * R6, 1]]) / 4,
    "B'_I": -np.array([[1, -R6, 3], [-R6, 2, R6], [3, R6, 1]]) / 4,
    "A_II(D)": np.diag([-1j, 1, 1j]),
    "B_II(D)": np.array([[1, -R2, 1], [R2, 0, -R2], [1, R2, 1]]) / 2,
    "A_II": np.diag([-1j, 1, 1j]),
    "B_II": -np.array([[-0.5, 1j / R2, 0.5], [1j / R2, 0, 1j / R2], [0.5, 1j / R2, -0.5]]),
    "TBT_II": np.array([[0.5, -1 / R2, 0.5], [1 / R2, 0, -1 / R2], [0.5, 1 / R2, 0.5]]),
}
TYPE_I_PHI = -2 * np.pi / 3
TYPE_II_PHI = -np.pi / 2


def v_conj(m):
    return V.conj().T @ m @ V


def gauge_conj(m):
    return GAUGE @ m @ GAUGE.conj().T


def type_i_branch_residuals():
    """B_I against V^dag D(theta, phi) V for both signs of phi and theta."""
    out = {}
    for th in (np.pi, -np.pi):
        for ph in (2 * np.pi / 3, -2 * np.pi / 3):
            out[(th, ph)] = residual(v_conj(big_d(1, th, ph)), PRINTED["B_I"])
    return out


def projective_phase(a, target) -> complex:
    """Cube root z of det(a)^-1 for which z * spec(a) equals spec(target)."""
    base = np.linalg.det(a) ** (-1 / 3)
    want = np.sort_complex(np.round(np.linalg.eigvals(target), 12))
    for k in range(3):
        z = base * np.exp(2j * np.pi * k / 3)
        got = np.sort_complex(np.round(z * np.linalg.eigvals(a), 12))
        if np.allclose(got, want, atol=1e-9):
            return z
    raise WignerError("no cube-root rescaling maps the spectra onto each other")


def type_corr_check(kind: str, tol: Tolerance = Tolerance(1e-10, 1e-10)) -> RelationReport:
    from .params import UNITARY, from_q
    from .topo import build_rep, q1_limit_rep

    report = RelationReport()
    report.add("V_unitary", residual(V.conj().T @ V, np.eye(3)), tol)
    if kind == "I":
        d_a = v_conj(big_d(1, np.pi, 0.0))
        d_b = v_conj(big_d(1, -np.pi, TYPE_I_PHI))
        report.add("D: V^dag A(pi) V = A_I", residual(d_a, PRINTED["A_I"]), tol)
        report.add("D: V^dag B(-pi,-2pi/3) V = B_I", residual(d_b, PRINTED["B_I"]), tol)
        lim = q1_limit_rep(-3)
        a_t, b_t = -lim.a, -lim.b
        report.add("topo: A'_I", residual(a_t, PRINTED["A_I"]), tol)
        report.add("topo: B'_I", residual(b_t, PRINTED["B'_I"]), tol)
        report.add("gauge: T^dag A'_I T = A'_I", residual(gauge_conj(a_t), a_t), tol)
        report.add("gauge: T^dag B'_I T = printed", residual(gauge_conj(b_t), PRINTED["B_I"]), tol)
        report.add("identify A", residual(gauge_conj(a_t), d_a), tol)
        report.add("identify B", residual(gauge_conj(b_t), d_b), tol)
    elif kind == "II":
        d_a = v_conj(big_d(1, np.pi / 2, 0.0))
        d_b = v_conj(big_d(1, np.pi / 2, TYPE_II_PHI))
        report.add("D: V^dag A(pi/2) V", residual(d_a, PRINTED["A_II(D)"]), tol)
        report.add("D: V^dag B(pi/2,-pi/2) V", residual(d_b, PRINTED["B_II(D)"]), tol)
        rep = build_rep(from_q(np.exp(1j * np.pi / 4), -3, UNITARY))
        report.add("topo: f1 = 1/sqrt2", abs(rep.coeffs.f[0] - 1 / R2), tol)
        report.add("topo: f2 = 1/2", abs(rep.coeffs.f[1] - 0.5), tol)
        z = projective_phase(rep.a, d_a)
        a_t, b_t = z * rep.a, z * rep.b
        report.add("topo: A_II", residual(a_t, PRINTED["A_II"]), tol)
        report.add("topo: B_II", residual(b_t, PRINTED["B_II"]), tol)
        report.add("gauge: T^dag A_II T", residual(gauge_conj(a_t), PRINTED["A_II"]), tol)
        report.add("gauge: T^dag B_II T", residual(gauge_conj(b_t), PRINTED["TBT_II"]), tol)
        report.add("identify A", residual(gauge_conj(a_t), d_a), tol)
        report.add("identify B", residual(gauge_conj(b_t), d_b), tol)
    else:
        raise WignerError("type must be 'I' or 'II'")
    return report
