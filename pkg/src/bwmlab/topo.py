"""Topological basis on four strands and the 3x3 matrices A, B, E_A, E_B.

Diagrams are ordered (tcross, Uu, tsep) throughout. The basis vectors are
|e_i> = f_i (tcross + alpha_i Uu + beta_i tsep) for i = 1, 2 and
|e_3> = tsep / d.
"""
from dataclasses import dataclass
import json

import numpy as np

from .algebra import DEFAULT_TOL, Tolerance, residual
from .params import (HERMITIAN, UNITARY, BwmaParams, RelationReport, check_bwma,
                     from_q, limit_params)

RICHARDSON_STEPS = (1e-4, 5e-5, 2.5e-5)
TYPE_I_GAUGE = np.diag([1, 1j, -1])  # T^dagger of the type-I/II correspondence


class TopoBasisError(ValueError):
    pass


@dataclass(frozen=True)
class TopoCoeffs:
    alpha: tuple
    beta: tuple
    f: tuple
    gram: np.ndarray
    norms: tuple  # N_i = c_i^dagger G c_i before normalization

    def vectors(self, d) -> np.ndarray:
        """Normalized coefficient vectors as columns (e1, e2, e3)."""
        cols = [self.f[i] * np.array([1, self.alpha[i], self.beta[i]]) for i in range(2)]
        cols.append(np.array([0, 0, 1 / d]))
        return np.array(cols, dtype=complex).T


@dataclass(frozen=True)
class TopoRep:
    a: np.ndarray
    b: np.ndarray
    e_a: np.ndarray
    e_b: np.ndarray
    params: BwmaParams
    coeffs: TopoCoeffs | None
    report: RelationReport

    def matrices(self):
        return self.a, self.b, self.e_a, self.e_b

    def to_dict(self):
        def cm(x):
            return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(x, complex)]

        return {"A": cm(self.a), "B": cm(self.b), "E_A": cm(self.e_a), "E_B": cm(self.e_b),
                "params": self.params.to_dict(), "report": self.report.to_dict()}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def gram_matrix(p: BwmaParams) -> np.ndarray:
    """Pairings <x|y> of the diagrams (tcross, Uu, tsep); rows are bras."""
    d, s, w = p.d, p.sigma, p.w
    if p.case == HERMITIAN:
        g = [[d * ((1 / s - s) * w + d), s * d, d / s],
             [s * d, d * d, d],
             [d / s, d, d * d]]
    else:
        g = [[d * d, d / s, s * d],
             [s * d, d * d, d],
             [d / s, d, d * d]]
    return np.array(g, dtype=complex)


def normalizer_bracket(p: BwmaParams, lam: complex) -> complex:
    """N(lambda) = (lambda + 1/lambda)(sigma d + lambda d^2 - 1/sigma - lambda)."""
    d, s = p.d, p.sigma
    return (lam + 1 / lam) * (s * d + lam * d * d - 1 / s - lam)


def topo_coeffs(p: BwmaParams, tol: Tolerance = DEFAULT_TOL) -> TopoCoeffs:
    d, s = p.d, p.sigma
    if abs(d) < 1e-12:
        raise TopoBasisError("loop value d vanishes; |e_3> = tsep/d is undefined")
    lams = (p.lambda1, p.lambda2)
    if any(abs(lam * lam + 1) < 1e-12 for lam in lams):
        raise TopoBasisError("lambda_i^2 + 1 = 0 makes the normalizer vanish")
    gram = gram_matrix(p)
    alpha = lams
    beta = tuple(-(1 / s + lam) / d for lam in lams)
    norms, fs = [], []
    for lam, a, b in zip(lams, alpha, beta):
        c = np.array([1, a, b], dtype=complex)
        n = complex(c.conj() @ gram @ c)
        norms.append(n)
        scale = max(1.0, abs(d) ** 2)
        if abs(n.imag) > 1e-9 * scale or n.real <= 1e-12 * scale:
            raise TopoBasisError(
                f"normalizer for lambda_i = {lam:.6g} is {n:.6g}; no positive f_i exists")
        fs.append(n.real ** -0.5)
    coeffs = TopoCoeffs(alpha, beta, tuple(fs), gram, tuple(norms))
    v = coeffs.vectors(d)
    overlap = v.conj().T @ gram @ v
    if residual(overlap, np.eye(3)) > tol.threshold:
        raise TopoBasisError(f"basis is not uni-orthogonal (residual {residual(overlap, np.eye(3)):.3g})")
    return coeffs


def printed_normalizers(p: BwmaParams):
    """The two printed closed forms (hermitian and unitary) for f_i, exponent +1/2."""
    d, s = p.d, p.sigma
    out = {}
    for i, lam in enumerate((p.lambda1, p.lambda2), start=1):
        herm = d * (lam**2 + 1) * (-(1 / s + lam) / (lam * d) + s / lam + d)
        uni = (d - 1) * (lam + 1 / lam) * (s + lam * d + 1 / lam)
        out[i] = {"hermitian_bracket": complex(herm), "unitary_bracket": complex(uni)}
    return out


def normalizer_discrepancy(p: BwmaParams):
    """Compare the printed f_i forms with the Gram-normalized f_i."""
    coeffs = topo_coeffs(p)
    rows = []
    for i, forms in printed_normalizers(p).items():
        for name, bracket in forms.items():
            f_gram = coeffs.f[i - 1]
            rows.append({"i": i, "form": name,
                         "bracket": [bracket.real, bracket.imag],
                         "gram_norm": [coeffs.norms[i - 1].real, coeffs.norms[i - 1].imag],
                         "f_gram": f_gram,
                         "f_printed_plus_half": complex(bracket) ** 0.5,
                         "abs_diff_plus_half": abs(complex(bracket) ** 0.5 - f_gram),
                         "abs_diff_minus_half": abs(complex(bracket) ** -0.5 - f_gram)})
    return rows


def _hermitian_matrices(p: BwmaParams, f1, f2):
    l1, l3, d = p.lambda1, p.sigma, p.d
    c = l1 + 1 / l1
    a = np.diag([l1, -1 / l1, l3]).astype(complex)
    e_a = np.diag([0, 0, d]).astype(complex)
    e_b = np.array([[f1**-2 / c, -1 / (f1 * f2 * c), 1 / f1],
                    [-1 / (f1 * f2 * c), f2**-2 / c, -1 / f2],
                    [1 / f1, -1 / f2, c]]) / (d * c)
    x = (1 - l3 / l1 - l1 * l3 * d) * f2 / f1
    b = np.array([[(l3 * (d - 1) - 1 / l1) / l1, x, 1 / (l1 * f1)],
                  [x, l1 * (l3 * (d - 1) + l1), l1 / f2],
                  [1 / (l1 * f1), l1 / f2, c / l3]]) / (d * c)
    return a, b, e_a, e_b


def _unitary_matrices(p: BwmaParams, f1, f2):
    l1, l3, d = p.lambda1, p.sigma, p.d
    c = l1 + 1 / l1
    f1c, f2c = np.conj(f1), np.conj(f2)
    a = np.diag([l1, -1 / l1, l3]).astype(complex)
    e_a = np.diag([0, 0, d]).astype(complex)
    e_b = np.array([[abs(f1) ** -2 * c**-2, -(c**-2) / (f1 * f2c), 1 / (c * f1)],
                    [-(c**-2) / (f1c * f2), c**-2 * abs(f2) ** -2, -1 / (c * f2)],
                    [1 / (c * f1c), -1 / (c * f2c), 1]]) / d
    b = np.array([[(l3 * (d - 1) - 1 / l1) / l1, (1 - l3 / l1 - l1 * l3 * d) * f2 / f1, 1 / (l1 * f1)],
                  [-(1 + l1 * l3 + l3 * d / l1) * f1 / f2, l1 * (l3 * (d - 1) + l1), l1 / f2],
                  [1 / (l1 * f1c), l1 / f2c, c / l3]]) / (d * c)
    return a, b, e_a, e_b


def build_rep(p: BwmaParams, tol: Tolerance = DEFAULT_TOL, gate: bool = True) -> TopoRep:
    """Explicit 3x3 representation; raises if the relation suite fails."""
    # uni-orthogonality is a precondition, checked at the default tolerance
    coeffs = topo_coeffs(p)
    f1, f2 = coeffs.f
    build = _hermitian_matrices if p.case == HERMITIAN else _unitary_matrices
    a, b, e_a, e_b = build(p, f1, f2)
    report = check_bwma(a, b, e_a, e_b, p, tol)
    if gate and not report.overall_pass:
        worst = max(report.entries, key=lambda e: e.residual)
        raise TopoBasisError(f"relation suite failed ({worst.id}: {worst.residual:.3g})")
    return TopoRep(a, b, e_a, e_b, p, coeffs, report)


def standard_matrices(q: float):
    """Closed forms of E_B and B for lambda1 = q, sigma = q^-2."""
    p = from_q(q, -2)
    d = p.d.real
    r = np.sqrt(d * d - d - 1)
    sd = np.sqrt(d)
    e_b = np.array([[(d * d - d - 1) / d, -r / sd, r / d],
                    [-r / sd, 1, -1 / sd],
                    [r / d, -1 / sd, 1 / d]])
    b = np.array([[q**-4 / (d * (d - 1)), -(q**-2) * r / (sd * (d - 1)), r / (d * q)],
                  [-(q**-2) * r / (sd * (d - 1)), (d - 2) / (d - 1), q / sd],
                  [r / (d * q), q / sd, q * q / d]])
    return b.astype(complex), e_b.astype(complex)


def _check_gauge(gauge):
    g = np.asarray(gauge, dtype=complex)
    if g.shape != (3, 3) or np.linalg.norm(g - np.diag(np.diag(g))) > 1e-12:
        raise TopoBasisError("gauge must be a 3x3 diagonal matrix")
    if np.max(np.abs(np.abs(np.diag(g)) - 1)) > 1e-12:
        raise TopoBasisError("gauge must be unitary")
    return g


def standardize(rep: TopoRep, gauge, tol: Tolerance = DEFAULT_TOL) -> TopoRep:
    """Conjugate all four matrices by a diagonal unitary: X -> g X g^dagger."""
    g = _check_gauge(gauge)
    gh = g.conj().T
    mats = [g @ x @ gh for x in rep.matrices()]
    report = check_bwma(*mats, rep.params, tol)
    if not report.overall_pass:
        raise TopoBasisError("gauge transformation broke the relation suite")
    return TopoRep(*mats, rep.params, rep.coeffs, report)


def scale_rep(rep: TopoRep, phase: complex) -> list:
    """Projective rescaling of the braid generators (E's unchanged)."""
    return [phase * rep.a, phase * rep.b, rep.e_a, rep.e_b]


def _richardson(values, steps):
    """Extrapolate values(eps) to eps = 0 assuming a power series in eps."""
    table = [list(values)]
    for level in range(1, len(values)):
        prev = table[-1]
        row = []
        for k in range(len(prev) - 1):
            ratio = steps[k] / steps[k + level]
            row.append((ratio * prev[k + 1] - prev[k]) / (ratio - 1))
        table.append(row)
    return table


def q1_limit_rep(m_power: int, steps=RICHARDSON_STEPS, limit_tol: float = 1e-8,
                 tol: Tolerance = DEFAULT_TOL) -> TopoRep:
    """Hermitian representation in the limit q -> 1 with sigma = q^m.

    Evaluated along q = 1 + eps and Richardson-extrapolated to eps = 0.
    """
    samples = []
    for eps in steps:
        try:
            p = from_q(1 + eps, m_power, HERMITIAN)
        except ValueError as exc:
            raise TopoBasisError(f"q -> 1 limit undefined for m={m_power}: {exc}") from exc
        samples.append(np.array(build_rep(p, tol, gate=False).matrices()))
    table = _richardson(samples, steps)
    best = table[-1][0]
    spread = float(np.max(np.abs(table[-2][-1] - best)))
    if not np.all(np.isfinite(best)) or spread > limit_tol:
        raise TopoBasisError(f"q -> 1 limit for m={m_power} did not settle (spread {spread:.3g})")
    a, b, e_a, e_b = best
    p = limit_params(1.0, 1.0, e_a[2, 2].real, HERMITIAN, m_power)
    report = check_bwma(a, b, e_a, e_b, p, tol)
    report.add("limit_spread", spread, Tolerance(limit_tol, limit_tol))
    if not report.overall_pass:
        raise TopoBasisError("limit representation fails the relation suite")
    return TopoRep(a, b, e_a, e_b, p, None, report)


def m_domain_survey(q_values=(0.7, 1.2, 1.5), m_values=range(-6, 5), case=HERMITIAN,
                    tol: Tolerance = DEFAULT_TOL):
    """Record, per m, whether the closed forms satisfy the full relation list."""
    rows = []
    for m in m_values:
        for q in q_values:
            row = {"m": m, "q": [complex(q).real, complex(q).imag]}
            try:
                rep = build_rep(from_q(q, m, case), tol, gate=False)
                row.update(status="built", overall_pass=rep.report.overall_pass,
                           max_residual=rep.report.max_residual)
            except (TopoBasisError, ValueError, ZeroDivisionError) as exc:
                row.update(status="rejected", overall_pass=False, reason=str(exc))
            rows.append(row)
    return rows
