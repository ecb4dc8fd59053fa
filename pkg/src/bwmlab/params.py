"""BWM algebra parameters, the skein construction of E, and the relation suite."""
from dataclasses import dataclass, field
import json

import numpy as np

from .algebra import DEFAULT_TOL, Tolerance, as_cmatrix, residual

HERMITIAN = "hermitian"
UNITARY = "unitary"
CASES = (HERMITIAN, UNITARY)


class ParamsError(ValueError):
    pass


@dataclass(frozen=True)
class BwmaParams:
    """Eigenvalue data (lambda1, -1/lambda1, sigma) and derived W and d.

    `limit` marks parameter sets produced at q -> +-1 where W vanishes and
    d cannot be derived from the eigenvalues; d is then supplied directly.
    """

    lambda1: complex
    sigma: complex
    case: str
    d: complex
    q: complex | None = None
    m_power: int | None = None
    limit: bool = False

    @property
    def lambda2(self) -> complex:
        return -1 / self.lambda1

    @property
    def w(self) -> complex:
        return self.lambda1 + self.lambda2

    @property
    def eigenvalues(self):
        return (self.lambda1, self.lambda2, self.sigma)

    def to_dict(self):
        def pair(z):
            return None if z is None else [float(np.real(z)), float(np.imag(z))]

        return {"lambda1": pair(self.lambda1), "lambda2": pair(self.lambda2),
                "sigma": pair(self.sigma), "w": pair(self.w), "d": pair(self.d),
                "case": self.case, "q": pair(self.q), "m_power": self.m_power,
                "limit": self.limit}


def _check_case(lambda1, sigma, case):
    if case not in CASES:
        raise ParamsError(f"case must be one of {CASES}, got {case!r}")
    if lambda1 == 0 or sigma == 0:
        raise ParamsError("lambda1 and sigma must be nonzero")
    if case == UNITARY and (abs(abs(lambda1) - 1) > 1e-12 or abs(abs(sigma) - 1) > 1e-12):
        raise ParamsError("unitary case needs |lambda1| = |sigma| = 1")
    if case == HERMITIAN and (abs(np.imag(lambda1)) > 1e-12 or abs(np.imag(sigma)) > 1e-12):
        raise ParamsError("hermitian case needs real lambda1 and sigma")


def _check_w(lambda1):
    w = lambda1 - 1 / lambda1
    if abs(w) < 1e-12 * max(1.0, abs(lambda1)):
        raise ParamsError(
            f"W = lambda1 - 1/lambda1 vanishes at lambda1 = {lambda1}; the loop value is "
            "undefined here. Use topo.q1_limit_rep (Richardson limit q -> 1) or the "
            "spin_chain q = 1 operators instead.")
    return w


def make_params(lambda1: complex, sigma: complex, case: str = HERMITIAN) -> BwmaParams:
    lambda1, sigma = complex(lambda1), complex(sigma)
    _check_case(lambda1, sigma, case)
    w = _check_w(lambda1)
    d = 1 + (1 / sigma - sigma) / w
    return BwmaParams(lambda1, sigma, case, d)


def q_integer(q: complex, m: int) -> complex:
    """[m]_q = (q^m - q^-m)/(q - q^-1), summed as a Laurent polynomial."""
    if m == 0:
        return 0j
    n = abs(m)
    total = sum(q ** (n - 1 - 2 * k) for k in range(n))
    return total if m > 0 else -total


def from_q(q: complex, m: int, case: str | None = None) -> BwmaParams:
    """Parameters lambda1 = q, sigma = q^m with d = 1 - [m]_q."""
    q = complex(q)
    if case is None:
        case = UNITARY if abs(abs(q) - 1) < 1e-12 and abs(q.imag) > 1e-12 else HERMITIAN
    sigma = q ** int(m)
    _check_case(q, sigma, case)
    _check_w(q)
    d = 1 - q_integer(q, int(m))
    return BwmaParams(q, sigma, case, d, q=q, m_power=int(m))


def standard_params(q: complex, case: str | None = None) -> BwmaParams:
    return from_q(q, -2, case)


def limit_params(lambda1: complex, sigma: complex, d: complex, case: str = HERMITIAN,
                 m_power: int | None = None) -> BwmaParams:
    """Parameters at a degenerate point (W = 0) with the loop value given."""
    return BwmaParams(complex(lambda1), complex(sigma), case, complex(d),
                      q=complex(lambda1), m_power=m_power, limit=True)


def e_from_s(s, p: BwmaParams) -> np.ndarray:
    """E = (sigma W)^-1 (I + W S - S^2)."""
    s = as_cmatrix(s)
    if s.shape[0] != s.shape[1]:
        raise ParamsError("S must be square")
    if abs(np.linalg.det(s)) < 1e-14:
        raise ParamsError("S is not invertible")
    if p.limit:
        raise ParamsError("E cannot be derived from S when W = 0")
    eye = np.eye(s.shape[0])
    return (eye + p.w * s - s @ s) / (p.sigma * p.w)


@dataclass
class RelationEntry:
    id: str
    residual: float
    passed: bool


@dataclass
class RelationReport:
    entries: list = field(default_factory=list)

    @property
    def overall_pass(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def max_residual(self) -> float:
        return max((e.residual for e in self.entries), default=0.0)

    def add(self, rid: str, value: float, tol: Tolerance = DEFAULT_TOL):
        self.entries.append(RelationEntry(rid, float(value), tol.accepts(value)))
        return self

    def extend(self, other: "RelationReport", prefix: str = ""):
        for e in other.entries:
            self.entries.append(RelationEntry(prefix + e.id, e.residual, e.passed))
        return self

    def failed(self):
        return [e for e in self.entries if not e.passed]

    def to_dict(self):
        return {"relations": [{"id": e.id, "residual": e.residual, "pass": e.passed}
                              for e in self.entries],
                "overall_pass": self.overall_pass}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def bwma_relations(s1, s2, e1, e2, p: BwmaParams):
    """Yield (relation_id, lhs, rhs) for the full relation list."""
    eye = np.eye(s1.shape[0])
    i1, i2 = np.linalg.inv(s1), np.linalg.inv(s2)
    d, sig, w = p.d, p.sigma, p.w
    yield "braid", s1 @ s2 @ s1, s2 @ s1 @ s2
    yield "tl_E1E2E1=E1", e1 @ e2 @ e1, e1
    yield "tl_E2E1E2=E2", e2 @ e1 @ e2, e2
    yield "loop_E1^2=dE1", e1 @ e1, d * e1
    yield "loop_E2^2=dE2", e2 @ e2, d * e2
    yield "twist_S1E1=sE1", s1 @ e1, sig * e1
    yield "twist_E1S1=sE1", e1 @ s1, sig * e1
    yield "twist_S2E2=sE2", s2 @ e2, sig * e2
    yield "twist_E2S2=sE2", e2 @ s2, sig * e2
    yield "skein_1", s1 - i1, w * (eye - e1)
    yield "skein_2", s2 - i2, w * (eye - e2)
    yield "slide_E1S2S1=S2S1E2", e1 @ s2 @ s1, s2 @ s1 @ e2
    yield "slide_E2S1S2=S1S2E1", e2 @ s1 @ s2, s1 @ s2 @ e1
    yield "slide_E1S2S1=E1E2", e1 @ s2 @ s1, e1 @ e2
    yield "slide_S2S1E2=E1E2", s2 @ s1 @ e2, e1 @ e2
    yield "slide_E2S1S2=E2E1", e2 @ s1 @ s2, e2 @ e1
    yield "slide_S1S2E1=E2E1", s1 @ s2 @ e1, e2 @ e1
    yield "conj_S2E1S2=S1iE2S1i", s2 @ e1 @ s2, i1 @ e2 @ i1
    yield "conj_S1E2S1=S2iE1S2i", s1 @ e2 @ s1, i2 @ e1 @ i2
    yield "pull_S1E2E1=S2iE1", s1 @ e2 @ e1, i2 @ e1
    yield "pull_S2E1E2=S1iE2", s2 @ e1 @ e2, i1 @ e2
    yield "pull_E1E2S1=E1S2i", e1 @ e2 @ s1, e1 @ i2
    yield "pull_E2E1S2=E2S1i", e2 @ e1 @ s2, e2 @ i1
    yield "dep_E1S2E1=siE1", e1 @ s2 @ e1, e1 / sig
    yield "dep_E2S1E2=siE2", e2 @ s1 @ e2, e2 / sig
    yield "dep_E1S2iE1=sE1", e1 @ i2 @ e1, sig * e1
    yield "dep_E2S1iE2=sE2", e2 @ i1 @ e2, sig * e2


def check_bwma(s12, s23, e12, e23, p: BwmaParams, tol: Tolerance = DEFAULT_TOL) -> RelationReport:
    mats = [as_cmatrix(x) for x in (s12, s23, e12, e23)]
    n = mats[0].shape[0]
    if any(x.shape != (n, n) for x in mats):
        raise ParamsError("check_bwma needs four square matrices of equal size")
    report = RelationReport()
    for rid, lhs, rhs in bwma_relations(*mats, p):
        report.add(rid, residual(lhs, rhs), tol)
    return report
