"""Spin-1 chain operators T and M, the Heisenberg identity, R-matrices and
the four-site periodic chain in its singlet sector.

Single-site basis order is (|1>, |0>, |-1>). Two-site states |a,b> use the
index 3*(1-a) + (1-b).
"""
from dataclasses import dataclass, field
from itertools import combinations, product
import json

import numpy as np

from .algebra import (AlgebraError, ChainOperator, Tolerance, eig_hermitian, embed_pair,
                      fix_phase, kron, residual)
from .params import RelationReport

SQ2 = np.sqrt(2.0)
TIGHT = Tolerance(1e-12, 1e-12)


class ChainError(ValueError):
    pass


@dataclass(frozen=True)
class SpinOps:
    s_plus: np.ndarray
    s_minus: np.ndarray
    s3: np.ndarray

    @property
    def sx(self):
        return (self.s_plus + self.s_minus) / 2

    @property
    def sy(self):
        return (self.s_plus - self.s_minus) / 2j


def spin_ops() -> SpinOps:
    sp = SQ2 * np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)
    return SpinOps(sp, sp.conj().T, np.diag([1, 0, -1]).astype(complex))


def ket2(a: int, b: int) -> np.ndarray:
    v = np.zeros(9, dtype=complex)
    v[3 * (1 - a) + (1 - b)] = 1
    return v


def t_matrix() -> np.ndarray:
    """Two-site exchange operator: T|a,b> = |b,a>."""
    vals = (1, 0, -1)
    return sum(np.outer(ket2(b, a), ket2(a, b)) for a in vals for b in vals)


def w_vector(phi: float = np.pi) -> np.ndarray:
    return ket2(1, -1) + ket2(-1, 1) + np.exp(1j * phi) * ket2(0, 0)


def m_matrix(phi: float = np.pi) -> np.ndarray:
    w = w_vector(phi)
    return np.outer(w, w.conj())


def spin_dot_matrix() -> np.ndarray:
    s = spin_ops()
    return kron(s.s3, s.s3) + (kron(s.s_plus, s.s_minus) + kron(s.s_minus, s.s_plus)) / 2


def _pair(k, l, n):
    if not (1 <= k < l <= n):
        raise ChainError(f"need 1 <= k < l <= n, got ({k}, {l}) on n={n}")


def t_op(k: int, l: int, n: int) -> ChainOperator:
    _pair(k, l, n)
    return embed_pair(t_matrix(), k, l, n, f"T_{{{k},{l}}}")


def m_op(k: int, l: int, n: int, phi: float = np.pi) -> ChainOperator:
    _pair(k, l, n)
    return embed_pair(m_matrix(phi), k, l, n, f"M_{{{k},{l}}}")


def h_pair(k: int, l: int, n: int, phi: float = np.pi) -> ChainOperator:
    return t_op(k, l, n) - m_op(k, l, n, phi)


def spin_dot(k: int, l: int, n: int) -> ChainOperator:
    _pair(k, l, n)
    return embed_pair(spin_dot_matrix(), k, l, n, f"S_{k}.S_{l}")


def heisenberg_check(n: int, phi: float = np.pi, tol: Tolerance = TIGHT) -> RelationReport:
    """T_kl - M_kl(phi) against S_k.S_l for every pair of an n-site chain."""
    if n < 2:
        raise ChainError("need at least two sites")
    report = RelationReport()
    for k, l in combinations(range(1, n + 1), 2):
        report.add(f"T-M=S.S_{k},{l}", residual(h_pair(k, l, n, phi).matrix, spin_dot(k, l, n).matrix), tol)
    return report


# Multiplicative Yang-Baxterization of the 3x3 representation

def x_roots(rep):
    """x_a = -q/sigma and x_b = 1/(q sigma) for lambda1 = q."""
    q, s = rep.params.lambda1, rep.params.sigma
    return {"a": -q / s, "b": 1 / (q * s)}


def r_check_matrix(x: complex, alpha: str, rep, generator: str = "A") -> np.ndarray:
    """R(x) = (x-1)(x-x_alpha) S + W x (x-1) E - W x (x-x_alpha) I."""
    if alpha not in ("a", "b"):
        raise ChainError("alpha must be 'a' or 'b'")
    s, e = (rep.a, rep.e_a) if generator == "A" else (rep.b, rep.e_b)
    xa = x_roots(rep)[alpha]
    w = rep.params.w
    return (x - 1) * (x - xa) * s + w * x * (x - 1) * e - w * x * (x - xa) * np.eye(3)


def r_check_normalized_b(x: complex, rep, generator: str = "A") -> np.ndarray:
    """Type-b form const * {I - (x-1)/(W x) S - (x-1)/(x-x_b) E}, const = -W x (x - x_b)."""
    s, e = (rep.a, rep.e_a) if generator == "A" else (rep.b, rep.e_b)
    xb = x_roots(rep)["b"]
    w = rep.params.w
    inner = np.eye(3) - (x - 1) / (w * x) * s - (x - 1) / (x - xb) * e
    return -w * x * (x - xb) * inner


def spectral_ybe_residual(x: complex, y: complex, alpha: str, rep) -> float:
    ra = lambda z: r_check_matrix(z, alpha, rep, "A")
    rb = lambda z: r_check_matrix(z, alpha, rep, "B")
    return residual(ra(x) @ rb(x * y) @ ra(y), rb(y) @ ra(x * y) @ rb(x))


# Rational limit

def beta_from_m(m: int) -> float:
    return (m + 1) / 2


def rational_r(u: float, beta: float, t=None, m_mat=None) -> np.ndarray:
    """R(u) = I + u T - u/(u - beta) M on two spin-1 sites."""
    if abs(u - beta) < 1e-14:
        raise ChainError(f"pole of the rational R-matrix at u = beta = {beta}")
    t = t_matrix() if t is None else np.asarray(t, dtype=complex)
    m_mat = m_matrix(np.pi) if m_mat is None else np.asarray(m_mat, dtype=complex)
    return np.eye(t.shape[0]) + u * t - u / (u - beta) * m_mat


def rational_derivative(beta: float, t=None, m_mat=None) -> np.ndarray:
    t = t_matrix() if t is None else t
    m_mat = m_matrix(np.pi) if m_mat is None else m_mat
    return t + m_mat / beta


def rational_ybe_residual(u: float, v: float, beta: float) -> float:
    """R12(u) R23(u+v) R12(v) against R23(v) R12(u+v) R23(u) on 27 dimensions."""
    eye = np.eye(3)
    r12 = lambda z: kron(rational_r(z, beta), eye)
    r23 = lambda z: kron(eye, rational_r(z, beta))
    return residual(r12(u) @ r23(u + v) @ r12(v), r23(v) @ r12(u + v) @ r23(u))


# Chains

def chain_bonds(n: int):
    bonds = [(k, k + 1) for k in range(1, n)]
    if n > 2:
        bonds.append((1, n))
    return bonds


def build_hamiltonian(n: int = 4, J: float = 1.0, phi: float = np.pi) -> ChainOperator:
    """Periodic H = J sum_k (T_{k,k+1} - M_{k,k+1})."""
    if n < 2:
        raise ChainError("need at least two sites")
    mat = sum(h_pair(k, l, n, phi).matrix for k, l in chain_bonds(n))
    return ChainOperator(n, J * mat, f"H(n={n}, J={J})")


def total_spin_sq(n: int, phi: float = np.pi) -> ChainOperator:
    """S^2 = 2N + 2 sum_{i<j} (T_ij - M_ij)."""
    mat = 2 * n * np.eye(3**n) + 2 * sum(h_pair(k, l, n, phi).matrix
                                         for k, l in combinations(range(1, n + 1), 2))
    return ChainOperator(n, mat, "S^2")


def total_sz(n: int) -> ChainOperator:
    s3 = spin_ops().s3
    mat = sum(np.kron(np.kron(np.eye(3**k), s3), np.eye(3 ** (n - k - 1))) for k in range(n))
    return ChainOperator(n, mat, "S_z")


@dataclass
class ChainSpectrum:
    eigenvalues: np.ndarray
    singlet_eigenvalues: np.ndarray
    singlet_vectors: np.ndarray
    mu_values: np.ndarray  # eigenvalue of T13 - M13 (= T24 - M24) on each |g_k>
    mu_sum_values: np.ndarray  # eigenvalue of the sum over both next-nearest pairs
    s2_norms: np.ndarray
    pair_symmetry: np.ndarray  # |(T13-M13)g - (T24-M24)g|
    eq66_values: np.ndarray  # 2(4 + E_k/J + 2 mu_k)
    J: float = 1.0
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {"J": self.J, "eigenvalues": self.eigenvalues.tolist(),
                "singlet_eigenvalues": self.singlet_eigenvalues.tolist(),
                "mu_values": self.mu_values.tolist(),
                "mu_sum_values": self.mu_sum_values.tolist(),
                "s2_norms": self.s2_norms.tolist(),
                "pair_symmetry": self.pair_symmetry.tolist(),
                "eq66_values": self.eq66_values.tolist()}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def singlet_basis(n: int = 4, phi: float = np.pi, tol: float = 1e-9) -> np.ndarray:
    vals, vecs = eig_hermitian(total_spin_sq(n, phi).matrix)
    return vecs[:, np.abs(vals) < tol]


def singlet_spectrum(h: ChainOperator, J: float = 1.0, phi: float = np.pi) -> ChainSpectrum:
    n = h.n_sites
    if n != 4:
        raise ChainError("the singlet analysis is defined for the four-site chain")
    eigenvalues, _ = eig_hermitian(h.matrix)
    basis = singlet_basis(n, phi)
    if basis.shape[1] != 3:
        raise ChainError(f"singlet sector has dimension {basis.shape[1]}, expected 3")
    hs = basis.conj().T @ h.matrix @ basis
    evals, u = eig_hermitian((hs + hs.conj().T) / 2)
    g = fix_phase(basis @ u)
    x13 = h_pair(1, 3, n, phi).matrix
    x24 = h_pair(2, 4, n, phi).matrix
    s2 = total_spin_sq(n, phi).matrix
    mu = np.real(np.einsum("ik,ij,jk->k", g.conj(), x13, g))
    mu_sum = np.real(np.einsum("ik,ij,jk->k", g.conj(), x13 + x24, g))
    s2n = np.linalg.norm(s2 @ g, axis=0)
    sym = np.linalg.norm(x13 @ g - x24 @ g, axis=0)
    eq66 = 2 * (4 + evals / J + 2 * mu)
    mu_res = np.linalg.norm(x13 @ g - g * mu, axis=0)
    return ChainSpectrum(eigenvalues, evals, g, mu, mu_sum, s2n, sym, eq66, J,
                         {"mu_eigen_residual": mu_res.tolist()})


# Topological basis at q = 1 realized on four spin-1 sites

def pairing_vector(pairs, phi: float = np.pi) -> np.ndarray:
    """Cup diagram on four sites: product of |w> over the listed site pairs."""
    w = w_vector(phi)
    v = np.zeros(81, dtype=complex)
    for idx, ms in enumerate(product((1, 0, -1), repeat=4)):
        amp = 1
        for a, b in pairs:
            amp *= w[3 * (1 - ms[a - 1]) + (1 - ms[b - 1])]
        v[idx] = amp
    return v


def diagram_vectors_q1():
    """(tcross, Uu, tsep) as 81-vectors."""
    return (pairing_vector([(1, 3), (2, 4)]), pairing_vector([(1, 4), (2, 3)]),
            pairing_vector([(1, 2), (3, 4)]))


def topo_vectors_q1(d: float = 3.0) -> np.ndarray:
    """Columns |e1>, |e2>, |e3> in the 81-dimensional space.

    |e3> = tsep / d. |e1>, |e2> span the rest of the singlet sector and are
    the +1 / -1 eigenvectors of T_12. Phases: <tcross|e_i> real positive
    (the tsep overlap cannot fix them, both are orthogonal to tsep).
    """
    tcross, _, tsep = diagram_vectors_q1()
    e3 = tsep / d
    basis = singlet_basis(4)
    e3u = e3 / np.linalg.norm(e3)
    rest = basis - np.outer(e3u, e3u.conj() @ basis)
    q, r = np.linalg.qr(rest)
    q = q[:, np.abs(np.diag(r)) > 1e-9]
    if q.shape[1] != 2:
        raise ChainError("complement of |e3> in the singlet sector is not 2-dimensional")
    t12 = t_op(1, 2, 4).matrix
    vals, u = np.linalg.eigh(q.conj().T @ t12 @ q)
    order = np.argsort(-vals)  # +1 first
    cols = []
    for k in order:
        v = q @ u[:, k]
        ov = tcross.conj() @ v
        cols.append(v * abs(ov) / ov)
    cols.append(e3)
    return np.array(cols).T


def project(op, vecs) -> np.ndarray:
    """Matrix with entries <e_mu|Op|e_nu> (column nu is Op|e_nu>)."""
    op = op.matrix if isinstance(op, ChainOperator) else op
    return vecs.conj().T @ op @ vecs


def _reference_tables():
    r3, r5, r15 = np.sqrt(3), np.sqrt(5), np.sqrt(15)
    t23 = np.array([[1, -r15, 2 * r5], [-r15, 3, 2 * r3], [2 * r5, 2 * r3, 2]]) / 6
    m23 = np.array([[5, -r15, r5], [-r15, 3, -r3], [r5, -r3, 1]]) / 3
    h = np.array([[-3, r15, 0], [r15, -9, 4 * r3], [0, 4 * r3, -12]]) / 3
    g = np.array([np.array([1, -r15, 2 * r15]) / np.sqrt(6),
                  np.array([r5, -r3, -2]) / (2 * r3),
                  np.array([r5, r3, 1]) / 3])
    return {"T12": np.diag([1.0, -1, 1]), "T34": np.diag([1.0, -1, 1]),
            "M12": np.diag([0.0, 0, 3]), "M34": np.diag([0.0, 0, 3]),
            "T23": t23, "T14": t23, "T34(alias)": t23, "M23": m23, "M14": m23, "H/J": h, "g": g}


def appendix_d_report(J: float = 1.0):
    """Compare computed <e_mu|Op|e_nu> with the printed coefficient tables.

    Rows are {"entry", "computed", "paper", "abs_diff"}; mismatches are data.
    Column nu of each table is the expansion of Op|e_nu>.
    """
    e = topo_vectors_q1()
    ref = _reference_tables()
    ops = {"T12": t_op(1, 2, 4), "T34": t_op(3, 4, 4), "M12": m_op(1, 2, 4),
           "M34": m_op(3, 4, 4), "T23": t_op(2, 3, 4), "T14": t_op(1, 4, 4), "T34(alias)": t_op(3, 4, 4),
           "M23": m_op(2, 3, 4), "M14": m_op(1, 4, 4),
           "H/J": build_hamiltonian(4, 1.0)}
    rows = []

    def add(entry, computed, printed):
        computed = complex(computed)
        val = computed.real if abs(computed.imag) < 1e-13 else [computed.real, computed.imag]
        rows.append({"entry": entry, "computed": val, "paper": float(printed),
                     "abs_diff": abs(computed - printed)})

    for name, op in ops.items():
        mat = project(op, e)
        for mu in range(3):
            for nu in range(3):
                add(f"<e{mu + 1}|{name}|e{nu + 1}>", mat[mu, nu], ref[name][mu, nu])
    mat = project(build_hamiltonian(4, J), e)
    evals, u = np.linalg.eigh(mat)
    for k, printed in enumerate((-6.0, -2.0, 0.0)):
        add(f"E{k + 1}", evals[k], printed * J)
    for k in range(3):
        vec = u[:, k] * np.sign((u[:, k] @ ref["g"][k]).real or 1.0)
        for mu in range(3):
            add(f"<e{mu + 1}|g{k + 1}>", vec[mu], ref["g"][k][mu])
    r3 = np.sqrt(3)
    tcross, uu, tsep = diagram_vectors_q1()
    gram = np.array([tcross, uu, tsep]).conj() @ np.array([tcross, uu, tsep]).T
    coeffs = {"f1": (1 / np.sqrt(20), 1 / (2 * r3)), "f2": (1 / (2 * r3), 1 / (2 * r3)),
              "beta1": (-2 / 3, -2 / 3), "beta2": (0.0, 0.0), "d": (gram[2, 1].real, 3.0)}
    for name, (computed, printed) in coeffs.items():
        add(name, computed, printed)
    return rows


def report_mismatches(rows, tol: float = 1e-9):
    return [r for r in rows if r["abs_diff"] > tol]
