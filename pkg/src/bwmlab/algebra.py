"""Dense complex linear algebra helpers shared by the other modules."""
from dataclasses import dataclass

import numpy as np


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Tolerance:
    abs: float = 1e-10
    rel: float = 1e-9

    def __post_init__(self):
        if self.abs < 0 or self.rel < 0 or (self.abs == 0 and self.rel == 0):
            raise AlgebraError("tolerance needs abs > 0 or rel > 0")

    @property
    def threshold(self) -> float:
        # residuals are already relative, so take the looser of the two
        return max(self.abs, self.rel)

    def accepts(self, residual_value: float) -> bool:
        return bool(residual_value < self.threshold)


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class ChainOperator:
    n_sites: int
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        if self.matrix.shape != (3**self.n_sites, 3**self.n_sites):
            raise AlgebraError(f"{self.label}: dimension must be 3^{self.n_sites}")

    def __add__(self, other):
        return ChainOperator(self.n_sites, self.matrix + other.matrix, f"{self.label}+{other.label}")

    def __sub__(self, other):
        return ChainOperator(self.n_sites, self.matrix - other.matrix, f"{self.label}-{other.label}")

    def scaled(self, c, label=None):
        return ChainOperator(self.n_sites, c * self.matrix, label or f"{c}*{self.label}")


def as_cmatrix(a) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    if a.ndim != 2:
        raise AlgebraError("expected a 2-d matrix")
    if not np.all(np.isfinite(a)):
        raise AlgebraError("matrix has non-finite entries")
    return a


def kron(a, b) -> np.ndarray:
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def embed_pair(op, k: int, l: int, n: int, label: str = "") -> ChainOperator:
    """Place a two-site spin-1 operator on sites (k, l) of an n-site chain.

    Sites are 1-based. For non-adjacent pairs the operator is embedded on
    the first two factors and the tensor axes are permuted into place.
    """
    op = as_cmatrix(op)
    if op.shape != (9, 9):
        raise AlgebraError("pair operator must be 9x9")
    if not (1 <= k < l <= n):
        raise AlgebraError(f"need 1 <= k < l <= n, got k={k}, l={l}, n={n}")
    full = np.kron(op, np.eye(3 ** (n - 2))).reshape((3,) * (2 * n))
    # axis order of `full`: rows (s1..sn), cols (s1..sn) with op on s1, s2
    rest = [s for s in range(n) if s not in (k - 1, l - 1)]
    src_order = [k - 1, l - 1] + rest  # site held by each axis of `full`
    perm = np.argsort(src_order)
    axes = list(perm) + [n + p for p in perm]
    mat = full.transpose(axes).reshape(3**n, 3**n)
    return ChainOperator(n, mat, label or f"op_{{{k},{l}}}")


def residual(a, b) -> float:
    a, b = as_cmatrix(a), as_cmatrix(b)
    if a.shape != b.shape:
        raise AlgebraError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b) / max(1.0, np.linalg.norm(b)))


def is_hermitian(a, tol: Tolerance = DEFAULT_TOL) -> bool:
    a = as_cmatrix(a)
    return a.shape[0] == a.shape[1] and tol.accepts(residual(a, a.conj().T))


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus entry is real positive."""
    v = np.array(v, dtype=complex)
    cols = v if v.ndim == 2 else v[:, None]
    for c in range(cols.shape[1]):
        col = cols[:, c]
        # first entry of largest modulus, ties broken by position
        mags = np.abs(col)
        i = int(np.argmax(mags > mags.max() * (1 - 1e-9)))
        if mags[i] > 0:
            cols[:, c] = col * (abs(col[i]) / col[i])
    return cols if v.ndim == 2 else cols[:, 0]


def eig_hermitian(a, tol: Tolerance = DEFAULT_TOL):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending."""
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1] or not is_hermitian(a, tol):
        raise AlgebraError("eig_hermitian needs a square Hermitian matrix")
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise AlgebraError(f"eigensolver did not converge: {exc}") from exc
    vecs = fix_phase(vecs)
    scale = max(1.0, np.linalg.norm(a))
    if np.linalg.norm(a @ vecs - vecs * vals) / scale > max(tol.threshold, 1e-10):
        raise AlgebraError("eigen-decomposition failed reconstruction check")
    return vals, vecs


def matexp(a, max_dim: int = 8) -> np.ndarray:
    """Matrix exponential by scaling and squaring of a Taylor series."""
    a = as_cmatrix(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise AlgebraError("matexp needs a square matrix")
    if n > max_dim:
        raise AlgebraError(f"matexp is limited to dimension <= {max_dim}")
    norm = np.linalg.norm(a, 1)
    s = max(0, int(np.ceil(np.log2(norm / 0.5))) if norm > 0.5 else 0)
    x = a / 2**s
    out = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 30):
        term = term @ x / k
        out = out + term
        if np.linalg.norm(term) < 1e-18 * np.linalg.norm(out):
            break
    for _ in range(s):
        out = out @ out
    return out
