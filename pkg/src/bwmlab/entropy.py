"""Entanglement entropy and L1-norm of d-function columns, and extremum scans.

For fixed (j, m) the bipartite state sum_{m'} d^j_{m'm}(theta) |a_m'>|b_m'>
has reduced probabilities p_m' = |d^j_{m'm}|^2. S is the Shannon entropy of
p in bits and f = sum_{m'} |d^j_{m'm}| obeys S <= 2 log2 f.
"""
from dataclasses import dataclass, field, asdict
import csv
import io
import json

import numpy as np

from .wigner import WignerError, half_int, little_d, little_d_prime, m_values

DEFAULT_POINTS = 2001
DEFAULT_H = 1e-4
MIN_POINTS = 100
CSV_HEADER = ("theta", "entropy", "l1", "d_entropy", "d_l1", "bound_gap")


class ScanError(ValueError):
    pass


def _column(j, m, theta):
    j, m = half_int(j), half_int(m)
    if abs(m) > j or (j - m).denominator != 1:
        raise WignerError(f"m = {m} is not a valid projection for j = {j}")
    return np.array([little_d(j, mp, m, theta) for mp in m_values(j)])


def reduced_probs(j, m, theta):
    """p_m' = |d^j_{m'm}(theta)|^2, m' descending; theta may be an array."""
    return _column(j, m, theta) ** 2


def entropy(p, axis=0):
    p = np.asarray(p, dtype=float)
    if np.any(p < -1e-12) or np.any(np.abs(p.sum(axis=axis) - 1) > 1e-9):
        raise ScanError("not a probability distribution")
    p = np.clip(p, 0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1)), 0.0)
    return terms.sum(axis=axis)


def l1_norm(j, m, theta):
    return np.abs(_column(j, m, theta)).sum(axis=0)


def bound_check(j, m, theta):
    """2 log2 f - S, nonnegative up to rounding."""
    return 2 * np.log2(l1_norm(j, m, theta)) - entropy(reduced_probs(j, m, theta))


@dataclass
class ScanRecord:
    theta: float
    entropy: float
    l1: float
    d_entropy: float
    d_l1: float
    bound_gap: float
    s_extremum: str = ""
    f_extremum: str = ""


@dataclass
class Extremum:
    theta: float
    kind: str  # "min" or "max"
    kink: bool = False


@dataclass
class ExtremumReport:
    j: str
    m: str
    entropy_extrema: list
    l1_extrema: list
    common_extrema: list = field(default_factory=list)
    entropy_only: list = field(default_factory=list)
    l1_only: list = field(default_factory=list)
    classifications: dict = field(default_factory=dict)
    m_zero: bool = False

    def to_dict(self):
        out = asdict(self)
        out["note"] = ("m=0: common-extremum guarantee does not apply" if self.m_zero else "")
        return out

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    def has_common(self, theta, kind=None, tol=1e-3):
        for t in self.common_extrema:
            if abs(t - theta) <= tol and (kind is None or self.classifications.get(t, {}).get("entropy") == kind):
                return True
        return False


@dataclass
class ScanResult:
    records: list
    report: ExtremumReport
    grid_step: float

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])

    def __iter__(self):
        return iter((self.records, self.report))


def default_grid(points: int = DEFAULT_POINTS):
    return np.linspace(0.0, np.pi, points + 1)[1:]


def _bisect(fun, a, b, iters=60):
    fa = fun(a)
    for _ in range(iters):
        c = 0.5 * (a + b)
        fc = fun(c)
        if (fc > 0) == (fa > 0):
            a, fa = c, fc
        else:
            b = c
    return 0.5 * (a + b)


def _kinks(j, m, grid):
    """Zeros of the column components, i.e. the corners of f."""
    out = []
    for mp in m_values(j):
        vals = little_d(j, mp, m, grid)
        for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
            out.append(_bisect(lambda t: float(little_d(j, mp, m, t)), grid[i], grid[i + 1]))
        # exact zeros on grid points that change sign
        for i in range(1, len(vals) - 1):
            if vals[i] == 0 and vals[i - 1] * vals[i + 1] < 0:
                out.append(float(grid[i]))
    out = sorted(out)
    merged = []
    for t in out:
        if not merged or t - merged[-1] > 1e-9:
            merged.append(t)
    return merged


def _sign_changes(x, dvals, lo, hi):
    """Extrema from sign changes of a derivative sampled on x."""
    out = []
    s = np.sign(np.where(np.abs(dvals) < 1e-13, 0.0, dvals))
    idx = [i for i in range(len(s)) if s[i] != 0]
    for a, b in zip(idx[:-1], idx[1:]):
        if s[a] == s[b]:
            continue
        if b - a > 1:  # derivative exactly zero in between: take the midpoint
            t = 0.5 * (x[a + 1] + x[b - 1])
        else:
            t = x[a] - dvals[a] * (x[b] - x[a]) / (dvals[b] - dvals[a])
        if lo < t <= hi + 1e-12:
            out.append(Extremum(float(min(t, hi)), "max" if s[a] > 0 else "min"))
    return out


def scan(j, m, theta_grid=None, h: float = DEFAULT_H, points: int = DEFAULT_POINTS) -> ScanResult:
    """Entropy and L1-norm along theta with extrema of both located.

    Smooth extrema are sign changes of central differences. Corners of f
    (zeros of a component) use one-sided slopes and count as extrema when
    the slopes change sign. Ghost points past the grid ends let extrema at
    the last grid point (theta = pi) be seen.
    """
    j, m = half_int(j), half_int(m)
    grid = default_grid(points) if theta_grid is None else np.asarray(theta_grid, dtype=float)
    if grid.ndim != 1 or len(grid) < MIN_POINTS:
        raise ScanError(f"grid needs at least {MIN_POINTS} points")
    if np.any(np.diff(grid) <= 0):
        raise ScanError("grid must be strictly increasing")
    step = float(np.min(np.diff(grid)))
    lo, hi = float(grid[0]), float(grid[-1])
    ext = np.concatenate([[lo - step], grid, [hi + step]])

    def s_of(t):
        return entropy(reduced_probs(j, m, t))

    def f_of(t):
        return l1_norm(j, m, t)

    s_vals, f_vals = s_of(ext), f_of(ext)
    ds = (s_of(ext + h) - s_of(ext - h)) / (2 * h)
    df = (f_of(ext + h) - f_of(ext - h)) / (2 * h)

    kinks = [t for t in _kinks(j, m, np.concatenate([ext[:1] - step, ext, ext[-1:] + step]))]
    near = np.zeros(len(ext), dtype=bool)
    for k in kinks:
        close = np.abs(ext - k) < h
        near |= close
        # one-sided slope on the side away from the corner
        for i in np.nonzero(close)[0]:
            if ext[i] < k:
                df[i] = (f_of(ext[i]) - f_of(ext[i] - h)) / h
            else:
                df[i] = (f_of(ext[i] + h) - f_of(ext[i])) / h

    s_ext = _sign_changes(ext, ds, lo - 0.5 * step, hi)
    f_ext = []
    # smooth part of f: drop sign changes bracketing a corner
    for e in _sign_changes(ext, df, lo - 0.5 * step, hi):
        if not any(abs(e.theta - k) < 2 * step for k in kinks):
            f_ext.append(e)
    for k in kinks:
        if not (lo - 0.5 * step < k <= hi + 1e-12):
            continue
        left = (f_of(k) - f_of(k - h)) / h
        right = (f_of(k + h) - f_of(k)) / h
        if left < 0 < right:
            f_ext.append(Extremum(float(min(k, hi)), "min", True))
        elif left > 0 > right:
            f_ext.append(Extremum(float(min(k, hi)), "max", True))
    # the right end is a symmetry point; a corner there shows as a slope flip
    f_ext.sort(key=lambda e: e.theta)

    report = ExtremumReport(str(j), str(m), [asdict(e) for e in s_ext], [asdict(e) for e in f_ext],
                            m_zero=(m == 0))
    match_tol = 2 * step
    used = set()
    for e in s_ext:
        partner = None
        for i, g in enumerate(f_ext):
            if i not in used and abs(g.theta - e.theta) <= match_tol:
                partner = i
                break
        if partner is None:
            report.entropy_only.append(e.theta)
        else:
            used.add(partner)
            report.common_extrema.append(e.theta)
            report.classifications[e.theta] = {"entropy": e.kind, "l1": f_ext[partner].kind,
                                               "l1_kink": f_ext[partner].kink}
    report.l1_only = [g.theta for i, g in enumerate(f_ext) if i not in used]

    s_mark = {int(np.argmin(np.abs(grid - e.theta))): e.kind for e in s_ext}
    f_mark = {int(np.argmin(np.abs(grid - e.theta))): e.kind for e in f_ext}
    gaps = 2 * np.log2(f_vals) - s_vals
    records = [ScanRecord(float(t), float(s_vals[i + 1]), float(f_vals[i + 1]), float(ds[i + 1]),
                          float(df[i + 1]), float(gaps[i + 1]), s_mark.get(i, ""), f_mark.get(i, ""))
               for i, t in enumerate(grid)]
    return ScanResult(records, report, step)


def pi_half_derivative_check(j, m, h: float = DEFAULT_H):
    """dS/dtheta at pi/2 by central difference, plus the d * d' product for integer j."""
    j, m = half_int(j), half_int(m)
    t = np.pi / 2
    s = lambda x: float(entropy(reduced_probs(j, m, x)))
    out = {"j": str(j), "m": str(m), "dS": (s(t + h) - s(t - h)) / (2 * h)}
    out["dS_ok"] = abs(out["dS"]) < 1e-6
    if (2 * j) % 2 == 0:
        prod = float(little_d(j, 0, m, t) * little_d_prime(j, 0, m, t))
        out["product"] = prod
        out["product_ok"] = abs(prod) < 1e-10
    else:
        out["product"] = None
        out["product_ok"] = True  # no m' = 0 component when 2j is odd
    return out


def write_csv(records, target=None) -> str:
    """CSV with 12 significant digits; writes to `target` (path) if given."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([f"{getattr(r, name):.12g}" for name in CSV_HEADER])
    text = buf.getvalue()
    if target is not None:
        with open(target, "w", newline="") as fh:
            fh.write(text)
    return text
