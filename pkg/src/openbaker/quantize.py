"""Open quantum baker's maps with smooth or sharp internal cutoffs.

A map is built from an alphabet (M, A) at an inverse Planck parameter
N = M**k: the inverse DFT of size N applied to a block-diagonal matrix
of M cutoff-damped DFTs of size N/M, with only the column blocks whose
index lies in A kept.  The cutoff is a fixed smooth bump profile scaled
by a parameter tau (or a sharp indicator, or zero).

The smooth profile is tabulated once per process from its defining
integral on Chebyshev nodes and evaluated through a monotone cubic
interpolant; values are exact zeros and ones outside the transition
window so that trimming identifies structurally null rows and columns.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .config import cap
from .errors import CapExceeded, NotAssembled, NonConvergence, OutOfRange

__all__ = [
    "CutoffSpec",
    "QuantumMap",
    "cutoff_tau",
    "sharp_one",
    "zero_cutoff",
    "step_profile",
    "discretize",
    "build_map",
    "trim",
    "perturb",
    "apply_map",
]

# The step profile integrates a fixed bump over (0,1), rescaled so the
# ramp occupies [LO, HI] inside [0,1]: F(x) = c * integral of
# exp(-1/(t(1-t))) over t in (0, 1.02x - 0.01), clipped to [0,1].
_RAMP_LO = 0.01 / 1.02
_RAMP_HI = 1.01 / 1.02
_STEP_NODES = 4097
_step_interp = None
_bump_total = None


def _bump(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = (t > 0.0) & (t < 1.0)
    ti = t[inside]
    out[inside] = np.exp(-1.0 / (ti * (1.0 - ti)))
    return out


def _adaptive_simpson(f, lo, hi, tol, depth=40):
    """Incremental adaptive Simpson rule with per-segment absolute
    tolerance; integrand is smooth except for flat endpoints."""

    def simpson(a, b, fa, fm, fb):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = float(_bump(lm))
        frm = float(_bump(rm))
        left = simpson(a, m, fa, flm, fm)
        right = simpson(m, b, fm, frm, fb)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + recurse(
            m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
        )

    fa = float(_bump(lo))
    fm = float(_bump(0.5 * (lo + hi)))
    fb = float(_bump(hi))
    whole = simpson(lo, hi, fa, fm, fb)
    return recurse(lo, hi, fa, fm, fb, whole, tol, depth)


def _build_step_table():
    """Tabulate the normalized ramp on Chebyshev nodes in [LO, HI]."""
    global _step_interp, _bump_total
    j = np.arange(_STEP_NODES, dtype=float)
    cheb = np.cos(np.pi * j / (_STEP_NODES - 1))[::-1]
    xs = _RAMP_LO + (_RAMP_HI - _RAMP_LO) * 0.5 * (cheb + 1.0)
    xs[0], xs[-1] = _RAMP_LO, _RAMP_HI
    # integral of the bump over (0, 1.02x - 0.01), accumulated segment
    # by segment so each node costs only its own panel
    uppers = 1.02 * xs - 0.01
    vals = np.empty(_STEP_NODES)
    vals[0] = 0.0
    for i in range(1, _STEP_NODES):
        width = uppers[i] - uppers[i - 1]
        tol = max(1e-12 * width, 1e-17)
        vals[i] = vals[i - 1] + _adaptive_simpson(
            _bump, uppers[i - 1], uppers[i], tol
        )
    _bump_total = vals[-1]
    vals = np.maximum.accumulate(vals) / _bump_total
    vals[0], vals[-1] = 0.0, 1.0
    # flat segments (exactly zero panel integrals near the ends) make
    # pchip divide by a zero slope internally; the result is still the
    # correct monotone interpolant
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        _step_interp = PchipInterpolator(xs, vals)


def step_profile(x):
    """Smooth step F: exactly 0 for x <= LO, exactly 1 for x >= HI,
    strictly increasing in between.  Accepts scalars or arrays."""
    if _step_interp is None:
        _build_step_table()
    arr = np.asarray(x, dtype=float)
    out = np.empty(arr.shape)
    low = arr <= _RAMP_LO
    high = arr >= _RAMP_HI
    mid = ~(low | high)
    out[low] = 0.0
    out[high] = 1.0
    if np.any(mid):
        out[mid] = np.clip(_step_interp(arr[mid]), 0.0, 1.0)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


@dataclass(frozen=True, eq=False)
class CutoffSpec:
    """A cutoff profile on [0,1]: smooth with width parameter tau,
    the sharp constant one, or identically zero.

    Equality and hashing compare only (kind, tau) so that maps built
    with equal specs are interchangeable.
    """

    kind: str
    tau: float = 0.0

    def __eq__(self, other):
        if not isinstance(other, CutoffSpec):
            return NotImplemented
        return (self.kind, self.tau) == (other.kind, other.tau)

    def __hash__(self):
        return hash((self.kind, self.tau))

    def __call__(self, x):
        if self.kind == "zero":
            arr = np.zeros_like(np.asarray(x, dtype=float))
            return float(arr) if np.ndim(x) == 0 else arr
        if self.kind == "sharp":
            arr = np.asarray(x, dtype=float)
            out = ((arr >= 0.0) & (arr <= 1.0)).astype(float)
            return float(out) if np.ndim(x) == 0 else out
        arr = np.asarray(x, dtype=float)
        vals = step_profile(arr / self.tau) * step_profile((1.0 - arr) / self.tau)
        return float(vals) if np.ndim(x) == 0 else vals

    @property
    def smooth(self):
        return self.kind == "smooth"


def cutoff_tau(tau):
    """Smooth cutoff x -> F(x/tau) F((1-x)/tau); requires 0 < tau <= 1/2."""
    tau = float(tau)
    if not (0.0 < tau <= 0.5):
        raise OutOfRange(f"tau must lie in (0, 1/2], got {tau}")
    return CutoffSpec(kind="smooth", tau=tau)


def sharp_one():
    """Indicator cutoff: 1 on [0,1] (no damping)."""
    return CutoffSpec(kind="sharp")


def zero_cutoff():
    """Identically zero cutoff (annihilating map)."""
    return CutoffSpec(kind="zero")


def discretize(spec, n):
    """Sample a cutoff at the grid j/n, j = 0..n-1."""
    if int(n) != n or n < 1:
        raise OutOfRange(f"grid size must be a positive integer, got {n!r}")
    return spec(np.arange(int(n), dtype=float) / float(n))


@dataclass(eq=False)
class QuantumMap:
    """An assembled (or trimmed, matrix-free) open quantum map.

    dense is the full N x N array when assembled; trimmed is the
    subarray on the rows and columns kept after removing structurally
    null ones, with kept recording their indices.  perturbation
    metadata is set when noise has been added.
    """

    alphabet: object
    level: int
    dim: int
    left_cutoff: object
    right_cutoff: object
    dense: object = None
    trimmed: object = None
    kept: object = None
    perturbation: object = None

    @property
    def matrix(self):
        if self.trimmed is not None:
            return self.trimmed
        if self.dense is None:
            raise NotAssembled("map has no assembled matrix")
        return self.dense


def build_map(a, k, left=None, right=None):
    """Assemble the open quantum map for alphabet a at N = M**k.

    left and right are the cutoffs applied before and after the inner
    DFT of each block (both default to the sharp indicator).  The
    result is dense; N is capped by OPENBAKER_DENSE_CAP.
    """
    if int(k) != k or k < 1:
        raise OutOfRange(f"level must be a positive integer, got {k!r}")
    if left is None:
        left = sharp_one()
    if right is None:
        right = sharp_one()
    M = a.base
    N = M ** int(k)
    limit = cap("OPENBAKER_DENSE_CAP")
    if N > limit:
        raise CapExceeded(f"N = {N} exceeds cap {limit}")
    n = N // M
    lvec = discretize(left, n).astype(complex)
    rvec = discretize(right, n).astype(complex)
    F_n = np.fft.fft(np.eye(n), axis=0, norm="ortho")
    core = (lvec[:, None] * F_n) * rvec[None, :]
    dense = np.zeros((N, N), dtype=complex)
    buf = np.zeros((N, n), dtype=complex)
    for b in a.symbols:
        buf[:] = 0.0
        buf[b * n : (b + 1) * n, :] = core
        cols = np.arange(b * n, (b + 1) * n)
        dense[:, cols] = np.fft.ifft(buf, axis=0, norm="ortho")
    return QuantumMap(
        alphabet=a,
        level=int(k),
        dim=N,
        left_cutoff=left,
        right_cutoff=right,
        dense=dense,
    )


def trim(qm):
    """Drop rows and columns that are identically zero.

    With a smooth cutoff the damped grid points produce columns of
    exact zeros (and matching rows after the outer inverse DFT is
    compressed); removing them shrinks the eigenproblem without
    changing the nonzero spectrum.  Returns a new map holding only the
    trimmed matrix.
    """
    if qm.dense is None:
        raise NotAssembled("trim requires an assembled dense matrix")
    m = qm.dense
    col_nz = np.flatnonzero(np.any(m != 0.0, axis=0))
    row_nz = np.flatnonzero(np.any(m != 0.0, axis=1))
    kept = np.intersect1d(col_nz, row_nz)
    trimmed = np.ascontiguousarray(m[np.ix_(kept, kept)])
    return QuantumMap(
        alphabet=qm.alphabet,
        level=qm.level,
        dim=int(kept.size),
        left_cutoff=qm.left_cutoff,
        right_cutoff=qm.right_cutoff,
        dense=None,
        trimmed=trimmed,
        kept=kept,
        perturbation=qm.perturbation,
    )


def _power_norm(m, rtol=1e-6, max_iter=10000, seed=11):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(m.shape[1]) + 1j * rng.standard_normal(m.shape[1])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iter):
        w = m @ v
        s = np.linalg.norm(w)
        if s == 0.0:
            return 0.0
        u = m.conj().T @ w
        v = u / np.linalg.norm(u)
        if abs(s - sigma) <= rtol * s:
            return float(s)
        sigma = s
    raise NonConvergence("operator-norm power iteration did not converge")


def perturb(qm, rel, seed):
    """Add iid uniform [0,1) noise scaled so its operator norm is rel
    times the map's; acts on the current matrix (trimmed if present).

    The same seed reproduces the same perturbation bit for bit.
    """
    if rel < 0.0:
        raise OutOfRange(f"relative size must be nonnegative, got {rel}")
    base = qm.matrix
    rng = np.random.default_rng(seed)
    noise = rng.random(base.shape)
    norm_b = _power_norm(base)
    norm_q = _power_norm(noise)
    scale = 0.0 if norm_q == 0.0 else rel * norm_b / norm_q
    new = base + scale * noise
    meta = {"rel": float(rel), "seed": int(seed), "generator": "pcg64"}
    if qm.trimmed is not None:
        return QuantumMap(
            alphabet=qm.alphabet,
            level=qm.level,
            dim=qm.dim,
            left_cutoff=qm.left_cutoff,
            right_cutoff=qm.right_cutoff,
            dense=None,
            trimmed=new,
            kept=qm.kept,
            perturbation=meta,
        )
    return QuantumMap(
        alphabet=qm.alphabet,
        level=qm.level,
        dim=qm.dim,
        left_cutoff=qm.left_cutoff,
        right_cutoff=qm.right_cutoff,
        dense=new,
        perturbation=meta,
    )


def apply_map(a, k, left, right, v):
    """Apply the (untrimmed) open quantum map to a vector in
    O(N log N) time and O(N) memory without assembling the matrix."""
    M = a.base
    N = M ** int(k)
    n = N // M
    v = np.asarray(v, dtype=complex)
    if v.shape != (N,):
        raise OutOfRange(f"vector must have shape ({N},), got {v.shape}")
    lvec = discretize(left, n)
    rvec = discretize(right, n)
    buf = np.zeros(N, dtype=complex)
    for b in a.symbols:
        seg = v[b * n : (b + 1) * n]
        buf[b * n : (b + 1) * n] = lvec * np.fft.fft(rvec * seg, norm="ortho")
    return np.fft.ifft(buf, norm="ortho")


def apply_adjoint(a, k, left, right, v):
    """Apply the conjugate transpose of the map, matrix-free."""
    M = a.base
    N = M ** int(k)
    n = N // M
    v = np.asarray(v, dtype=complex)
    if v.shape != (N,):
        raise OutOfRange(f"vector must have shape ({N},), got {v.shape}")
    lvec = discretize(left, n)
    rvec = discretize(right, n)
    w = np.fft.fft(v, norm="ortho")
    out = np.zeros(N, dtype=complex)
    for b in a.symbols:
        seg = w[b * n : (b + 1) * n]
        out[b * n : (b + 1) * n] = rvec * np.fft.ifft(lvec * seg, norm="ortho")
    return out
