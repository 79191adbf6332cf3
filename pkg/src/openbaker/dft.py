"""Unitary discrete Fourier transform utilities.

Provides the O(N log N) unitary transform, restricted DFT submatrices
with exact integer phase reduction, operator and Hilbert-Schmidt norms,
and the scale-product formula for the transform of a Cantor-set
indicator.
"""

import math

import numpy as np

from .alphabet import g_function
from .config import cap
from .errors import CapExceeded, NonConvergence, OutOfRange, Overflow

__all__ = [
    "dft_apply",
    "restricted_dft_matrix",
    "op_norm",
    "hs_norm",
    "indicator_dft_product",
]

_INT64_MAX = 2 ** 63 - 1
# floor(sqrt(2**63 - 1)): products of two residues stay inside int64
_DIRECT_MAX = 3037000499
# two-limb splitting keeps every partial product inside int64 up to here
_TWO_LIMB_MAX = 1 << 41
_LIMB = 1 << 20


def dft_apply(v, inverse=False):
    """Apply the unitary DFT with kernel exp(-2 pi i j l / N)/sqrt(N),
    or its adjoint when `inverse` is true."""
    v = np.asarray(v)
    if inverse:
        return np.fft.ifft(v, norm="ortho")
    return np.fft.fft(v, norm="ortho")


def _phase_products(x, y, n):
    """(x_j * y_l) mod n as an exact int64 matrix.

    Residues are < n <= 2**63 - 1.  Direct products are used while they
    fit in int64; a 20-bit limb split covers n < 2**41; beyond that the
    products are taken over Python integers.
    """
    if n <= _DIRECT_MAX:
        return (x[:, None] * y[None, :]) % n
    if n < _TWO_LIMB_MAX:
        hi = y // _LIMB
        lo = y % _LIMB
        part = (x[:, None] * hi[None, :]) % n
        return (part * _LIMB + x[:, None] * lo[None, :]) % n
    out = np.empty((len(x), len(y)), dtype=np.int64)
    for i, a in enumerate(x):
        ai = int(a)
        out[i] = [(ai * int(b)) % n for b in y]
    return out


def restricted_dft_matrix(X, Y, N):
    """Submatrix of the unitary N-point DFT with rows X and columns Y.

    Entry (j, l) is exp(-2 pi i ((j*l) mod N) / N) / sqrt(N).  The
    product j*l is reduced mod N in exact integer arithmetic before any
    floating-point conversion, so phases are accurate to about 1 ulp
    for every N representable in 64 bits.
    """
    N = int(N)
    if N < 1:
        raise OutOfRange(f"N must be positive, got {N}")
    if N > _INT64_MAX:
        raise Overflow(f"N = {N} exceeds the 64-bit range")
    x = np.asarray(X, dtype=np.int64).ravel()
    y = np.asarray(Y, dtype=np.int64).ravel()
    for arr in (x, y):
        if arr.size and (arr.min() < 0 or arr.max() >= N):
            raise OutOfRange("residues must lie in [0, N)")
    prods = _phase_products(x, y, N)
    ang = (prods / N) * (-2.0 * np.pi)
    return np.exp(1j * ang) / math.sqrt(N)


def op_norm(m):
    """Largest singular value of a dense matrix.

    Uses a full SVD while the smaller dimension is at most
    OPENBAKER_SVD_DENSE_MAX; beyond that, power iteration on the Gram
    operator to relative tolerance 1e-12.  Dimensions above
    OPENBAKER_NORM_CAP are rejected.
    """
    m = np.asarray(m)
    if m.ndim != 2:
        raise OutOfRange("op_norm expects a matrix")
    limit = cap("OPENBAKER_NORM_CAP")
    if max(m.shape) > limit:
        raise CapExceeded(f"dimension {max(m.shape)} exceeds cap {limit}")
    if min(m.shape) == 0:
        return 0.0
    if min(m.shape) <= cap("OPENBAKER_SVD_DENSE_MAX"):
        return float(np.linalg.svd(m, compute_uv=False)[0])
    return gram_power_norm(m)


def gram_power_norm(m, rtol=1e-12, max_iter=20000, seed=7):
    """Largest singular value via power iteration on m* m.

    Deterministic seeded start; raises NonConvergence when the Rayleigh
    estimate has not stabilized to `rtol` within `max_iter` sweeps.
    """
    m = np.asarray(m)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(m.shape[1]) + 1j * rng.standard_normal(m.shape[1])
    v /= np.linalg.norm(v)
    prev = -1.0
    for _ in range(max_iter):
        w = m @ v
        sigma = np.linalg.norm(w)
        if sigma == 0.0:
            return 0.0
        u = m.conj().T @ w
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return float(sigma)
        v = u / nu
        if abs(sigma - prev) <= rtol * sigma:
            return float(sigma)
        prev = sigma
    raise NonConvergence(f"Gram power iteration: no {rtol} convergence in {max_iter} sweeps")


def hs_norm(size_x, size_y, N):
    """Hilbert-Schmidt norm sqrt(|X| |Y| / N) of a restricted DFT block."""
    return math.sqrt(size_x * size_y / N)


def indicator_dft_product(a, k, j):
    """Unitary DFT of the level-k Cantor-set indicator at frequency j,
    evaluated as the product over scales s = 1..k of
    G((j mod M**s) / M**s) where G is the digit exponential sum.

    Accepts a scalar or an array of frequencies.  Residues are reduced
    before the floating division, which keeps each factor's argument
    exact to 1 ulp even for huge moduli.
    """
    if int(k) != k or k < 1:
        raise OutOfRange(f"level must be a positive integer, got {k!r}")
    M = a.base
    scalar = np.ndim(j) == 0
    jj = np.asarray(j)
    if jj.dtype == object or a.base ** k > _INT64_MAX:
        flat = [int(t) for t in jj.ravel()]
        out = np.ones(len(flat), dtype=complex)
        scale = 1
        for _ in range(k):
            scale *= M
            fracs = np.array([(t % scale) / scale for t in flat])
            out *= g_function(a, fracs)
        out = out.reshape(jj.shape)
    else:
        jj = jj.astype(np.int64)
        out = np.ones(jj.shape, dtype=complex)
        scale = 1
        for _ in range(k):
            scale *= M
            out *= g_function(a, (jj % scale) / scale)
    if scalar:
        return complex(out)
    return out
