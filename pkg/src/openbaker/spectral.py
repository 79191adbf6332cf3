"""Spectra of open quantum maps and derived statistics.

Eigenvalues come from the dense non-Hermitian LAPACK path (Schur form
with balancing) with cheap consistency checks: an exact trace identity
always, and inverse-iteration residual spot checks on the largest
eigenvalues for moderate dimensions.  On top of the spectra sit the
counting function, the predicted counting exponent, least-squares
exponent fits across levels, thickened-Cantor residue sets, power-
iteration propagation diagnostics, and resolvent norm probes.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.optimize import linear_sum_assignment

from .alphabet import cantor_set, dimension
from .config import cap
from .dft import dft_apply
from .errors import (
    CapExceeded,
    DegenerateFit,
    NearSingular,
    NotSmoothCutoff,
    OutOfRange,
    SolverFailure,
)
from .quantize import apply_adjoint, apply_map, build_map, trim

__all__ = [
    "Spectrum",
    "eigenvalues",
    "spectral_radius",
    "counting",
    "weyl_exponent",
    "weyl_fit",
    "x_rho",
    "propagation_defect",
    "resolvent_probe",
    "match_annulus",
]


@dataclass(frozen=True)
class Spectrum:
    """Numerical eigenvalue multiset with the provenance of its map."""

    eigenvalues: tuple
    source: dict


def _source_of(qm):
    return {
        "M": qm.alphabet.base,
        "A": list(qm.alphabet.symbols),
        "k": qm.level,
        "dim": qm.dim,
        "left_cutoff": (qm.left_cutoff.kind, qm.left_cutoff.tau),
        "right_cutoff": (qm.right_cutoff.kind, qm.right_cutoff.tau),
        "trimmed": qm.trimmed is not None,
        "perturbation": qm.perturbation,
    }


_RESIDUAL_CHECK_MAX_DIM = 3000
_RESIDUAL_CHECK_COUNT = 3


def _residual_spot_check(m, vals, norm_bound):
    """Verify the largest returned eigenvalues by inverse iteration."""
    order = np.argsort(-np.abs(vals))[:_RESIDUAL_CHECK_COUNT]
    n = m.shape[0]
    scale = max(norm_bound, 1e-30)
    rng = np.random.default_rng(3)
    for idx in order:
        lam = vals[idx]
        if abs(lam) <= 1e-8 * scale:
            continue
        # small shift keeps the factorization nonsingular at a true
        # eigenvalue; two inverse-iteration steps recover the vector
        shifted = lam * (1.0 + 1e-12) + 1e-12 * scale
        try:
            lu = lu_factor(m - shifted * np.eye(n))
        except np.linalg.LinAlgError:
            continue
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v /= np.linalg.norm(v)
        for _ in range(2):
            v = lu_solve(lu, v)
            nv = np.linalg.norm(v)
            if not np.isfinite(nv) or nv == 0.0:
                break
            v /= nv
        nv = np.linalg.norm(v)
        if not np.isfinite(nv) or nv == 0.0:
            continue
        res = np.linalg.norm(m @ v - lam * v)
        if res > 1e-8 * scale:
            raise SolverFailure(
                f"eigenpair residual {res:.3e} exceeds 1e-8 * {scale:.3e} "
                f"at eigenvalue {lam!r}"
            )


def eigenvalues(qm):
    """All eigenvalues of the map's assembled (trimmed) matrix.

    Dimension is capped by OPENBAKER_EIG_CAP.  The eigenvalue sum is
    checked against the exact trace, and for dimensions up to 3000 the
    top eigenvalues additionally pass a residual spot check; failures
    raise SolverFailure.
    """
    m = qm.matrix
    limit = cap("OPENBAKER_EIG_CAP")
    if m.shape[0] > limit:
        raise CapExceeded(f"dimension {m.shape[0]} exceeds cap {limit}")
    vals = np.linalg.eigvals(m)
    fro = float(np.linalg.norm(m))
    trace_err = abs(complex(np.sum(vals)) - complex(np.trace(m)))
    if trace_err > 1e-8 * max(1.0, fro):
        raise SolverFailure(
            f"eigenvalue sum deviates from trace by {trace_err:.3e}"
        )
    if m.shape[0] <= _RESIDUAL_CHECK_MAX_DIM:
        _residual_spot_check(m, vals, fro)
    return Spectrum(eigenvalues=tuple(vals.tolist()), source=_source_of(qm))


def spectral_radius(s):
    """Largest eigenvalue modulus; 0 for an empty spectrum."""
    if not s.eigenvalues:
        return 0.0
    return max(abs(z) for z in s.eigenvalues)


def counting(s, nu):
    """Number of eigenvalues with modulus at least M**(-nu)."""
    thr = float(s.source["M"]) ** (-float(nu))
    return sum(1 for z in s.eigenvalues if abs(z) >= thr)


def weyl_exponent(delta, nu):
    """Predicted counting exponent min(2 nu + 2 delta - 1, delta),
    floored at zero for reporting."""
    return max(0.0, min(2.0 * nu + 2.0 * delta - 1.0, delta))


def weyl_fit(a, k_range, nu_list, c):
    """Counting-exponent fits across levels.

    For each threshold nu, fits the slope of log(count)/log(M) against
    k by least squares over the levels with nonzero counts; levels with
    zero count are excluded and flagged.  Each row carries the
    predicted exponent for comparison.  Raises DegenerateFit when the
    level range itself has fewer than two entries.
    """
    ks = sorted(set(int(k) for k in k_range))
    if len(ks) < 2:
        raise DegenerateFit("need at least two levels to fit a slope")
    spectra = {}
    for k in ks:
        qm = build_map(a, k, c, c)
        if c.smooth:
            qm = trim(qm)
        spectra[k] = eigenvalues(qm)
    d = dimension(a)
    logM = math.log(a.base)
    rows = []
    for nu in nu_list:
        counts = {k: counting(spectra[k], nu) for k in ks}
        usable = [k for k in ks if counts[k] > 0]
        excluded = [k for k in ks if counts[k] == 0]
        if len(usable) < 2:
            slope = None
        else:
            xs = np.array(usable, dtype=float)
            ys = np.array([math.log(counts[k]) / logM for k in usable])
            slope = float(np.polyfit(xs, ys, 1)[0])
        rows.append(
            {
                "nu": float(nu),
                "slope": slope,
                "predicted": weyl_exponent(d, float(nu)),
                "counts": {k: counts[k] for k in ks},
                "used_levels": usable,
                "excluded_levels": excluded,
                "degenerate": slope is None,
            }
        )
    return rows


def x_rho(a, k, rho):
    """Residues within distance 2 N**(1-rho) of the level-k Cantor set.

    Returns the sorted union of translates C_k + m mod N over integer
    shifts |m| <= 2 N**(1-rho).
    """
    if not (0.0 < rho <= 1.0):
        raise OutOfRange(f"rho must lie in (0, 1], got {rho}")
    cs = cantor_set(a, k)
    N = int(cs.modulus)
    m_max = int(math.floor(2.0 * N ** (1.0 - rho)))
    est = (2 * m_max + 1) * cs.size
    limit = cap("OPENBAKER_SET_CAP")
    if min(est, N) > limit:
        raise CapExceeded(f"thickened set size {min(est, N)} exceeds cap {limit}")
    pts = cs.points.astype(np.int64)
    shifts = np.arange(-m_max, m_max + 1, dtype=np.int64)
    union = (pts[None, :] + shifts[:, None]) % N
    return np.unique(union)


def _gram_power(op, op_adj, n, iters=40, rtol=1e-3, seed=5):
    """Largest singular value of an implicitly given operator."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(iters):
        w = op(v)
        s = np.linalg.norm(w)
        if s == 0.0:
            return 0.0
        u = op_adj(w)
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return float(s)
        v = u / nu
        if abs(s - sigma) <= rtol * s:
            return float(s)
        sigma = s
    return float(sigma)


def propagation_defect(qm, rho):
    """Leakage of iterated dynamics outside the thickened Cantor set.

    With kt = ceil(rho * k) iterations of the matrix-free map,
    space_defect estimates the norm of (map)**kt applied after erasing
    the coordinates on the thickened set, and fourier_defect the norm
    of erasing the Fourier coordinates on it after (map)**kt.  Both use
    Gram power iteration (40 iterations or relative change < 1e-3).
    Requires equal smooth cutoffs on both sides.
    """
    left, right = qm.left_cutoff, qm.right_cutoff
    if not (left.smooth and right.smooth and left == right):
        raise NotSmoothCutoff("propagation diagnostics need equal smooth cutoffs")
    a = qm.alphabet
    k = qm.level
    N = a.base ** k
    kt = int(math.ceil(rho * k))
    inside = x_rho(a, k, rho)
    mask_out = np.ones(N)
    mask_out[inside] = 0.0

    def iterate(v):
        for _ in range(kt):
            v = apply_map(a, k, left, right, v)
        return v

    def iterate_adj(v):
        for _ in range(kt):
            v = apply_adjoint(a, k, left, right, v)
        return v

    space = _gram_power(
        lambda v: iterate(mask_out * v),
        lambda w: mask_out * iterate_adj(w),
        N,
    )

    # (I - F* 1_X F) v, with 1_X the indicator of the thickened set
    def outside_fourier(v):
        w = dft_apply(v)
        w[inside] = 0.0
        return dft_apply(w, inverse=True)

    fourier = _gram_power(
        lambda v: outside_fourier(iterate(v)),
        lambda w: iterate_adj(outside_fourier(w)),
        N,
    )
    return {"space_defect": float(space), "fourier_defect": float(fourier)}


def resolvent_probe(qm, lam):
    """Estimated operator norm of the inverse of (map - lam).

    Power iteration on the inverse Gram operator through LU solves.
    Raises NearSingular when the shifted matrix is numerically singular
    (lam at or extremely close to an eigenvalue).
    """
    m = qm.matrix
    n = m.shape[0]
    shifted = m - complex(lam) * np.eye(n)
    try:
        lu = lu_factor(shifted)
    except np.linalg.LinAlgError as exc:
        raise NearSingular(f"factorization failed at {lam!r}") from exc
    if not np.all(np.isfinite(lu[0])):
        raise NearSingular(f"singular factorization at {lam!r}")
    rng = np.random.default_rng(17)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = lu_solve(lu, b)
    if not np.all(np.isfinite(x)):
        raise NearSingular(f"solve overflowed at {lam!r}")
    res = np.linalg.norm(shifted @ x - b) / np.linalg.norm(b)
    if res > 1e-6:
        raise NearSingular(
            f"solve residual {res:.3e} at {lam!r}; too close to the spectrum"
        )
    v = b / np.linalg.norm(b)
    sigma = 0.0
    for _ in range(200):
        y = lu_solve(lu, v, trans=2)
        w = lu_solve(lu, y)
        s = np.linalg.norm(w)
        if not np.isfinite(s):
            raise NearSingular(f"power iteration overflowed at {lam!r}")
        if s > 1e24:
            raise NearSingular(f"resolvent norm exceeds 1e12 at {lam!r}")
        v_new = w / s
        if abs(s - sigma) <= 1e-6 * s:
            sigma = s
            break
        sigma = s
        v = v_new
    # s approximates the top eigenvalue of (A^H A)^{-1} = ||A^{-1}||^2
    return float(math.sqrt(sigma))


def match_annulus(eigs_a, eigs_b, radius):
    """Optimal pairing of two spectra restricted to |z| > radius.

    Returns a record with the per-pair distances under a minimum-cost
    matching, the maximum distance, and the annulus counts; a count
    mismatch leaves the excess unmatched and is reported.
    """
    sel_a = [z for z in eigs_a if abs(z) > radius]
    sel_b = [z for z in eigs_b if abs(z) > radius]
    if not sel_a and not sel_b:
        return {
            "count_a": 0,
            "count_b": 0,
            "matched": 0,
            "distances": [],
            "max_distance": 0.0,
        }
    if not sel_a or not sel_b:
        return {
            "count_a": len(sel_a),
            "count_b": len(sel_b),
            "matched": 0,
            "distances": [],
            "max_distance": math.inf,
        }
    va = np.array(sel_a, dtype=complex)
    vb = np.array(sel_b, dtype=complex)
    cost = np.abs(va[:, None] - vb[None, :])
    rows, cols = linear_sum_assignment(cost)
    dists = sorted((float(cost[i, j]) for i, j in zip(rows, cols)), reverse=True)
    return {
        "count_a": len(sel_a),
        "count_b": len(sel_b),
        "matched": len(rows),
        "distances": dists,
        "max_distance": dists[0] if dists else 0.0,
    }
