"""Restricted-DFT norms of Cantor sets and uncertainty exponents.

r_norm(a, k) is the operator norm of the unitary DFT mod M**k
compressed on both sides to the level-k Cantor set.  Its normalized
logarithm beta_k = -log(r_k) / (k log M) is a lower bound for the
fractal uncertainty exponent (the supremum over k, by
submultiplicativity of the norms).  fup_report evaluates the norms
together with every analytic upper and lower bound: the trivial and
Hilbert-Schmidt bounds, the additive-energy bound, and two computable
witness lower bounds.
"""

import math
from dataclasses import dataclass

import numpy as np

from .additive import cantor_energy_mod
from .alphabet import Alphabet, cantor_set, dimension
from .config import cap
from .dft import indicator_dft_product, op_norm, restricted_dft_matrix
from .errors import (
    CapExceeded,
    DegenerateAlphabet,
    OutOfRange,
    Overflow,
    SymbolNotInAlphabet,
)

__all__ = [
    "FupBounds",
    "FupReport",
    "GapReport",
    "r_norm",
    "fup_report",
    "witness_constant",
    "witness_modulated",
    "gap_condition",
    "check_submultiplicative",
    "shift_reflect_key",
    "scan_norms",
]

_INT64_MAX = 2 ** 63 - 1


def r_norm(a, k):
    """Operator norm of the DFT restricted to the level-k Cantor set.

    The matrix is |A|**k square, guarded by OPENBAKER_NORM_CAP; the
    modulus M**k must fit in 64 bits for exact phase reduction.
    """
    if int(k) != k or k < 1:
        raise OutOfRange(f"level must be a positive integer, got {k!r}")
    limit = cap("OPENBAKER_NORM_CAP")
    if a.size ** k > limit:
        raise CapExceeded(f"|A|**k = {a.size ** k} exceeds cap {limit}")
    if a.base ** k > _INT64_MAX:
        raise Overflow(f"M**k = {a.base ** k} exceeds the 64-bit range")
    cs = cantor_set(a, k)
    mat = restricted_dft_matrix(cs.points, cs.points, int(cs.modulus))
    return op_norm(mat)


def beta_value(a, k, r):
    """Normalized log-norm -log(r) / (k log M)."""
    return -math.log(r) / (k * math.log(a.base)) + 0.0


@dataclass(frozen=True)
class FupBounds:
    """Per-level analytic bounds accompanying a computed norm.

    trivial and additive are upper bounds for r_k; lower,
    witness_constant and witness_modulated are lower bounds.
    witness_modulated is the best value over all digits used as the
    geometric-series modulation.
    """

    trivial: float
    lower: float
    additive: float
    witness_constant: float
    witness_modulated: float


@dataclass(frozen=True)
class FupReport:
    """Norms, exponents and bounds for levels 1..k_max.

    beta_best = max_k beta_k is a certified lower bound for the
    uncertainty exponent; the limit itself is never extrapolated.
    """

    alphabet: object
    k_values: tuple
    r: tuple
    beta: tuple
    bounds: tuple
    beta_best: float


def additive_energy_bound(a, k):
    """Upper bound E(C_k)**(1/8) |C_k|**(3/8) / N**(3/8) on the norm,
    evaluated in log space to avoid overflowing the exact counts."""
    e = cantor_energy_mod(a, k)
    log_val = (
        math.log(e) / 8.0
        + 0.375 * k * math.log(a.size)
        - 0.375 * k * math.log(a.base)
    )
    return math.exp(log_val)


def trivial_bounds(a, k):
    """(upper, lower) = (min(1, N**(delta - 1/2)), N**((delta - 1)/2))."""
    d = dimension(a)
    logN = k * math.log(a.base)
    upper = min(1.0, math.exp((d - 0.5) * logN))
    lower = math.exp(0.5 * (d - 1.0) * logN)
    return upper, lower


def witness_constant(a, k):
    """Lower bound for r_k from the constant vector on the Cantor set:
    the root mean square over j in C_k of the indicator transform.

    Guarded by OPENBAKER_CANTOR_CAP on |A|**k.
    """
    cs = cantor_set(a, k)
    vals = indicator_dft_product(a, k, cs.points)
    return math.sqrt(float(np.mean(np.abs(vals) ** 2)))


def witness_modulated(a, k, b):
    """Lower bound for r_k from the vector modulated by the frequency
    whose base-M digits all equal b; reduces to witness_constant at b = 0.
    """
    if b not in a.symbols:
        raise SymbolNotInAlphabet(f"{b} not among symbols {a.symbols}")
    cs = cantor_set(a, k)
    N = cs.modulus
    j_b = b * (a.base ** k - 1) // (a.base - 1)
    if cs.points.dtype == object:
        shifted = np.empty(len(cs.points), dtype=object)
        shifted[:] = [(int(p) - j_b) % N for p in cs.points]
    else:
        shifted = (cs.points - np.int64(j_b)) % np.int64(N)
    vals = indicator_dft_product(a, k, shifted)
    return math.sqrt(float(np.mean(np.abs(vals) ** 2)))


def fup_report(a, k_max):
    """Evaluate norms, exponents and all bounds for k = 1..k_max."""
    if int(k_max) != k_max or k_max < 1:
        raise OutOfRange(f"k_max must be a positive integer, got {k_max!r}")
    ks, rs, betas, bounds = [], [], [], []
    for k in range(1, int(k_max) + 1):
        r = r_norm(a, k)
        upper, lower = trivial_bounds(a, k)
        wc = witness_constant(a, k)
        wm = max(witness_modulated(a, k, b) for b in a.symbols)
        ks.append(k)
        rs.append(r)
        betas.append(beta_value(a, k, r))
        bounds.append(
            FupBounds(
                trivial=upper,
                lower=lower,
                additive=additive_energy_bound(a, k),
                witness_constant=wc,
                witness_modulated=wm,
            )
        )
    return FupReport(
        alphabet=a,
        k_values=tuple(ks),
        r=tuple(rs),
        beta=tuple(betas),
        bounds=tuple(bounds),
        beta_best=max(betas),
    )


@dataclass(frozen=True)
class GapReport:
    """Largest circular gap of a level-k Cantor set and the induced
    norm bound.

    gap_start, gap_length describe the longest run of consecutive
    missing residues (circularly).  condition records whether the set
    size is at most the gap length, in which case the norm is at most
    sqrt(1 - 2**(-2N)) (astronomically weak but strictly below 1).
    threshold_k is the analytic level beyond which the condition is
    guaranteed; analytic_gap_length is the guaranteed gap at this level.
    """

    alphabet: object
    level: int
    set_size: int
    gap_start: int
    gap_length: int
    condition: bool
    analytic_gap_length: int
    threshold_k: float
    meets_threshold: bool
    norm_bound: float


def gap_condition(a, k):
    """Evaluate the circular-gap norm criterion for the level-k set."""
    if a.degenerate:
        raise DegenerateAlphabet("gap criterion needs 1 < |A| < M")
    cs = cantor_set(a, k)
    pts = [int(p) for p in cs.points]
    N = int(cs.modulus)
    best_len, best_start = 0, 0
    for prev, nxt in zip(pts, pts[1:] + [pts[0] + N]):
        run = nxt - prev - 1
        if run > best_len:
            best_len, best_start = run, (prev + 1) % N
    size = len(pts)
    condition = size <= best_len
    d = dimension(a)
    # ceil(M**(1-delta) - 1) = ceil((M - |A|)/|A|), exact in integers
    lceil = (a.base - 1) // a.size
    analytic_gap = lceil * a.base ** (k - 1)
    threshold = 1.0 / (1.0 - d) - math.log(lceil) / ((1.0 - d) * math.log(a.base))
    bound = math.sqrt(1.0 - math.pow(2.0, -min(2 * N, 2100)))
    return GapReport(
        alphabet=a,
        level=int(k),
        set_size=size,
        gap_start=best_start,
        gap_length=best_len,
        condition=condition,
        analytic_gap_length=analytic_gap,
        threshold_k=threshold,
        meets_threshold=k >= threshold,
        norm_bound=bound,
    )


def check_submultiplicative(a, k1, k2, slack=1e-9):
    """True iff r_{k1+k2} <= r_{k1} r_{k2} + slack."""
    r_a = r_norm(a, k1)
    r_b = r_norm(a, k2)
    r_ab = r_norm(a, k1 + k2)
    return r_ab <= r_a * r_b + slack


def shift_reflect_key(a):
    """Deduplication key for norm scans.

    Restricted norms are exactly invariant under shifting every digit
    by a constant (digit translations act by unitary conjugation as
    long as no digit wraps past the base) and under the reflection
    s -> M - 1 - s (complex conjugation composed with index reversal).
    The key is the least of the shift-normalized digit tuple and its
    shift-normalized reflection.
    """
    A = a.symbols
    M = a.base
    t1 = tuple(s - A[0] for s in A)
    refl = sorted(M - 1 - s for s in A)
    t2 = tuple(s - refl[0] for s in refl)
    return min(t1, t2)


def scan_norms(M, size, k, alphabets=None):
    """Norms r_k for every alphabet of the given size, computed once per
    shift/reflection class.

    Returns a list of (Alphabet, r) pairs in lexicographic order.
    """
    from .alphabet import enumerate_alphabets

    if alphabets is None:
        alphabets = list(enumerate_alphabets(M, size))
    values = {}
    out = []
    for a in alphabets:
        key = shift_reflect_key(a)
        if key not in values:
            values[key] = r_norm(Alphabet(M, key), k)
        out.append((a, values[key]))
    return out
