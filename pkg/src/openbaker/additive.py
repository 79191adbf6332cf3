"""Additive energies and portraits of digit alphabets.

The portrait F_j counts ordered digit pairs at difference j; its
autocorrelation gives the shifted quadruple counts E_l (over the
integers) and their mod-M folding.  A 2x2 transfer matrix over carry
digits turns these into the exact modular additive energy of every
level-k Cantor set, whose growth rate yields the exponent gamma used
in the energy-based norm bound.  All counts are exact integers.
"""

import math
from dataclasses import dataclass

import numpy as np

from .alphabet import cantor_set, dimension
from .config import cap
from .errors import (
    CapExceeded,
    DegenerateAlphabet,
    HypothesisViolated,
    OutOfRange,
)

__all__ = [
    "EnergyProfile",
    "energy",
    "portrait",
    "profile",
    "cantor_energy_mod",
    "cantor_energy_brute",
    "check_appendix_inequalities",
    "check_two_by_two_lemma",
    "AppendixReport",
]

_INT64_MAX = 2 ** 63 - 1


def portrait(a):
    """Counts F_j of ordered digit pairs (b, c) with b - c = j.

    Returned as a dict over the support; F_0 = |A|, F_j = F_{-j}, and
    the counts vanish for |j| >= M.
    """
    counts = {}
    for b in a.symbols:
        for c in a.symbols:
            d = b - c
            counts[d] = counts.get(d, 0) + 1
    return counts


def energy(a, ell):
    """Number of quadruples (a, b, c, d) in A**4 with a + b - c - d = ell,
    the equation taken over the integers.

    Evaluated through the portrait autocorrelation
    E_ell = sum_j F_j F_{j+ell}, which counts the same quadruples.
    """
    F = portrait(a)
    return sum(f * F.get(j + ell, 0) for j, f in F.items())


@dataclass(frozen=True)
class EnergyProfile:
    """Exact additive statistics of an alphabet.

    Attributes
    ----------
    alphabet : Alphabet
    portrait : dict
        F_j over its support in the integers.
    portrait_mod : tuple
        Folded counts F_j + F_{j-M} indexed by Z_M.
    energies : dict
        E_l for every l with |l| <= 2M - 2 (zero outside).
    energies_mod : tuple
        Folded energies indexed by Z_M.
    matrix : tuple
        2x2 nonnegative integer transfer matrix
        ((E_{M-1} + E_{M+1}, 2 E_M), (E_1, E_0)).
    rho : float
        Its spectral radius, from the closed-form eigenvalues.
    gamma : float or None
        3*delta - log(rho)/log(M); None for degenerate alphabets where
        the growth comparison is not meaningful.
    """

    alphabet: object
    portrait: dict
    portrait_mod: tuple
    energies: dict
    energies_mod: tuple
    matrix: tuple
    rho: float
    gamma: object


def profile(a):
    """Full additive profile; every field except gamma is defined for
    degenerate alphabets as well."""
    M = a.base
    F = portrait(a)
    portrait_mod = tuple(F.get(j, 0) + F.get(j - M, 0) for j in range(M))
    energies = {l: energy(a, l) for l in range(-(2 * M - 2), 2 * M - 1)}
    energies_mod = tuple(
        sum(energies.get(l + t * M, 0) for t in (-2, -1, 0, 1)) for l in range(M)
    )
    p = energies.get(M - 1, 0) + energies.get(M + 1, 0)
    q = 2 * energies.get(M, 0)
    r = energies.get(1, 0)
    s = energies.get(0, 0)
    mat = ((p, q), (r, s))
    rho = _perron_2x2(p, q, r, s)
    if a.degenerate:
        gamma = None
    else:
        gamma = 3.0 * dimension(a) - math.log(rho) / math.log(M)
    return EnergyProfile(a, F, portrait_mod, energies, energies_mod, mat, rho, gamma)


def _perron_2x2(p, q, r, s):
    """Largest eigenvalue (p+s+sqrt((p-s)^2+4qr))/2 of a nonnegative matrix."""
    disc = (p - s) ** 2 + 4 * q * r
    return (p + s + math.sqrt(disc)) / 2.0


def cantor_energy_mod(a, k):
    """Modular additive energy of the level-k Cantor set: the number of
    quadruples in C_k**4 with x + y = z + w mod M**k.

    Computed exactly by iterating the 2x2 carry transfer matrix on the
    start vector (0, 1) in Python integer arithmetic.
    """
    if int(k) != k or k < 1:
        raise OutOfRange(f"level must be a positive integer, got {k!r}")
    ((p, q), (r, s)) = profile(a).matrix
    y0, y1 = 0, 1
    for _ in range(int(k)):
        y0, y1 = p * y0 + q * y1, r * y0 + s * y1
    return y0 + y1


def _cantor_energy_carry3(a, k):
    """Same count via the redundant 3x3 carry recursion.

    State x_j counts quadruples with x + y = z + w + (j-1) M**k over the
    integers; the 2x2 form above merges the two symmetric carry states.
    """
    E = profile(a).energies
    M = a.base
    rows = (
        (E.get(M - 1, 0), E.get(M, 0), E.get(M + 1, 0)),
        (E.get(1, 0), E.get(0, 0), E.get(1, 0)),
        (E.get(M + 1, 0), E.get(M, 0), E.get(M - 1, 0)),
    )
    x = (0, 1, 0)
    for _ in range(int(k)):
        x = tuple(sum(rows[i][j] * x[j] for j in range(3)) for i in range(3))
    return sum(x)


def cantor_energy_brute(a, k):
    """Modular additive energy of the level-k Cantor set by enumeration.

    Counts pair sums mod M**k and returns the sum of squared
    multiplicities, an exact rearrangement of the quadruple count.
    Guarded by OPENBAKER_BRUTE_CAP on |A|**(3k).
    """
    limit = cap("OPENBAKER_BRUTE_CAP")
    if a.size ** (3 * k) > limit:
        raise CapExceeded(f"|A|**(3k) = {a.size ** (3 * k)} exceeds cap {limit}")
    cs = cantor_set(a, k)
    N = cs.modulus
    if cs.points.dtype == object or N > _INT64_MAX // 2:
        sums = {}
        pts = [int(t) for t in cs.points]
        for x in pts:
            for y in pts:
                v = (x + y) % N
                sums[v] = sums.get(v, 0) + 1
        return sum(c * c for c in sums.values())
    pts = cs.points
    sums = (pts[:, None] + pts[None, :]).ravel() % N
    _, counts = np.unique(sums, return_counts=True)
    return int(np.sum(counts.astype(object) ** 2))


@dataclass(frozen=True)
class AppendixReport:
    """Outcome of the shifted-energy inequality checks for one alphabet."""

    alphabet: object
    passed: bool
    failures: tuple
    values: dict


def check_appendix_inequalities(a):
    """Exact checks of the shifted-energy inequalities:
    max(E_1, 2 E_M, E_{M+1} + E_{M-1}) <= E_0 and
    E_0 <= (2/3)|A|**3 + (1/3)|A| <= (3/4)|A|**3.

    All comparisons are done in integer arithmetic (the rational bounds
    are cleared of denominators).  Degenerate alphabets are rejected.
    """
    if a.degenerate:
        raise DegenerateAlphabet("inequality checks need 1 < |A| < M")
    M = a.base
    e0 = energy(a, 0)
    e1 = energy(a, 1)
    em = energy(a, M)
    esplit = energy(a, M + 1) + energy(a, M - 1)
    n = a.size
    failures = []
    if e1 > e0:
        failures.append("E_1 <= E_0")
    if 2 * em > e0:
        failures.append("2 E_M <= E_0")
    if esplit > e0:
        failures.append("E_{M+1} + E_{M-1} <= E_0")
    if 3 * e0 > 2 * n ** 3 + n:
        failures.append("E_0 <= (2/3)|A|^3 + (1/3)|A|")
    if 4 * (2 * n ** 3 + n) > 9 * n ** 3:
        failures.append("(2/3)|A|^3 + (1/3)|A| <= (3/4)|A|^3")
    values = {
        "E_0": e0,
        "E_1": e1,
        "E_M": em,
        "E_{M+1}+E_{M-1}": esplit,
        "upper": (2 * n ** 3 + n) / 3.0,
    }
    return AppendixReport(a, not failures, tuple(failures), values)


def check_two_by_two_lemma(p, q, r, s, eps0):
    """Contraction check for the nonnegative 2x2 matrix [[p, q], [r, s]].

    Hypotheses: eps0 in (0, 1/8); 0 <= p, q, r <= s <= 3/4;
    p + r <= 1; q + s <= 1; and additionally either
    p + r <= 2 sqrt(2 eps0) or q + s <= 1 - eps0.
    Returns True iff the spectral radius is below 1.
    """
    if not 0 < eps0 < 0.125:
        raise HypothesisViolated(f"eps0 must lie in (0, 1/8), got {eps0}")
    if not (0 <= p <= s and 0 <= q <= s and 0 <= r <= s and s <= 0.75):
        raise HypothesisViolated("need 0 <= p, q, r <= s <= 3/4")
    if p + r > 1 or q + s > 1:
        raise HypothesisViolated("need p + r <= 1 and q + s <= 1")
    if p + r > 2 * math.sqrt(2 * eps0) and q + s > 1 - eps0:
        raise HypothesisViolated(
            "need p + r <= 2 sqrt(2 eps0) or q + s <= 1 - eps0"
        )
    return _perron_2x2(p, q, r, s) < 1.0
