"""Digit alphabets and their Cantor sets.

An alphabet is a base M >= 2 together with a nonempty set of digits
A inside {0, ..., M-1}.  The level-k Cantor set collects every residue
mod M**k whose base-M digits all lie in A; its dimension is
log|A| / log M.  The module also provides the normalized exponential
sum over the digits, predicates for alphabets with orthogonal Fourier
structure (special alphabets, spectral sets, tiles of Z_M), and a
canonical form under the affine group of Z_M used to deduplicate
listings.
"""

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .config import cap
from .errors import (
    CapExceeded,
    DegenerateAlphabet,
    Duplicate,
    EmptySymbols,
    OutOfRange,
)

__all__ = [
    "Alphabet",
    "CantorSet",
    "new_alphabet",
    "dimension",
    "pressure",
    "cantor_set",
    "cantor_intervals",
    "g_function",
    "is_special",
    "canonical_form",
    "tiles",
    "spectrum_set",
    "enumerate_alphabets",
]

_INT64_MAX = 2 ** 63 - 1


@dataclass(frozen=True)
class Alphabet:
    """A base together with a strictly sorted tuple of digits."""

    base: int
    symbols: tuple

    @property
    def size(self):
        return len(self.symbols)

    @property
    def degenerate(self):
        """True when |symbols| is 1 or base.

        Degenerate alphabets are constructible, but operations whose
        meaning requires 1 < |A| < M reject them.
        """
        return self.size == 1 or self.size == self.base


@dataclass(frozen=True)
class CantorSet:
    """Level-k digit-expansion set inside Z_{M**k}.

    Attributes
    ----------
    level : int
        The number of digits k.
    modulus : int
        M**k as an exact Python integer.
    points : numpy.ndarray
        Strictly sorted residues; dtype int64 when the modulus fits in
        64 bits, otherwise Python integers in an object array.
    """

    level: int
    modulus: int
    points: np.ndarray

    @property
    def size(self):
        return len(self.points)


def new_alphabet(base, symbols):
    """Validate and construct an :class:`Alphabet`.

    Parameters
    ----------
    base : int
        The base M, at least 2.
    symbols : iterable of int
        Digits, each in [0, base); duplicates are rejected.
    """
    if int(base) != base or base < 2:
        raise OutOfRange(f"base must be an integer >= 2, got {base!r}")
    base = int(base)
    syms = [int(s) for s in symbols]
    if not syms:
        raise EmptySymbols("alphabet needs at least one symbol")
    if len(set(syms)) != len(syms):
        raise Duplicate(f"repeated symbols in {syms}")
    for s in syms:
        if not 0 <= s < base:
            raise OutOfRange(f"symbol {s} outside [0, {base})")
    return Alphabet(base, tuple(sorted(syms)))


def dimension(a):
    """Dimension log|A| / log M of the limiting Cantor set."""
    return math.log(a.size) / math.log(a.base)


def pressure(a, s):
    """Topological pressure delta - s at inverse-temperature s."""
    return dimension(a) - s


def cantor_set(a, k):
    """All residues mod M**k whose base-M digits lie in the alphabet.

    The point count |A|**k is guarded by OPENBAKER_CANTOR_CAP.
    """
    if int(k) != k or k < 1:
        raise OutOfRange(f"level must be a positive integer, got {k!r}")
    k = int(k)
    npts = a.size ** k
    limit = cap("OPENBAKER_CANTOR_CAP")
    if npts > limit:
        raise CapExceeded(f"|A|**k = {npts} exceeds cap {limit}")
    modulus = a.base ** k
    if modulus <= _INT64_MAX:
        pts = np.array([0], dtype=np.int64)
        syms = np.array(a.symbols, dtype=np.int64)
        weight = 1
        for _ in range(k):
            pts = (pts[None, :] + (syms * weight)[:, None]).ravel()
            weight *= a.base
        pts.sort()
    else:
        vals = [0]
        weight = 1
        for _ in range(k):
            vals = [p + s * weight for s in a.symbols for p in vals]
            weight *= a.base
        pts = np.empty(len(vals), dtype=object)
        pts[:] = sorted(vals)
    return CantorSet(k, modulus, pts)


def cantor_intervals(a, k):
    """Closed intervals [j/M**k, (j+1)/M**k] over the level-k points.

    Their union shrinks to the limiting Cantor set in [0, 1] as k grows.
    """
    cs = cantor_set(a, k)
    scale = float(cs.modulus)
    return [(int(j) / scale, (int(j) + 1) / scale) for j in cs.points]


def g_function(a, x):
    """Normalized exponential sum over the digits at frequency x.

    Computes sum_{s in A} exp(-2 pi i s x) / sqrt(M); 1-periodic in x.
    Accepts a scalar or an array and vectorizes over x.
    """
    arr = np.asarray(x, dtype=float)
    syms = np.array(a.symbols, dtype=float)
    vals = np.exp(-2j * np.pi * np.multiply.outer(arr, syms)).sum(axis=-1)
    vals = vals / math.sqrt(a.base)
    if np.ndim(x) == 0:
        return complex(vals)
    return vals


def is_special(a, tol=1e-9):
    """Whether the digit exponential sum vanishes at all scaled digit
    differences (b - b')/M for distinct digits b, b'.

    Such alphabets make the rows of the digit-restricted DFT pairwise
    orthogonal, so every nonzero singular value equals sqrt(|A|/M) and
    the restricted norm is (|A|/M)**(k/2) exactly at every level.
    """
    if a.degenerate:
        raise DegenerateAlphabet("special-alphabet test needs 1 < |A| < M")
    diffs = sorted({c - b for b, c in combinations(a.symbols, 2)})
    vals = g_function(a, np.array(diffs, dtype=float) / a.base)
    return bool(np.all(np.abs(vals) <= tol))


def canonical_form(a):
    """Lexicographically least image of the digit set under all maps
    x -> (d*x + q) mod M with gcd(d, M) = 1.

    This is a deduplication key for listings of special alphabets; the
    affine group preserves the special property but does not preserve
    restricted-norm values in general.
    """
    M = a.base
    best = None
    for d in range(1, M):
        if math.gcd(d, M) != 1:
            continue
        scaled = [(d * s) % M for s in a.symbols]
        for q in range(M):
            img = tuple(sorted((x + q) % M for x in scaled))
            if best is None or img < best:
                best = img
    return Alphabet(M, best)


def tiles(a):
    """Translate set T with Z_M equal to the disjoint union of A + t, or None.

    Only possible when |A| divides M.  The search always covers the
    smallest uncovered residue next and tries candidate translates in
    increasing order, so the returned witness is deterministic (and
    lexicographically least for the cases exercised here).
    """
    M = a.base
    if M % a.size:
        return None
    full = (1 << M) - 1
    masks = []
    for t in range(M):
        m = 0
        for s in a.symbols:
            m |= 1 << ((s + t) % M)
        masks.append(m)
    covers = [[t for t in range(M) if (masks[t] >> u) & 1] for u in range(M)]

    def dfs(covered, chosen):
        if covered == full:
            return tuple(sorted(chosen))
        u = (~covered & (covered + 1)).bit_length() - 1
        for t in covers[u]:
            if masks[t] & covered:
                continue
            chosen.append(t)
            res = dfs(covered | masks[t], chosen)
            if res is not None:
                return res
            chosen.pop()
        return None

    return dfs(0, [])


def spectrum_set(a, tol=1e-9):
    """Set B in Z_M, |B| = |A|, whose pairwise differences all annihilate
    the digit exponential sum, or None when no such set exists.

    Differences are taken mod M and tested as |G((b - b')/M)| <= tol.
    Any translate of a witness is a witness, so the search fixes 0 as
    the least element and extends in increasing order; the first
    complete set found is the lexicographically least witness.
    """
    if a.degenerate:
        raise DegenerateAlphabet("spectrum search needs 1 < |A| < M")
    M = a.base
    want = a.size
    vals = np.abs(g_function(a, np.arange(1, M, dtype=float) / M))
    # |G(-x)| = |G(x)|, so the admissible difference set is symmetric.
    zero = {d for d, v in zip(range(1, M), vals) if v <= tol}

    def dfs(chosen):
        if len(chosen) == want:
            return tuple(chosen)
        for c in range(chosen[-1] + 1, M):
            if all((c - b) % M in zero for b in chosen):
                res = dfs(chosen + [c])
                if res is not None:
                    return res
        return None

    return dfs([0])


def enumerate_alphabets(M, size):
    """Yield every alphabet of the given size in lexicographic order.

    Restricted to 1 < size < M; the degenerate sizes are rejected.
    """
    if int(M) != M or M < 2:
        raise OutOfRange(f"base must be an integer >= 2, got {M!r}")
    if not 1 < size < M:
        raise DegenerateAlphabet(f"need 1 < size < {M}, got {size}")
    for combo in combinations(range(int(M)), int(size)):
        yield Alphabet(int(M), combo)
