"""Size caps with environment-variable overrides.

Caps guard memory and run time, not correctness; raising them is safe on
machines with more resources.  They are read at call time so tests and
long runs can adjust them without code changes.
"""

import os

_DEFAULTS = {
    # max |A|**k points enumerated for a digit-expansion set
    "OPENBAKER_CANTOR_CAP": 1 << 20,
    # max matrix dimension accepted by op_norm and restricted-norm calls
    "OPENBAKER_NORM_CAP": 8192,
    # full SVD up to this min-dimension, Gram power iteration above
    "OPENBAKER_SVD_DENSE_MAX": 4096,
    # max N for dense propagator assembly
    "OPENBAKER_DENSE_CAP": 16384,
    # max dimension of a dense eigenvalue solve
    "OPENBAKER_EIG_CAP": 8192,
    # max |A|**(3k) for brute-force energy counting
    "OPENBAKER_BRUTE_CAP": 10 ** 9,
    # max intermediate element count when thickening residue sets
    "OPENBAKER_SET_CAP": 1 << 24,
}


def cap(name):
    """Integer value of the cap `name`, honoring environment overrides."""
    raw = os.environ.get(name)
    if raw is None:
        return _DEFAULTS[name]
    return int(raw)
