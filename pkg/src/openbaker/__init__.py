"""Open quantum baker's maps and Cantor-set uncertainty numerics.

Subpackages by task: alphabet (digit sets, Cantor sets, orthogonality
structure), dft (exact restricted Fourier matrices and norms), additive
(pair/quadruple counting and growth matrices), fup (restricted-norm
reports and exponent bounds), quantize (cutoffs and map assembly),
spectral (eigenvalues, counting, diagnostics), cli (command line).
"""

from . import additive, alphabet, dft, errors, fup, quantize, spectral

__version__ = "0.1.0"

__all__ = [
    "additive",
    "alphabet",
    "dft",
    "errors",
    "fup",
    "quantize",
    "spectral",
    "__version__",
]
