"""Dense complex tensor algebra on bipartite spaces.

Matrices are plain ``numpy.ndarray`` objects (dense, row-major).  A state on a
``d1 x d2`` system is a column vector of length ``d1*d2`` whose basis is
ordered ``|i>|j> -> i*d2 + j``.  Operators on the doubled space ``H (x) H``
carry four factors ``(d1, d2, d1, d2)`` flattened row-major in the same way.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ValidationError

#: default cap on any matrix side produced by :func:`kron`
DEFAULT_DIM_CAP = 2000

#: absolute tolerance for structural checks (unitarity, Hermiticity, idempotence)
STRUCT_ATOL = 1e-10

_EXCHANGES = ("T13", "T24", "T13T24")


@dataclass(frozen=True)
class Bipartition:
    """A fixed tensor factorization ``C^{d1} (x) C^{d2}``."""

    d1: int
    d2: int

    def __post_init__(self):
        if self.d1 < 1 or self.d2 < 1:
            raise DimensionError(f"factor dimensions must be >= 1, got ({self.d1}, {self.d2})")

    @property
    def dim(self) -> int:
        """Total dimension ``d1*d2``."""
        return self.d1 * self.d2

    def __str__(self) -> str:
        return f"{self.d1}x{self.d2}"


def ensure_finite(m: np.ndarray, what: str = "matrix") -> np.ndarray:
    """Return ``m`` as a complex array, rejecting NaN/Inf entries."""
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValidationError(f"{what} contains non-finite entries")
    return m


def kron(a: np.ndarray, b: np.ndarray, max_side: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Kronecker product ``a (x) b``.

    Parameters
    ----------
    a, b : ndarray
        Dense matrices (or column vectors).
    max_side : int
        Cap on each side of the result; exceeding it raises
        :class:`DimensionError`.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    rows = a.shape[0] * b.shape[0]
    cols = (a.shape[1] if a.ndim > 1 else 1) * (b.shape[1] if b.ndim > 1 else 1)
    if rows > max_side or cols > max_side:
        raise DimensionError(
            f"kron result {rows}x{cols} exceeds the configured cap of {max_side} per side"
        )
    return np.kron(a, b)


def partial_trace(m: np.ndarray, part: Bipartition, keep: str = "first") -> np.ndarray:
    """Trace out one factor of a square matrix on ``C^{d1} (x) C^{d2}``.

    Parameters
    ----------
    m : ndarray
        Square matrix of side ``part.dim``.
    keep : {"first", "second"}
        Which factor the reduced matrix lives on.

    Returns
    -------
    ndarray
        The ``d1 x d1`` (``keep="first"``) or ``d2 x d2`` (``keep="second"``)
        reduced matrix; the total trace is preserved.
    """
    m = np.asarray(m)
    n = part.dim
    if m.shape != (n, n):
        raise DimensionError(f"expected a {n}x{n} matrix for bipartition {part}, got {m.shape}")
    t = m.reshape(part.d1, part.d2, part.d1, part.d2)
    if keep == "first":
        return np.einsum("ijkj->ik", t)
    if keep == "second":
        return np.einsum("ijil->jl", t)
    raise ValidationError(f"keep must be 'first' or 'second', got {keep!r}")


def pair_exchange(part: Bipartition, which: str = "T13") -> np.ndarray:
    """Permutation operator exchanging factors of the doubled space.

    The doubled space ``H (x) H`` carries four factors numbered 1..4 with
    dimensions ``(d1, d2, d1, d2)``; factors 1,2 belong to the first copy and
    3,4 to the second.  ``"T13"`` exchanges the two ``d1`` factors, ``"T24"``
    the two ``d2`` factors, and ``"T13T24"`` swaps the copies wholesale.

    Returns
    -------
    ndarray
        Real 0/1 permutation matrix of side ``(d1*d2)**2``; it is its own
        inverse.
    """
    if which not in _EXCHANGES:
        raise ValidationError(f"which must be one of {_EXCHANGES}, got {which!r}")
    d1, d2 = part.d1, part.d2
    n = (d1 * d2) ** 2
    idx = np.arange(n).reshape(d1, d2, d1, d2)
    if which == "T13":
        rows = idx.transpose(2, 1, 0, 3)
    elif which == "T24":
        rows = idx.transpose(0, 3, 2, 1)
    else:
        rows = idx.transpose(2, 3, 0, 1)
    m = np.zeros((n, n))
    m[rows.ravel(), np.arange(n)] = 1.0
    return m


def antisym_projector_13(part: Bipartition) -> np.ndarray:
    """Projector ``(1 - T13)/2`` onto the antisymmetric subspace of the two ``d1`` factors."""
    t13 = pair_exchange(part, "T13")
    return (np.eye(t13.shape[0]) - t13) / 2.0
