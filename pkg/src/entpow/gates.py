"""Constructors for the concrete gate families with known entangling power.

Values worth remembering (and enforced in the tests):

* controlled families built from ``d`` pairwise Hilbert-Schmidt orthogonal
  unitaries reach ``d(d-1)/(d+1)^2`` -- e.g. CNOT's 2/9 at d=2;
* the additive index permutation ``|i,j> -> |i+j, i-j>`` (mod d, odd d)
  saturates the upper bound ``(d-1)/(d+1)``;
* identities, swaps, and bilocal products entangle nothing.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimensionError, ValidationError
from .power import UnitaryGate
from .tensorops import Bipartition, ensure_finite, kron

#: tolerance for the pairwise Hilbert-Schmidt orthogonality check
HS_ORTHO_ATOL = 1e-8


def make_identity(part: Bipartition) -> UnitaryGate:
    """The identity gate on the given bipartition."""
    return UnitaryGate(np.eye(part.dim, dtype=complex), part)


def make_swap(d: int) -> UnitaryGate:
    """The gate exchanging the two factors of a ``d x d`` system."""
    if d < 1:
        raise DimensionError(f"swap dimension must be >= 1, got {d}")
    idx = np.arange(d * d).reshape(d, d)
    m = np.zeros((d * d, d * d), dtype=complex)
    m[idx.T.ravel(), np.arange(d * d)] = 1.0
    return UnitaryGate(m, Bipartition(d, d))


def make_cnot() -> UnitaryGate:
    """Controlled-NOT on two qubits, first factor controlling the second."""
    m = np.array(
        [[1, 0, 0, 0],
         [0, 1, 0, 0],
         [0, 0, 0, 1],
         [0, 0, 1, 0]], dtype=complex)
    return UnitaryGate(m, Bipartition(2, 2))


def clock_matrix(d: int) -> np.ndarray:
    """Diagonal of the ``d``-th roots of unity; its powers are pairwise HS-orthogonal."""
    omega = np.exp(2j * np.pi / d)
    return np.diag(omega ** np.arange(d))


def shift_matrix(d: int) -> np.ndarray:
    """Cyclic shift ``|k> -> |k+1 mod d``; an alternative HS-orthogonal power family."""
    m = np.zeros((d, d), dtype=complex)
    m[(np.arange(d) + 1) % d, np.arange(d)] = 1.0
    return m


def make_controlled_family(d: int, unitaries: list[np.ndarray] | None = None) -> UnitaryGate:
    """Block-diagonal controlled gate ``sum_a |a><a| (x) U_a`` on ``d x d``.

    Parameters
    ----------
    d : int
        Dimension of each factor, at least 2.
    unitaries : list of ndarray, optional
        The ``d`` controlled blocks.  Must be unitary and pairwise orthogonal
        in the Hilbert-Schmidt inner product ``<A,B> = tr(A^dag B)``; defaults
        to the clock powers ``Z^a``.

    The entangling power of any such gate is ``d(d-1)/(d+1)^2``, independent
    of which orthogonal family is used.
    """
    if d < 2:
        raise DimensionError(f"controlled family needs d >= 2, got {d}")
    if unitaries is None:
        z = clock_matrix(d)
        unitaries = [np.linalg.matrix_power(z, a) for a in range(d)]
    if len(unitaries) != d:
        raise ValidationError(f"expected {d} controlled blocks, got {len(unitaries)}")
    blocks = [ensure_finite(u, "controlled block") for u in unitaries]
    for a in range(d):
        for b in range(a + 1, d):
            overlap = abs(np.trace(blocks[a].conj().T @ blocks[b]))
            if overlap > HS_ORTHO_ATOL:
                raise ValidationError(
                    f"controlled blocks {a} and {b} are not Hilbert-Schmidt orthogonal: "
                    f"|<U_{a}, U_{b}>| = {overlap:.3e}"
                )
    m = np.zeros((d * d, d * d), dtype=complex)
    for a, u in enumerate(blocks):
        m[a * d:(a + 1) * d, a * d:(a + 1) * d] = u
    return UnitaryGate(m, Bipartition(d, d))


def make_additive_permutation(d: int) -> UnitaryGate:
    """Basis permutation ``|i>|j> -> |i+j>|i-j>`` (sums mod ``d``), odd ``d`` only.

    For odd ``d`` the index map is a bijection and the gate saturates the
    entangling-power upper bound ``(d-1)/(d+1)``; for even ``d`` the map is
    two-to-one and no such permutation exists.
    """
    if d < 3 or d % 2 == 0:
        raise ValidationError(
            f"the additive index map is a permutation only for odd d >= 3, got {d}"
        )
    m = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            m[((i + j) % d) * d + ((i - j) % d), i * d + j] = 1.0
    return UnitaryGate(m, Bipartition(d, d))


def make_bilocal(u1: np.ndarray, u2: np.ndarray) -> UnitaryGate:
    """Product gate ``u1 (x) u2`` acting independently on the factors."""
    u1 = ensure_finite(u1, "first factor unitary")
    u2 = ensure_finite(u2, "second factor unitary")
    part = Bipartition(u1.shape[0], u2.shape[0])
    return UnitaryGate(kron(u1, u2), part)


def make_basis_permutation(part: Bipartition, table) -> UnitaryGate:
    """Gate permuting computational basis states: ``|k> -> |table[k]>``."""
    table = list(table)
    n = part.dim
    if sorted(table) != list(range(n)):
        raise ValidationError(f"table is not a bijection on 0..{n - 1}: {table}")
    m = np.zeros((n, n), dtype=complex)
    m[np.asarray(table), np.arange(n)] = 1.0
    return UnitaryGate(m, part)


def save_gate(gate: UnitaryGate, path) -> None:
    """Write a gate to the JSON matrix format (row-major ``[re, im]`` pairs)."""
    payload = {
        "d1": gate.d1,
        "d2": gate.d2,
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in gate.matrix],
    }
    Path(path).write_text(json.dumps(payload))


def load_gate(path) -> UnitaryGate:
    """Read a gate from the JSON matrix format written by :func:`save_gate`."""
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"gate file {path} is not valid JSON: {exc}") from exc
    try:
        part = Bipartition(int(payload["d1"]), int(payload["d2"]))
        rows = payload["matrix"]
        m = np.array([[complex(entry[0], entry[1]) for entry in row] for row in rows])
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise ValidationError(f"gate file {path} is malformed: {exc}") from exc
    return UnitaryGate(m, part)


@dataclass(frozen=True)
class GateSpec:
    """A recipe resolving to a concrete gate; usable as a CLI-facing handle."""

    kind: str
    params: dict = field(default_factory=dict)

    def resolve(self) -> UnitaryGate:
        p = self.params
        if self.kind == "identity":
            return make_identity(Bipartition(p["d1"], p["d2"]))
        if self.kind == "swap":
            return make_swap(p["d"])
        if self.kind == "cnot":
            return make_cnot()
        if self.kind == "controlled_family":
            return make_controlled_family(p["d"], p.get("unitaries"))
        if self.kind == "additive_permutation":
            return make_additive_permutation(p["d"])
        if self.kind == "basis_permutation":
            return make_basis_permutation(Bipartition(p["d1"], p["d2"]), p["table"])
        if self.kind == "bilocal_product":
            return make_bilocal(p["u1"], p["u2"])
        if self.kind == "file":
            return load_gate(p["path"])
        raise ValidationError(f"unknown gate kind {self.kind!r}")
