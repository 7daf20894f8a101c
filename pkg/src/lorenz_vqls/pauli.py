"""Weighted tensor products of {I, X, Y, Z}.

Supports decomposing a dense power-of-two matrix into such a sum,
reconstructing the dense matrix, and applying individual terms or whole sums
to statevectors without materializing any full matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

from .errors import DimensionMismatch
from .linalg import num_qubits

COEFF_CUTOFF = 1e-12
ALPHABET = "IXYZ"

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@lru_cache(maxsize=None)
def pauli_matrix(label: str) -> np.ndarray:
    """Dense tensor product of the single-qubit matrices named by `label`."""
    out = _SINGLE[label[0]]
    for ch in label[1:]:
        out = np.kron(out, _SINGLE[ch])
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _term_action(label: str):
    """(gather, phase) arrays such that P @ v == phase * v[gather].

    X and Y flip the qubit's bit in the amplitude index; Z contributes
    (-1)^bit; Y contributes an extra factor i per source bit.  Qubit 0 is the
    most significant bit of the index.
    """
    n = len(label)
    dim = 1 << n
    idx = np.arange(dim)
    flip = 0
    phase = np.ones(dim, dtype=complex)
    for q, ch in enumerate(label):
        bit = (idx >> (n - 1 - q)) & 1
        if ch in "XY":
            flip |= 1 << (n - 1 - q)
        if ch == "Y":
            phase = phase * (1j * (1 - 2 * bit))
        elif ch == "Z":
            phase = phase * (1 - 2 * bit)
    gather = idx ^ flip
    out_phase = phase[gather]
    gather.setflags(write=False)
    out_phase.setflags(write=False)
    return gather, out_phase


def _check_label(label: str, n: int) -> None:
    if len(label) != n or any(ch not in ALPHABET for ch in label):
        raise ValueError(f"bad Pauli label {label!r} for {n} qubit(s)")


@dataclass(frozen=True)
class PauliTerm:
    label: str
    coeff: complex


@dataclass(frozen=True)
class PauliSum:
    """Sorted, deduplicated sum of Pauli terms over `qubit_count` qubits.

    Terms with |coeff| below COEFF_CUTOFF are dropped on construction, and
    terms are kept in lexicographic label order so serialization and
    summation order are reproducible.
    """

    terms: tuple[PauliTerm, ...]
    qubit_count: int

    def __post_init__(self):
        seen = set()
        kept = []
        for t in self.terms:
            _check_label(t.label, self.qubit_count)
            if t.label in seen:
                raise ValueError(f"duplicate label {t.label!r}")
            seen.add(t.label)
            if abs(t.coeff) >= COEFF_CUTOFF:
                kept.append(PauliTerm(t.label, complex(t.coeff)))
        kept.sort(key=lambda t: t.label)
        object.__setattr__(self, "terms", tuple(kept))

    @property
    def dim(self) -> int:
        return 1 << self.qubit_count

    @cached_property
    def is_hermitian(self) -> bool:
        # real coefficients on the (Hermitian) Pauli basis <=> Hermitian sum
        return all(abs(t.coeff.imag) <= COEFF_CUTOFF for t in self.terms)

    @cached_property
    def _action(self):
        gathers = np.empty((len(self.terms), self.dim), dtype=np.intp)
        phases = np.empty((len(self.terms), self.dim), dtype=complex)
        for i, t in enumerate(self.terms):
            g, p = _term_action(t.label)
            gathers[i] = g
            phases[i] = t.coeff * p
        return gathers, phases

    def apply(self, v) -> np.ndarray:
        """Matrix-free sum of per-term actions, accumulated in label order."""
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"expected vector of length {self.dim}")
        if not self.terms:
            return np.zeros(self.dim, dtype=complex)
        gathers, phases = self._action
        return (phases * v[gathers]).sum(axis=0)

    def dump(self) -> str:
        """Text form: one `LABEL re im` line per term, lexicographic order."""
        return "".join(
            f"{t.label} {t.coeff.real:.17g} {t.coeff.imag:.17g}\n" for t in self.terms
        )


def apply_term(term: PauliTerm, v) -> np.ndarray:
    """reconstruct({term}) @ v in O(2^n) via bit manipulation."""
    v = np.asarray(v, dtype=complex)
    gather, phase = _term_action(term.label)
    if v.shape != gather.shape:
        raise DimensionMismatch(
            f"vector length {v.shape} incompatible with label {term.label!r}"
        )
    return term.coeff * (phase * v[gather])


def decompose(m) -> PauliSum:
    """Expand a 2^n x 2^n matrix over all 4^n Pauli strings.

    Coefficients are trace inner products Tr(P m) / 2^n; strings with
    |coeff| < COEFF_CUTOFF are dropped.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    n = num_qubits(m.shape[0])
    if n > 6:
        raise ValueError("decomposition limited to 6 qubits")
    dim = m.shape[0]
    terms = []
    for chars in product(ALPHABET, repeat=n):
        label = "".join(chars)
        coeff = np.einsum("ij,ji->", pauli_matrix(label), m) / dim
        if abs(coeff) >= COEFF_CUTOFF:
            terms.append(PauliTerm(label, complex(coeff)))
    return PauliSum(tuple(terms), n)


def reconstruct(s: PauliSum) -> np.ndarray:
    """Dense matrix of a Pauli sum (inverse of `decompose`)."""
    out = np.zeros((s.dim, s.dim), dtype=complex)
    for t in s.terms:
        out += t.coeff * pauli_matrix(t.label)
    return out
