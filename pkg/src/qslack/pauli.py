"""Pauli-string and Walsh-Hadamard operator bases.

Observables are sparse coefficient maps over tensor-product basis elements:
Pauli strings sigma_x1 (x) ... (x) sigma_xn with labels in {0,1,2,3}
(0=I, 1=X, 2=Y, 3=Z), and their diagonal restriction, the Walsh vectors
s_x1 (x) ... (x) s_xn with labels in {0,1} and entries +-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Mapping

import numpy as np

from . import linalg

SIGMA = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
PAULI_CHARS = "IXYZ"

WALSH = (np.array([1.0, 1.0]), np.array([1.0, -1.0]))


def default_term_cap(n: int) -> int:
    """Largest number of stored terms per observable: everything at n <= 2, 64 beyond."""
    return 4**n if n <= 2 else 64


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Paulis, e.g. labels (1, 3) for "XZ"."""

    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.labels) < 1 or any(l not in (0, 1, 2, 3) for l in self.labels):
            raise ValueError(f"invalid Pauli labels {self.labels}")

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        try:
            return cls(tuple(PAULI_CHARS.index(ch) for ch in text.upper()))
        except ValueError:
            raise ValueError(f"invalid Pauli string text {text!r}") from None

    def text(self) -> str:
        return "".join(PAULI_CHARS[l] for l in self.labels)

    def dense(self) -> np.ndarray:
        return _dense_string(self.labels)

    def y_count(self) -> int:
        return sum(1 for l in self.labels if l == 2)


@lru_cache(maxsize=None)
def _dense_string(labels: tuple[int, ...]) -> np.ndarray:
    return linalg.kron_all(*(SIGMA[l] for l in labels))


@lru_cache(maxsize=8)
def string_order(n: int) -> tuple[tuple[int, ...], ...]:
    """All length-n label tuples in the canonical lexicographic order."""
    return tuple(sorted(product(range(4), repeat=n)))


@lru_cache(maxsize=4)
def dense_string_basis(n: int) -> np.ndarray:
    """Stack of all 4^n dense Pauli strings in canonical order."""
    return np.stack([_dense_string(l) for l in string_order(n)])


def dense(p: PauliString) -> np.ndarray:
    return p.dense()


def pauli_eigenbasis_sampler(p: PauliString) -> list[tuple[np.ndarray, np.ndarray, int]]:
    """Per-qubit measurement bases and sign flags for sampling Tr[sigma_x rho].

    For qubit j returns (|phi_0>, |phi_1>, f) where the projective outcome y
    contributes a sign (-1)^(y*f); f is 0 only for identity labels, whose
    outcome is ignored in the sign.
    """
    bases = {
        0: (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)),
        3: (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)),
        1: (np.array([1, 1], dtype=complex) / np.sqrt(2), np.array([1, -1], dtype=complex) / np.sqrt(2)),
        2: (np.array([1, 1j], dtype=complex) / np.sqrt(2), np.array([1, -1j], dtype=complex) / np.sqrt(2)),
    }
    out = []
    for l in p.labels:
        b0, b1 = bases[l]
        out.append((b0, b1, 0 if l == 0 else 1))
    return out


@dataclass
class PauliObservable:
    """Sparse coefficient expansion sum_x c_x sigma_x.

    Coefficients are real for Hermitian observables; complex coefficients are
    allowed (the expansion of a general matrix) and flip ``is_hermitian``.
    """

    n_qubits: int
    terms: dict[tuple[int, ...], complex] = field(default_factory=dict)
    term_cap: int | None = None

    def __post_init__(self) -> None:
        cap = self.term_cap if self.term_cap is not None else default_term_cap(self.n_qubits)
        self.term_cap = cap
        clean: dict[tuple[int, ...], complex] = {}
        for labels, coeff in self.terms.items():
            labels = tuple(labels)
            if len(labels) != self.n_qubits:
                raise ValueError(f"term {labels} has wrong length for {self.n_qubits} qubits")
            PauliString(labels)
            coeff = complex(coeff)
            if coeff != 0:
                clean[labels] = coeff
        if len(clean) > cap:
            raise ValueError(f"{len(clean)} terms exceeds cap {cap}")
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def from_text(cls, n_qubits: int, coeffs: Mapping[str, complex], term_cap: int | None = None) -> "PauliObservable":
        terms = {PauliString.from_text(t).labels: c for t, c in coeffs.items()}
        return cls(n_qubits, terms, term_cap)

    @property
    def is_hermitian(self) -> bool:
        return all(abs(c.imag) < 1e-14 for c in self.terms.values())

    def items(self) -> Iterator[tuple[PauliString, complex]]:
        for labels, coeff in self.terms.items():
            yield PauliString(labels), coeff

    def dense(self) -> np.ndarray:
        d = 2**self.n_qubits
        out = np.zeros((d, d), dtype=complex)
        for labels, coeff in self.terms.items():
            out += coeff * PauliString(labels).dense()
        return out

    def coeff_norm_sq(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.terms.values()))

    def coeff(self, labels: tuple[int, ...]) -> complex:
        return self.terms.get(tuple(labels), 0.0 + 0.0j)

    def expect(self, rho: np.ndarray) -> complex:
        return expect(self, rho)


def observable_dense(o: PauliObservable) -> np.ndarray:
    return o.dense()


def expect(o: PauliObservable, rho: np.ndarray) -> complex:
    """sum_x c_x Tr[sigma_x rho], evaluated exactly.

    Returns a real float for real-coefficient observables.
    """
    rho = np.asarray(rho, dtype=complex)
    d = 2**o.n_qubits
    if rho.shape != (d, d):
        raise ValueError(f"state shape {rho.shape} does not match {o.n_qubits} qubits")
    val = 0.0 + 0.0j
    for labels, coeff in o.terms.items():
        val += coeff * np.trace(PauliString(labels).dense() @ rho)
    if o.is_hermitian:
        return float(val.real)
    return complex(val)


@dataclass(frozen=True)
class WalshVector:
    """A tensor product of s_0 = (1,1) and s_1 = (1,-1); entries are +-1."""

    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.labels) < 1 or any(l not in (0, 1) for l in self.labels):
            raise ValueError(f"invalid Walsh labels {self.labels}")

    @property
    def n_bits(self) -> int:
        return len(self.labels)

    @classmethod
    def from_text(cls, text: str) -> "WalshVector":
        if not all(ch in "01" for ch in text):
            raise ValueError(f"invalid Walsh text {text!r}")
        return cls(tuple(int(ch) for ch in text))

    def text(self) -> str:
        return "".join(str(l) for l in self.labels)

    def dense(self) -> np.ndarray:
        out = WALSH[self.labels[0]]
        for l in self.labels[1:]:
            out = np.kron(out, WALSH[l])
        return out

    def sign(self, index: int) -> int:
        """Entry value at basis index (bits MSB-first), computed as (-1)^(x . i)."""
        bits = [(index >> (self.n_bits - 1 - j)) & 1 for j in range(self.n_bits)]
        return -1 if sum(l * b for l, b in zip(self.labels, bits)) % 2 else 1


def walsh_dot(w: WalshVector, p: np.ndarray) -> float:
    """Inner product s_x^T p; the expectation of (-1)^(x . I) under I ~ p."""
    p = np.asarray(p, dtype=float)
    if p.shape != (2**w.n_bits,):
        raise ValueError(f"vector length {p.shape} does not match {w.n_bits} bits")
    return float(w.dense() @ p)


@dataclass
class WalshObservable:
    """Sparse real coefficient expansion sum_x c_x s_x."""

    n_bits: int
    terms: dict[tuple[int, ...], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[tuple[int, ...], float] = {}
        for labels, coeff in self.terms.items():
            labels = tuple(labels)
            if len(labels) != self.n_bits:
                raise ValueError(f"term {labels} has wrong length for {self.n_bits} bits")
            WalshVector(labels)
            if coeff != 0:
                clean[labels] = float(coeff)
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def from_text(cls, n_bits: int, coeffs: Mapping[str, float]) -> "WalshObservable":
        return cls(n_bits, {WalshVector.from_text(t).labels: c for t, c in coeffs.items()})

    def items(self) -> Iterator[tuple[WalshVector, float]]:
        for labels, coeff in self.terms.items():
            yield WalshVector(labels), coeff

    def dense(self) -> np.ndarray:
        out = np.zeros(2**self.n_bits)
        for labels, coeff in self.terms.items():
            out += coeff * WalshVector(labels).dense()
        return out

    def coeff_norm_sq(self) -> float:
        return float(sum(c**2 for c in self.terms.values()))

    def coeff(self, labels: tuple[int, ...]) -> float:
        return self.terms.get(tuple(labels), 0.0)

    def dot(self, p: np.ndarray) -> float:
        return float(self.dense() @ np.asarray(p, dtype=float))
