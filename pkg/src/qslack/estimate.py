"""Primitive estimators: Pauli and Walsh expectations, trace overlaps, collisions.

Every estimator runs in one of two modes.  Exact mode returns the
infinite-shot value with zero standard error.  Shot mode emulates the
sampling distribution of the corresponding measurement procedure instead of
simulating it shot by shot: a +-1 observable with true mean m is drawn as
2*Binomial(N, (1+m)/2)/N - 1, a 0/1 collision variable as Binomial(N, m)/N,
and above 10^6 shots the binomial is replaced by its Gaussian limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .ansatz import ConvexCombinationState, PurificationState
from .pauli import PauliString, WalshVector

GAUSSIAN_SHOT_THRESHOLD = 10**6


@dataclass(frozen=True)
class ShotModel:
    """Either {"mode": "exact"} or {"mode": "shots", "n": N, "seed": s}."""

    mode: str = "exact"
    n: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in ("exact", "shots"):
            raise ValueError(f"unknown shot mode {self.mode!r}")
        if self.mode == "shots" and self.n < 1:
            raise ValueError("shot count must be >= 1")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @classmethod
    def from_dict(cls, d: dict) -> "ShotModel":
        mode = d.get("mode", "exact")
        return cls(mode=mode, n=int(float(d.get("n", 0))), seed=int(d.get("seed", 0)))


@dataclass(frozen=True)
class Estimate:
    value: float
    std_err: float = 0.0
    n_shots: int = 0


@dataclass(frozen=True)
class Prepared:
    """A realized state: dense density matrix, plus (p, U) when it was built
    as a convex combination, or a bare probability vector for classical
    distributions."""

    rho: np.ndarray | None = None
    dist: np.ndarray | None = None
    basis: np.ndarray | None = None

    @property
    def dense(self) -> np.ndarray:
        return self.rho if self.rho is not None else self.dist

    @property
    def is_cc(self) -> bool:
        return self.dist is not None and self.basis is not None


def prepare(template, params: np.ndarray) -> Prepared:
    """Realize an ansatz template at the given parameters."""
    if isinstance(template, ConvexCombinationState):
        p = template.distribution(params)
        u = template.basis_unitary(params)
        return Prepared(rho=(u * p) @ u.conj().T, dist=p, basis=u)
    if isinstance(template, PurificationState):
        return Prepared(rho=template.realize(params))
    realize = getattr(template, "realize", None)
    if realize is None:
        raise TypeError(f"cannot prepare object of type {type(template)!r}")
    out = realize(params)
    if out.ndim == 1:
        return Prepared(dist=out)
    return Prepared(rho=out)


def as_prepared(x) -> Prepared:
    if isinstance(x, Prepared):
        return x
    x = np.asarray(x)
    if x.ndim == 1:
        return Prepared(dist=np.asarray(x, dtype=float))
    return Prepared(rho=np.asarray(x, dtype=complex))


class Estimator:
    """Draws estimates of the primitive quantities under a ShotModel.

    A single generator drives all draws, so a seeded estimator yields a
    reproducible noise stream; independent terms consume independent draws.
    """

    def __init__(self, shots: ShotModel | None = None, rng: np.random.Generator | None = None):
        self.shots = shots if shots is not None else ShotModel()
        self.rng = rng if rng is not None else np.random.default_rng(self.shots.seed)

    # -- core emulators ----------------------------------------------------
    def _pm_one(self, mean: float) -> Estimate:
        mean = float(mean)
        if self.shots.exact:
            return Estimate(mean)
        n = self.shots.n
        if n > GAUSSIAN_SHOT_THRESHOLD:
            sd = math.sqrt(max(0.0, 1.0 - mean**2) / n)
            val = mean + sd * self.rng.standard_normal()
        else:
            p = min(1.0, max(0.0, (1.0 + mean) / 2.0))
            val = 2.0 * self.rng.binomial(n, p) / n - 1.0
        return Estimate(val, math.sqrt(max(0.0, 1.0 - val**2) / n), n)

    def _bernoulli(self, mean: float) -> Estimate:
        mean = float(mean)
        if self.shots.exact:
            return Estimate(mean)
        n = self.shots.n
        p = min(1.0, max(0.0, mean))
        if n > GAUSSIAN_SHOT_THRESHOLD:
            sd = math.sqrt(p * (1.0 - p) / n)
            val = mean + sd * self.rng.standard_normal()
        else:
            val = self.rng.binomial(n, p) / n
        return Estimate(val, math.sqrt(max(0.0, val * (1.0 - val)) / n), n)

    @staticmethod
    def exact_scalar(value: float) -> Estimate:
        """A term computed from stored coefficients; no sampling involved."""
        return Estimate(float(value))

    # -- primitives --------------------------------------------------------
    def pauli_expect(self, state, p: PauliString) -> Estimate:
        rho = as_prepared(state).rho
        if rho.shape != (2**p.n_qubits, 2**p.n_qubits):
            raise ValueError("state dimension does not match Pauli string length")
        mean = float(np.einsum("ij,ji->", p.dense(), rho).real)
        return self._pm_one(mean)

    def overlap(self, a, b) -> Estimate:
        """Destructive-swap-test estimate of Tr[rho_a rho_b]."""
        ra, rb = as_prepared(a).rho, as_prepared(b).rho
        if ra.shape != rb.shape:
            raise ValueError(f"state shape mismatch {ra.shape} vs {rb.shape}")
        mean = float(np.einsum("ij,ji->", ra, rb).real)
        return self._pm_one(mean)

    def purity(self, a) -> Estimate:
        """Tr[rho^2]; convex-combination states use the collision test on
        their eigenvalue distribution, which carries the same mean."""
        a = as_prepared(a)
        if a.dist is not None:
            return self.collision(a.dist, a.dist)
        return self.overlap(a, a)

    def loschmidt(self, first, other) -> Estimate:
        """Trace-overlap estimate that runs one circuit against the other:
        outcome statistics are a collision between p and the distribution of
        basis measurements of the second state in the first state's frame."""
        first = as_prepared(first)
        if not first.is_cc:
            raise ValueError("loschmidt estimation needs a convex-combination first argument")
        other = as_prepared(other)
        u = first.basis
        if other.is_cc:
            r = np.abs(u.conj().T @ other.basis) ** 2
            t = r @ other.dist
        else:
            t = np.real(np.diag(u.conj().T @ other.rho @ u))
        mean = float(first.dist @ t)
        return self._bernoulli(mean)

    def collision(self, p: np.ndarray, q: np.ndarray) -> Estimate:
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        if p.shape != q.shape:
            raise ValueError(f"length mismatch {p.shape} vs {q.shape}")
        return self._bernoulli(float(p @ q))

    def walsh_expect(self, state, w: WalshVector) -> Estimate:
        p = as_prepared(state).dist
        return self._pm_one(float(w.dense() @ p))


# -- functional op surface -------------------------------------------------

def estimate_pauli_expect(rho, p: PauliString, shots: ShotModel, rng: np.random.Generator | None = None) -> Estimate:
    return Estimator(shots, rng).pauli_expect(rho, p)


def estimate_overlap_swap(rho, sigma, shots: ShotModel, rng: np.random.Generator | None = None) -> Estimate:
    return Estimator(shots, rng).overlap(rho, sigma)


def estimate_overlap_loschmidt(first, other, shots: ShotModel, rng: np.random.Generator | None = None) -> Estimate:
    return Estimator(shots, rng).loschmidt(first, other)


def estimate_collision(p, q, shots: ShotModel, rng: np.random.Generator | None = None) -> Estimate:
    return Estimator(shots, rng).collision(p, q)


def hoeffding_shots(epsilon: float, delta: float) -> int:
    """Smallest T with T >= ln(2/delta) / (2 epsilon^2)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    bound = math.log(2.0 / delta) / (2.0 * epsilon**2)
    return max(1, math.ceil(bound - 1e-12))
