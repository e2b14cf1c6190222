"""Randomness engines: index draws, multiplier weights, SGD paths,
permutation and sign-flip draws, and the benchmark samplers.

Seeding model
-------------
Every draw is a pure function of a :class:`SeedSpec`, i.e. a
(master_seed, stream_id) pair mapped through a counter-based Philox
generator.  Streams are pre-split: stream_id = replicate * 2**16 +
resample (:func:`stream_for`), so a replicate's b-th resample sees the
same bits no matter how work is scheduled across threads.

Non-uniform laws are derived from the base generator by explicit
transforms (inverse CDF for exponential and Laplace, ratio and sum of
squared normals for Student-t and chi-square) rather than library
samplers, so the draw algorithm itself is part of the contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InvalidInput, NumericalFailure

__all__ = [
    "SeedSpec",
    "SgdSpec",
    "PairStream",
    "PermutationGroup",
    "full_symmetric",
    "stream_for",
    "generator",
    "bootstrap_indices",
    "subsample_indices",
    "sgd_path",
    "sgd_paths",
    "signflip_transform",
    "permutation_draw",
    "setting_sampler",
    "setting_truth",
]

RESAMPLE_STRIDE = 2**16
_U64 = 2**64


@dataclass(frozen=True)
class SeedSpec:
    """A (master_seed, stream_id) pair naming one independent stream."""

    master_seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        for name in ("master_seed", "stream_id"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= int(v) < _U64:
                raise InvalidInput(f"{name} must be an integer in [0, 2**64)")


def stream_for(replicate: int, resample: int = 0) -> int:
    """Stream id for a (replicate, resample) slot.

    Resamples within a replicate occupy a contiguous block of 2**16
    stream ids, so replicate streams never collide with resample
    streams regardless of execution order.
    """
    if not 0 <= resample < RESAMPLE_STRIDE:
        raise InvalidInput(f"resample index must lie in [0, {RESAMPLE_STRIDE})")
    if replicate < 0 or replicate * RESAMPLE_STRIDE + resample >= _U64:
        raise InvalidInput("replicate index out of the 64-bit stream range")
    return replicate * RESAMPLE_STRIDE + resample


def generator(seed: SeedSpec) -> np.random.Generator:
    """The Philox generator for a stream; value-semantic and cheap."""
    ss = np.random.SeedSequence(seed.master_seed, spawn_key=(seed.stream_id,))
    return np.random.Generator(np.random.Philox(ss))


def _exponential(u: np.ndarray, rate: float = 1.0) -> np.ndarray:
    # inverse CDF; -log1p(-u) is exact near u = 0
    return -np.log1p(-u) / rate


def _laplace(u: np.ndarray) -> np.ndarray:
    v = u - 0.5
    return np.sign(v) * -np.log1p(-2.0 * np.abs(v))


def _student_t5(gen: np.random.Generator, n: int) -> np.ndarray:
    z = gen.standard_normal((n, 6))
    return z[:, 0] / np.sqrt(np.sum(z[:, 1:] ** 2, axis=1) / 5.0)


def bootstrap_indices(m: int, seed: SeedSpec) -> np.ndarray:
    """m IID uniform indices in [0, m), i.e. one bootstrap resample."""
    if m < 1:
        raise InvalidInput("m must be >= 1")
    return generator(seed).integers(0, m, size=m)


def subsample_indices(m: int, k: int, seed: SeedSpec) -> np.ndarray:
    """A uniformly random k-subset of [0, m), sorted, without replacement."""
    if not 1 <= k <= m:
        raise InvalidInput(f"need 1 <= k <= m, got k={k}, m={m}")
    return np.sort(generator(seed).permutation(m)[:k])


def signflip_transform(x, mask_seed: SeedSpec) -> np.ndarray:
    """Flip each entry's sign by an IID fair coin; an involution in the seed."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise InvalidInput("x must be a nonempty 1-d vector")
    signs = 1 - 2 * generator(mask_seed).integers(0, 2, size=x.size)
    return x * signs


@dataclass(frozen=True)
class PermutationGroup:
    """Either the full symmetric group on m points or an explicit list.

    ``perms`` is None for the full group; otherwise a tuple of
    length-m index tuples (each must be a permutation of range(m)).
    """

    m: int
    perms: Optional[tuple] = None

    def __post_init__(self) -> None:
        if self.m < 1:
            raise InvalidInput("m must be >= 1")
        if self.perms is not None:
            if len(self.perms) == 0:
                raise InvalidInput("explicit permutation list must be nonempty")
            ref = tuple(range(self.m))
            for p in self.perms:
                if tuple(sorted(p)) != ref:
                    raise InvalidInput(f"{p!r} is not a permutation of range({self.m})")

    @property
    def size(self) -> Optional[int]:
        """|G| when known; None for the full group with m > 20 (overflow-safe)."""
        if self.perms is not None:
            return len(self.perms)
        import math

        return math.factorial(self.m)


def full_symmetric(m: int) -> PermutationGroup:
    """The full symmetric group on m points."""
    return PermutationGroup(m=m)


def permutation_draw(G: PermutationGroup, seed: SeedSpec) -> np.ndarray:
    """One uniform element of G (Fisher-Yates for the full group)."""
    gen = generator(seed)
    if G.perms is None:
        return gen.permutation(G.m)
    idx = int(gen.integers(0, len(G.perms)))
    return np.asarray(G.perms[idx], dtype=np.int64)


@dataclass(frozen=True)
class SgdSpec:
    """Configuration of the averaged-SGD recursion.

    The step n update is theta -= gamma1 * n**(-tau_exp) * w_n *
    gradient(theta, data[n-1]); w_n is 1 under weight_law None (or
    "degenerate_one") and an IID mean-1 variance-1 draw under
    "exponential".  The returned estimate is the mean of the iterates
    after the first ``burn_in`` steps.
    """

    dim: int
    gamma1: float
    tau_exp: float
    burn_in: int
    n_total: int
    gradient: Optional[Callable] = None
    weight_law: Optional[str] = None

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise InvalidInput("dim must be >= 1")
        if not self.gamma1 > 0:
            raise InvalidInput("gamma1 must be positive")
        if not 0.5 < self.tau_exp < 1.0:
            raise InvalidInput("tau_exp must lie in (0.5, 1)")
        if not 0 <= self.burn_in < self.n_total:
            raise InvalidInput("need 0 <= burn_in < n_total")
        if self.weight_law not in (None, "none", "exponential", "degenerate_one"):
            raise InvalidInput(f"unknown weight_law {self.weight_law!r}")


def _weight_matrix(spec: SgdSpec, seeds: Sequence[Optional[SeedSpec]]) -> np.ndarray:
    w = np.ones((spec.n_total, len(seeds)))
    if spec.weight_law == "exponential":
        for j, s in enumerate(seeds):
            if s is not None:
                w[:, j] = _exponential(generator(s).random(spec.n_total))
    return w


def sgd_path(spec: SgdSpec, data, theta0, seed: Optional[SeedSpec] = None) -> np.ndarray:
    """One averaged-SGD path; returns the post-burn-in iterate mean.

    ``data`` must support integer indexing up to n_total - 1.  The
    weight stream (when the law needs one) comes entirely from
    ``seed``, so two paths over the same data differ only through
    their weights.
    """
    if spec.gradient is None:
        raise InvalidInput("spec.gradient callback is required")
    theta = np.array(theta0, dtype=float)
    if theta.shape != (spec.dim,):
        raise InvalidInput(f"theta0 must have shape ({spec.dim},)")
    w = _weight_matrix(spec, [seed])[:, 0]
    total = np.zeros(spec.dim)
    for n in range(1, spec.n_total + 1):
        g = np.asarray(spec.gradient(theta, data[n - 1]), dtype=float)
        if not np.all(np.isfinite(g)):
            raise NumericalFailure("non-finite gradient", step=n)
        theta = theta - spec.gamma1 * n ** (-spec.tau_exp) * w[n - 1] * g
        if n > spec.burn_in:
            total += theta
    return total / (spec.n_total - spec.burn_in)


def sgd_paths(
    spec: SgdSpec,
    data,
    theta0,
    seeds: Sequence[Optional[SeedSpec]],
    gradient_batch: Optional[Callable] = None,
) -> np.ndarray:
    """Run len(seeds) paths in lockstep over one data stream.

    Column j reproduces ``sgd_path(spec, data, theta0, seeds[j])``
    bit for bit; a None seed means unit weights.  ``gradient_batch``
    maps (thetas of shape (P, dim), data point) to a (P, dim) gradient
    stack; without it the scalar callback is looped.
    """
    P = len(seeds)
    if P < 1:
        raise InvalidInput("need at least one path")
    theta = np.tile(np.array(theta0, dtype=float), (P, 1))
    if theta.shape != (P, spec.dim):
        raise InvalidInput(f"theta0 must have shape ({spec.dim},)")
    if gradient_batch is None:
        if spec.gradient is None:
            raise InvalidInput("either gradient_batch or spec.gradient is required")

        def gradient_batch(ths, point):
            return np.stack([np.asarray(spec.gradient(t, point), float) for t in ths])

    w = _weight_matrix(spec, seeds)
    total = np.zeros((P, spec.dim))
    for n in range(1, spec.n_total + 1):
        g = np.asarray(gradient_batch(theta, data[n - 1]), dtype=float)
        if not np.all(np.isfinite(g)):
            bad = int(np.flatnonzero(~np.isfinite(g).all(axis=1))[0])
            raise NumericalFailure(f"non-finite gradient on path {bad}", step=n)
        theta = theta - spec.gamma1 * n ** (-spec.tau_exp) * w[n - 1][:, None] * g
        if n > spec.burn_in:
            total += theta
    return total / (spec.n_total - spec.burn_in)


class PairStream:
    """An (X_i, Y_i) stream backed by two aligned arrays."""

    __slots__ = ("x", "y")

    def __init__(self, x: np.ndarray, y: np.ndarray) -> None:
        if len(x) != len(y):
            raise InvalidInput("x and y must have equal length")
        self.x = x
        self.y = y

    def __len__(self) -> int:
        return len(self.x)

    def __getitem__(self, i):
        return self.x[i], self.y[i]


_SETTING_4_THETA = np.array([0.2, -0.2, 0.0])


def setting_sampler(setting: int, params: dict, seed: SeedSpec):
    """Draw one dataset for benchmark setting 1-4.

    1: m Exponential(rate 5) values; target is the mean, 0.2.
    2: m rows of T * (V_1, ..., V_d) with T Student-t(5) and V_j
       chi-square(1); target is the zero mean vector, d defaults 100.
    3: m Uniform(0, 1) values; target is the endpoint 1, estimator max.
    4: an (X, Y) stream of length n with X standard normal in R^3 and
       Y = X'theta + Laplace(0, 1) noise, theta = (0.2, -0.2, 0).
    """
    gen = generator(seed)
    if setting == 1:
        m = int(params["m"])
        if m < 1:
            raise InvalidInput("m must be >= 1")
        return _exponential(gen.random(m), rate=5.0)
    if setting == 2:
        m = int(params["m"])
        d = int(params.get("d", 100))
        if m < 1 or d < 1:
            raise InvalidInput("m and d must be >= 1")
        t = _student_t5(gen, m)
        v = gen.standard_normal((m, d)) ** 2
        return t[:, None] * v
    if setting == 3:
        m = int(params["m"])
        if m < 1:
            raise InvalidInput("m must be >= 1")
        return gen.random(m)
    if setting == 4:
        n = int(params["n"])
        if n < 1:
            raise InvalidInput("n must be >= 1")
        x = gen.standard_normal((n, 3))
        eps = _laplace(gen.random(n))
        return PairStream(x, x @ _SETTING_4_THETA + eps)
    raise InvalidInput(f"unknown setting {setting!r}")


def setting_truth(setting: int, params: Optional[dict] = None):
    """The true parameter targeted in each benchmark setting."""
    if setting == 1:
        return 0.2
    if setting == 2:
        d = int((params or {}).get("d", 100))
        return np.zeros(d)
    if setting == 3:
        return 1.0
    if setting == 4:
        return _SETTING_4_THETA.copy()
    raise InvalidInput(f"unknown setting {setting!r}")
