"""Seeded randomness and the coalition distributions behind the estimators.

Everything random in this package flows through a ``numpy.random.Generator``
seeded with a 64-bit integer (PCG64, period 2^128): equal seeds give
bit-identical draw sequences for a fixed library version on one platform.
Parallel workers derive their own seeds via :func:`derive_seed`.

The estimators need four families of coalition laws, all of which factor
into "draw a size, then draw a uniform set of that size":

* the marginal-weight law over subsets of the other players, whose size
  marginal is uniform on ``{0..n-1}``;
* the positive law over nonempty coalitions,
  ``P(S) = 1 / (|S| * C(n,|S|) * H_n)``;
* the negative law over proper coalitions,
  ``P(S) = 1 / ((n-|S|) * C(n,|S|) * H_n)``;
* a size law over ``{2..n-2}`` balanced so that every per-size stratum of
  every player receives the same weight in the error analysis.
"""

from __future__ import annotations

import functools
import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .core import Coalition
from .errors import DomainError

Rng = np.random.Generator


def make_rng(seed: int | None = None) -> Rng:
    """A PCG64 generator; ``None`` seeds from OS entropy."""
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(master: int, *parts: object) -> int:
    """Stable 64-bit child seed from a master seed and context labels.

    Splitmix-style derivation via a keyed hash of the canonical string
    forms, so (master, labels) -> seed is reproducible across processes
    and platforms. Used to give every (game, algorithm, budget, rep)
    cell and every worker its own independent stream.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(master)).encode())
    for part in parts:
        h.update(b"|")
        h.update(str(part).encode())
    return int.from_bytes(h.digest(), "little")


def harmonic_number(n: int) -> float:
    """The n-th harmonic number ``sum_{k=1..n} 1/k``, summed smallest-term-first."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    total = 0.0
    for k in range(n, 0, -1):
        total += 1.0 / k
    return total


@dataclass
class SizeDistribution:
    """A probability distribution over coalition sizes.

    ``support`` holds the sizes in ascending order, ``probs`` their
    probabilities, and ``cumulative`` the prefix sums used for
    inverse-CDF sampling. ``renormalized`` flags that the constructing
    formula's mass missed 1 by more than 1e-9 and was rescaled.
    Immutable after construction and freely shareable.
    """

    support: np.ndarray
    probs: np.ndarray
    cumulative: np.ndarray
    renormalized: bool = False

    @classmethod
    def from_probs(
        cls, support, probs, renormalize_tol: float | None = None
    ) -> "SizeDistribution":
        support = np.asarray(support, dtype=np.int64)
        probs = np.asarray(probs, dtype=np.float64)
        if support.ndim != 1 or support.shape != probs.shape or support.size == 0:
            raise DomainError("support and probs must be matching 1-d arrays")
        if np.any(probs < 0.0):
            raise DomainError("negative probability")
        mass = float(probs.sum())
        renormalized = False
        if renormalize_tol is not None and abs(mass - 1.0) > renormalize_tol:
            probs = probs / mass
            renormalized = True
        elif abs(mass - 1.0) > 1e-12:
            raise DomainError(f"probabilities sum to {mass!r}, not 1")
        return cls(support, probs, np.cumsum(probs), renormalized)

    def sample(self, rng: Rng) -> int:
        idx = int(np.searchsorted(self.cumulative, rng.random(), side="right"))
        if idx >= self.support.size:  # guards the cumulative's float endpoint
            idx = self.support.size - 1
        return int(self.support[idx])

    def prob_of(self, size: int) -> float:
        hits = np.nonzero(self.support == size)[0]
        return float(self.probs[hits[0]]) if hits.size else 0.0


@functools.lru_cache(maxsize=None)
def positive_size_distribution(n: int) -> SizeDistribution:
    """Size marginal of the positive coalition law: ``P(l) = 1/(l * H_n)`` on 1..n."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    h = harmonic_number(n)
    sizes = np.arange(1, n + 1)
    return SizeDistribution.from_probs(sizes, 1.0 / (sizes * h))


@functools.lru_cache(maxsize=None)
def negative_size_distribution(n: int) -> SizeDistribution:
    """Size marginal of the negative coalition law: ``P(l) = 1/((n-l) * H_n)`` on 0..n-1."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    h = harmonic_number(n)
    sizes = np.arange(0, n)
    return SizeDistribution.from_probs(sizes, 1.0 / ((n - sizes) * h))


@functools.lru_cache(maxsize=None)
def balanced_size_distribution(n: int) -> SizeDistribution:
    """The stratum-balancing size law over ``{2..n-2}``.

    Two-branch definition (log is the natural logarithm). For even n:

        P(s) = (n log n - 1) / (2 s n log n (H_{n/2-1} - 1))    if s <= (n-2)/2
        P(s) = 1 / (n log n)                                    if s == n/2
        P(s) = (n log n - 1) / (2 (n-s) n log n (H_{n/2-1} - 1)) otherwise

    and for odd n:

        P(s) = 1 / (2 s (H_{(n-1)/2} - 1))                      if s <= (n-1)/2
        P(s) = 1 / (2 (n-s) (H_{(n-1)/2} - 1))                  otherwise.

    n = 4 degenerates to the single size 2, where the even branch has no
    mass to give, so P(2) = 1 by definition. Any residual mass defect
    beyond 1e-9 is renormalized with the diagnostic flag set; for n >= 5
    the formula sums to 1 exactly (pair s with n-s).
    """
    if n < 4:
        raise DomainError(f"need n >= 4, got {n}")
    sizes = np.arange(2, n - 1)
    if n == 4:
        return SizeDistribution.from_probs(sizes, [1.0])
    probs = np.empty(sizes.size, dtype=np.float64)
    if n % 2 == 0:
        nlogn = n * math.log(n)
        scale = (nlogn - 1.0) / (2.0 * nlogn * (harmonic_number(n // 2 - 1) - 1.0))
        for j, s in enumerate(sizes):
            if s <= (n - 2) // 2:
                probs[j] = scale / s
            elif s == n // 2:
                probs[j] = 1.0 / nlogn
            else:
                probs[j] = scale / (n - s)
    else:
        scale = 1.0 / (2.0 * (harmonic_number((n - 1) // 2) - 1.0))
        for j, s in enumerate(sizes):
            probs[j] = scale / s if s <= (n - 1) // 2 else scale / (n - s)
    return SizeDistribution.from_probs(sizes, probs, renormalize_tol=1e-9)


@functools.lru_cache(maxsize=None)
def uniform_size_distribution(lo: int, hi: int) -> SizeDistribution:
    """Uniform law over the integer sizes ``lo..hi`` inclusive."""
    if hi < lo:
        raise DomainError(f"empty size range {lo}..{hi}")
    count = hi - lo + 1
    return SizeDistribution.from_probs(np.arange(lo, hi + 1), np.full(count, 1.0 / count))


def positive_coalition_pmf(n: int, size: int) -> float:
    """Probability of one specific nonempty coalition of ``size`` under the positive law."""
    if not 1 <= size <= n:
        raise DomainError(f"size {size} outside 1..{n}")
    return 1.0 / (size * math.comb(n, size) * harmonic_number(n))


def negative_coalition_pmf(n: int, size: int) -> float:
    """Probability of one specific proper coalition of ``size`` under the negative law."""
    if not 0 <= size <= n - 1:
        raise DomainError(f"size {size} outside 0..{n - 1}")
    return 1.0 / ((n - size) * math.comb(n, size) * harmonic_number(n))


def sample_permutation(rng: Rng, n: int) -> np.ndarray:
    """A uniformly random ordering of the players 0..n-1."""
    return rng.permutation(n)


def sample_uniform_subset(rng: Rng, n: int, s: int) -> Coalition:
    """A uniformly random coalition of exactly ``s`` of the n players."""
    if not 0 <= s <= n:
        raise DomainError(f"subset size {s} outside 0..{n}")
    if s == 0:
        return Coalition(0, n)
    if s == n:
        return Coalition((1 << n) - 1, n)
    bits = 0
    for j in rng.permutation(n)[:s]:
        bits |= 1 << int(j)
    return Coalition(bits, n)


def sample_weighted_subset(rng: Rng, n: int, i: int) -> Coalition:
    """A subset of the players other than ``i`` under the marginal-weight law.

    The law puts probability ``1 / (n * C(n-1, s))`` on each subset of
    size s, i.e. the size is uniform on 0..n-1 and the set uniform given
    its size.
    """
    if not 0 <= i < n:
        raise DomainError(f"player {i} outside 0..{n - 1}")
    s = int(rng.integers(n))
    if s == 0:
        return Coalition(0, n)
    bits = 0
    for j in rng.permutation(n - 1)[:s]:
        j = int(j)
        bits |= 1 << (j + 1 if j >= i else j)
    return Coalition(bits, n)


def sample_positive_coalition(rng: Rng, n: int) -> Coalition:
    """A nonempty coalition under the positive law (size first, then uniform set)."""
    return sample_uniform_subset(rng, n, positive_size_distribution(n).sample(rng))


def sample_negative_coalition(rng: Rng, n: int) -> Coalition:
    """A proper (possibly empty) coalition under the negative law."""
    return sample_uniform_subset(rng, n, negative_size_distribution(n).sample(rng))
