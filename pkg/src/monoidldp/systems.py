"""Prime systems: generators of prime norms satisfying the counting axioms.

A prime system produces, for any threshold X, the complete finite multiset
of primes of norm <= X, each a (norm, label) pair with norm >= 2. Labels are
unique within a system; norms may repeat (distinct primes of equal norm are
distinct generators of the monoid). Output is sorted by (norm, label) and is
a pure function of (system, X), so prefixes are stable: restricting the list
for X to norms <= X' reproduces the list for X'.

Four systems are provided:

  Integers        rational primes, norm p (Eratosthenes sieve)
  PolyOverFq(q)   monic irreducibles over GF(q), norm q^deg, q in {2,..,9}
  QuadraticField  prime ideals of Q(sqrt(D)) for a fundamental discriminant
                  D, |D| <= 100, split per the Kronecker symbol (D/p)
  Beurling        an explicit norm sequence from a file or inline tuple

The module also carries the counting diagnostics used to probe the axioms
at finite X: a linear-density fit for "count = aX + O(X^b)", the Chebyshev
ratio pi_P(X) log X / X, and the Mertens sum of reciprocal norms whose
deviation from log log X should stabilize.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateGrid, ParameterError, SourceError
from .gfpoly import SUPPORTED_Q, irreducible_indices, monic_label


class PrimeEntry(NamedTuple):
    norm: int
    label: str


@dataclass(frozen=True)
class Integers:
    @property
    def key(self) -> str:
        return "integers"

    def _entries(self, X: int) -> list[PrimeEntry]:
        return [PrimeEntry(int(p), str(int(p))) for p in primes_upto(X)]


@dataclass(frozen=True)
class PolyOverFq:
    q: int

    def __post_init__(self):
        if self.q not in SUPPORTED_Q:
            raise ParameterError(
                f"q must be a prime power <= 9 (one of {SUPPORTED_Q}), got {self.q}"
            )

    @property
    def key(self) -> str:
        return f"poly:{self.q}"

    def _entries(self, X: int) -> list[PrimeEntry]:
        out = []
        d, norm = 1, self.q
        while norm <= X:
            for idx in irreducible_indices(self.q, d):
                out.append(PrimeEntry(norm, monic_label(self.q, d, idx)))
            d += 1
            norm *= self.q
        return out


@dataclass(frozen=True)
class QuadraticField:
    D: int

    def __post_init__(self):
        if abs(self.D) > 100 or not _is_fundamental_discriminant(self.D):
            raise ParameterError(
                f"D must be a fundamental discriminant with |D| <= 100, got {self.D}"
            )

    @property
    def key(self) -> str:
        return f"quad:{self.D}"

    def _entries(self, X: int) -> list[PrimeEntry]:
        out = []
        for p in primes_upto(X):
            p = int(p)
            chi = kronecker_at_prime(self.D, p)
            if chi == 1:
                out.append(PrimeEntry(p, f"({p},s1)"))
                out.append(PrimeEntry(p, f"({p},s2)"))
            elif chi == 0:
                out.append(PrimeEntry(p, f"({p},r)"))
            elif p * p <= X:
                # inert: the prime ideal (p) has norm p^2
                out.append(PrimeEntry(p * p, f"({p},i)"))
        return out


@dataclass(frozen=True)
class Beurling:
    norms: tuple[int, ...]
    source: str = "inline"

    def __post_init__(self):
        for n in self.norms:
            if not isinstance(n, int) or n < 2:
                raise SourceError(f"Beurling norms must be integers >= 2, got {n!r}")

    @classmethod
    def from_norms(cls, norms: Sequence[int]) -> "Beurling":
        return cls(tuple(int(n) for n in norms))

    @classmethod
    def from_file(cls, path: str) -> "Beurling":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise SourceError(f"cannot read Beurling file {path}: {e}") from e
        norms = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                n = int(line)
            except ValueError:
                raise SourceError(f"{path}:{lineno}: not an integer norm: {line!r}") from None
            if n < 2:
                raise SourceError(f"{path}:{lineno}: norm must be >= 2, got {n}")
            norms.append(n)
        return cls(tuple(norms), source=str(path))

    @property
    def key(self) -> str:
        return f"beurling:{self.source}"

    def _entries(self, X: int) -> list[PrimeEntry]:
        return [
            PrimeEntry(n, f"beurling#{i}")
            for i, n in enumerate(self.norms, start=1)
            if n <= X
        ]


PrimeSystem = Integers | PolyOverFq | QuadraticField | Beurling


@functools.lru_cache(maxsize=8)
def primes_upto(X: int) -> np.ndarray:
    """Rational primes <= X, ascending. Callers must not mutate the array."""
    if X < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(X + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(X) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _squarefree(m: int) -> bool:
    m = abs(m)
    d = 2
    while d * d <= m:
        if m % (d * d) == 0:
            return False
        d += 1
    return True


def _is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def kronecker_at_prime(D: int, p: int) -> int:
    """Kronecker symbol (D/p) for a rational prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = D % p
    if r == 0:
        return 0
    # Euler's criterion
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


@functools.lru_cache(maxsize=64)
def list_primes(system: PrimeSystem, X: int) -> tuple[PrimeEntry, ...]:
    """All primes of the system with norm <= X, sorted by (norm, label)."""
    if X < 1:
        raise ParameterError(f"X must be >= 1, got {X}")
    entries = system._entries(X)
    entries.sort(key=lambda e: (e.norm, e.label))
    return tuple(entries)


def count_elements(system: PrimeSystem, X: int) -> int:
    """Number of monoid elements of norm <= X, identity included."""
    if X < 1:
        raise ParameterError(f"X must be >= 1, got {X}")
    if isinstance(system, Integers):
        return int(X)
    from .monoid import count_by_enumeration

    return count_by_enumeration(system, X)


@dataclass(frozen=True)
class DensityFit:
    """Least-squares probe of count(X) = a*X + O(X^b).

    a_hat is the density at the largest supported threshold; slope is the
    raw log-log regression slope of the residual magnitudes and b_hat its
    clamp to [0, 1) territory (a negative slope still satisfies the O(X^b)
    bound, with b = 0). status is EXACT when every residual vanishes, FAILED
    when slope >= 1 or some residual reaches half the main term, OK else.
    """

    grid: tuple[int, ...]
    counts: tuple[int, ...]
    a_hat: float
    b_hat: float
    slope: float
    residuals: tuple[tuple[int, float], ...]
    status: str
    unsupported: tuple[int, ...] = dc_field(default_factory=tuple)


def density_fit(system: PrimeSystem, grid: Sequence[int]) -> DensityFit:
    grid = [int(x) for x in grid]
    if len(grid) < 4 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise DegenerateGrid("density grid must be >= 4 strictly increasing thresholds")
    unsupported: tuple[int, ...] = ()
    if isinstance(system, PolyOverFq):
        # count(X) is a step function, constant between powers of q; the
        # linear-density axiom only holds along X = q^n
        supported = [x for x in grid if _is_power_of(x, system.q)]
        unsupported = tuple(x for x in grid if x not in supported)
        if len(supported) < 4:
            raise DegenerateGrid(
                f"need >= 4 thresholds that are powers of q={system.q}; "
                f"got {len(supported)} (others are flagged unsupported)"
            )
        grid = supported
    counts = [count_elements(system, x) for x in grid]
    a_hat = counts[-1] / grid[-1]
    residuals = [(x, c - a_hat * x) for x, c in zip(grid, counts)]
    if all(r == 0.0 for _, r in residuals):
        return DensityFit(tuple(grid), tuple(counts), a_hat, 0.0, 0.0,
                          tuple(residuals), "EXACT", unsupported)
    pts = [(math.log(x), math.log(abs(r))) for x, r in residuals if r != 0.0]
    if len(pts) >= 2:
        xs = np.array([u for u, _ in pts])
        ys = np.array([v for _, v in pts])
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = 0.0
    max_rel = max(abs(r) / (a_hat * x) for x, r in residuals)
    status = "FAILED" if (slope >= 1.0 or max_rel >= 0.5) else "OK"
    # a negative slope over-satisfies the O(X^b) bound; report b = 0 then.
    # b_hat may sit outside [0, 1) only on the FAILED branch.
    b_hat = max(slope, 0.0)
    return DensityFit(tuple(grid), tuple(counts), a_hat, b_hat, slope,
                      tuple(residuals), status, unsupported)


def _is_power_of(x: int, q: int) -> bool:
    if x < 1:
        return False
    while x % q == 0:
        x //= q
    return x == 1


def prime_count_check(system: PrimeSystem, X: int) -> float:
    """pi_P(X) * log X / X; bounded over a grid when pi_P(X) = O(X/log X)."""
    if X < 3:
        raise ParameterError(f"prime_count_check needs X >= 3, got {X}")
    return len(list_primes(system, X)) * math.log(X) / X


def mertens_sum(system: PrimeSystem, X: int) -> tuple[float, float]:
    """(sum of 1/N(p) over norms <= X with multiplicity, sum - log log X)."""
    if X < 3:
        raise ParameterError(f"mertens_sum needs X >= 3, got {X}")
    total = math.fsum(1.0 / e.norm for e in list_primes(system, X))
    return total, total - math.log(math.log(X))
