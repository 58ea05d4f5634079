"""Exact divisor-indicator expectations and their Bernoulli surrogates.

Z_p is the indicator that the prime p divides a uniformly chosen monoid
element of norm <= X; Y_p is an independent Bernoulli(1/N(p)) surrogate.
For distinct primes the expectation of a Z-product is exactly

    count(floor(X / prod N(p_i))) / count(X),

a ratio of element counts, because the elements divisible by all the p_i
are those of the form m * prod p_i with N(m) below the floored threshold.
The Y-product expectation is 1 / prod N(p_i). Their ratio is bounded by a
constant M, observed here by exhaustive tuple search.

Truncation splits the primes of norm <= X at k_X = X^(1/(log log X)^2):
B holds the small norms (N(p) <= k_X, |g(p)| <= C), A the large ones, T the
primes with |g(p)| > C. Over B both moment generating functions are cheap
to compute exactly, and their gap is the quantity that the coupling argument
drives to zero as X grows; tail_mass is the corresponding T-side integral
against the empirical measure rho_X.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .additive import AdditiveFunction
from .errors import (
    BudgetExceeded,
    EmptySystem,
    MgfOverflow,
    ParameterError,
    PrimeNotInSystem,
)
from .monoid import DEFAULT_BUDGET, Budget, enumerate_monoid
from .systems import PrimeEntry, PrimeSystem, count_elements, list_primes

# product flagged as overflowing once it exceeds 1e300
_LOG_OVERFLOW = 300.0 * math.log(10.0)


@dataclass(frozen=True)
class ExactExpectation:
    value: Fraction

    @property
    def float_value(self) -> float:
        return float(self.value)


@functools.lru_cache(maxsize=32)
def _prime_index(system: PrimeSystem, X: int) -> frozenset[PrimeEntry]:
    return frozenset(list_primes(system, X))


def _check_membership(system: PrimeSystem, X: int, primes: Sequence[PrimeEntry]) -> None:
    if len(set(primes)) != len(primes):
        raise ParameterError("prime tuple entries must be distinct")
    index = _prime_index(system, X)
    for p in primes:
        if p not in index:
            raise PrimeNotInSystem(f"{p!r} is not a prime of the system with norm <= {X}")


def expect_Z(system: PrimeSystem, X: int, primes: Sequence[PrimeEntry]) -> ExactExpectation:
    """E[prod Z_p] over the uniform element of norm <= X, exact rational."""
    if X < 1:
        raise ParameterError(f"X must be >= 1, got {X}")
    _check_membership(system, X, primes)
    product = math.prod(p.norm for p in primes)
    if product > X:
        return ExactExpectation(Fraction(0))
    return ExactExpectation(
        Fraction(count_elements(system, X // product), count_elements(system, X))
    )


def expect_Y(primes: Sequence[PrimeEntry]) -> ExactExpectation:
    """E[prod Y_p] = 1 / prod N(p); exact rational."""
    if len(set(primes)) != len(primes):
        raise ParameterError("prime tuple entries must be distinct")
    return ExactExpectation(Fraction(1, math.prod(p.norm for p in primes)))


@dataclass(frozen=True)
class DominationReport:
    X: int
    k_max: int
    M_observed: float
    M_exact: Fraction
    witness: tuple[PrimeEntry, ...]
    tuples_examined: int


def domination_report(
    system: PrimeSystem, X: int, k_max: int, max_tuples: int = 10_000_000
) -> DominationReport:
    """Largest observed expect_Z / expect_Y over distinct-prime tuples.

    Only tuples with norm product <= X are enumerated; larger products give
    expect_Z = 0 and cannot attain the maximum. Ties keep the first witness
    in depth-first (index-lexicographic) order.
    """
    if k_max < 1:
        raise ParameterError(f"k_max must be >= 1, got {k_max}")
    entries = list_primes(system, X)
    cx = count_elements(system, X)
    best = Fraction(0)
    witness: tuple[PrimeEntry, ...] = ()
    examined = 0

    def rec(i0: int, prod: int, picked: tuple[PrimeEntry, ...]) -> None:
        nonlocal best, witness, examined
        for i in range(i0, len(entries)):
            p = prod * entries[i].norm
            if p > X:
                break  # norms ascend
            examined += 1
            if examined > max_tuples:
                raise BudgetExceeded(
                    f"domination search exceeds {max_tuples} tuples",
                    predicted=examined, cap=max_tuples,
                )
            tup = picked + (entries[i],)
            # ratio = expect_Z / expect_Y = count(X // p) * p / count(X)
            ratio = Fraction(count_elements(system, X // p) * p, cx)
            if ratio > best:
                best, witness = ratio, tup
            if len(tup) < k_max:
                rec(i + 1, p, tup)

    rec(0, 1, ())
    return DominationReport(X, k_max, float(best), best, witness, examined)


@dataclass(frozen=True)
class TruncationSets:
    X: int
    C: float
    k_X: float
    A: tuple[PrimeEntry, ...]
    B: tuple[PrimeEntry, ...]
    T: tuple[PrimeEntry, ...]


def truncation_threshold(X: int) -> float:
    """k_X = X^(1/(log log X)^2)."""
    if X < 16:
        raise ParameterError(f"truncation needs X >= 16, got {X}")
    return math.exp(math.log(X) / math.log(math.log(X)) ** 2)


def truncation_sets(
    system: PrimeSystem, g: AdditiveFunction, X: int, C: float
) -> TruncationSets:
    """Classify primes of norm <= X into A (large), B (small), T (big |g|).

    The boundary N(p) = k_X belongs to B, so the B-side MGF comparison
    includes the boundary prime; any fixed rule works, this one is pinned
    for determinism.
    """
    k_X = truncation_threshold(X)
    A, B, T = [], [], []
    for e in list_primes(system, X):
        if abs(g.value(e)) > C:
            T.append(e)
        elif e.norm <= k_X:
            B.append(e)
        else:
            A.append(e)
    return TruncationSets(X, C, k_X, tuple(A), tuple(B), tuple(T))


def log_mgf_Y(subset: Sequence[PrimeEntry], g: AdditiveFunction, theta: float) -> float:
    """log E[exp(theta sum g(p) Y_p)] = sum log(1 + (e^(theta g(p)) - 1)/N(p))."""
    return math.fsum(
        math.log1p(math.expm1(theta * g.value(e)) / e.norm) for e in subset
    )


def mgf_Y(subset: Sequence[PrimeEntry], g: AdditiveFunction, theta: float) -> float:
    """Product of (1 + (e^(theta g(p)) - 1)/N(p)) over the subset.

    With g >= 0 the partial products are monotone in theta's sign, so the
    product overflows 1e300 only if the full log does; that case raises
    MgfOverflow carrying the log-space value.
    """
    lm = log_mgf_Y(subset, g, theta)
    if lm > _LOG_OVERFLOW:
        raise MgfOverflow(f"mgf_Y exceeds 1e300 (log value {lm:.6g})", log_value=lm)
    return math.exp(lm)


class _RestrictedG:
    """g restricted to a prime subset; zero elsewhere."""

    def __init__(self, g: AdditiveFunction, subset: Sequence[PrimeEntry]):
        self._g = g
        self._members = frozenset(subset)

    def value(self, entry: PrimeEntry) -> float:
        return self._g.value(entry) if entry in self._members else 0.0


def mgf_Z(
    system: PrimeSystem,
    X: int,
    subset: Sequence[PrimeEntry],
    g: AdditiveFunction,
    theta: float,
    budget: Budget = DEFAULT_BUDGET,
) -> float:
    """Exact average of exp(theta * sum_{p in subset, p | m} g(p)) over the table."""
    _check_membership(system, X, subset)
    table = enumerate_monoid(system, X, _RestrictedG(g, subset), budget=budget)
    total = float(np.exp(theta * table.gsum).sum())
    return total / table.count


def log_mgf_Z(
    system: PrimeSystem,
    X: int,
    subset: Sequence[PrimeEntry],
    g: AdditiveFunction,
    theta: float,
    budget: Budget = DEFAULT_BUDGET,
) -> float:
    """Log-space mgf_Z via a stable log-sum-exp; for overflowing thetas."""
    _check_membership(system, X, subset)
    table = enumerate_monoid(system, X, _RestrictedG(g, subset), budget=budget)
    w = theta * table.gsum
    peak = float(w.max())
    return peak + math.log(float(np.exp(w - peak).sum())) - math.log(table.count)


@dataclass(frozen=True)
class GapComponents:
    X: int
    C: float
    theta: float
    k_X: float
    B_size: int
    mgf_Z: float
    mgf_Y: float
    gap: float
    log_space: bool


def gap_components(
    system: PrimeSystem,
    g: AdditiveFunction,
    X: int,
    C: float,
    theta: float,
    budget: Budget = DEFAULT_BUDGET,
) -> GapComponents:
    """Both B-side MGFs and their absolute difference.

    If the Y-side product overflows 1e300 the two sides are compared in log
    space instead and the row is flagged; the contract quantity is otherwise
    the plain absolute difference.
    """
    ts = truncation_sets(system, g, X, C)
    try:
        my = mgf_Y(ts.B, g, theta)
        mz = mgf_Z(system, X, ts.B, g, theta, budget=budget)
        return GapComponents(X, C, theta, ts.k_X, len(ts.B), mz, my, abs(mz - my), False)
    except MgfOverflow:
        ly = log_mgf_Y(ts.B, g, theta)
        lz = log_mgf_Z(system, X, ts.B, g, theta, budget=budget)
        return GapComponents(X, C, theta, ts.k_X, len(ts.B), lz, ly, abs(lz - ly), True)


def mz9_gap(
    system: PrimeSystem,
    g: AdditiveFunction,
    X: int,
    C: float,
    theta: float,
    budget: Budget = DEFAULT_BUDGET,
) -> float:
    """|mgf_Z - mgf_Y| over the small-prime set B(X, C)."""
    return gap_components(system, g, X, C, theta, budget=budget).gap


def tail_mass(
    system: PrimeSystem, g: AdditiveFunction, X: int, C: float, theta: float
) -> float:
    """Integral of (e^(theta y) - 1) over y > C against rho_X."""
    if theta < 0:
        raise ParameterError(f"tail_mass needs theta >= 0, got {theta}")
    entries = list_primes(system, X)
    if not entries:
        raise EmptySystem(f"no prime of norm <= {X}")
    den = math.fsum(1.0 / e.norm for e in entries)
    num = math.fsum(
        math.expm1(theta * g.value(e)) / e.norm for e in entries if g.value(e) > C
    )
    return num / den
