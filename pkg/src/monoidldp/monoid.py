"""Exhaustive materialization of the monoid probability space.

For a prime system and threshold X, the table holds every monoid element of
norm <= X as a (norm, omega, gsum) triple: the norm, the number of distinct
primes dividing the element, and the strongly additive statistic sum g(p)
over those primes. Factorizations are discarded; every downstream statistic
depends only on these three numbers, and memory is the binding constraint.

Two construction paths must agree wherever both apply. The general path is
a depth-first recursion over primes sorted by norm: at prime index i with
partial product (n, om, gs), exponent e >= 1 multiplies in N(p_i)^e while
the product stays <= X and contributes (om+1, gs+g(p_i)) once, g being
strongly additive. For the rational integers the table is instead built by
a linear sieve over 1..X. Elements are sorted by (norm, omega, gsum).

Budgets keep desk-scale runs honest: X <= 1e7 on the recursive path, 1e8 on
the integer sieve, at most 2e8 elements in memory. Partial products never
overflow: they are bounded by X, which the budget keeps below 2^63.
"""
from __future__ import annotations

import functools
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, NamedTuple

import numpy as np

from .errors import BudgetExceeded, NonIntegerStatistic, ParameterError, SourceError
from .systems import Integers, PrimeEntry, PrimeSystem, list_primes, primes_upto

CACHE_MAGIC = b"MLDP0001"
CACHE_VERSION = 1
_RECORD_DTYPE = np.dtype([("norm", "<u8"), ("omega", "<u4"), ("gsum", "<f8")])


@dataclass(frozen=True)
class Budget:
    max_elements: int = 200_000_000
    max_x_recursive: int = 10_000_000
    max_x_sieve: int = 100_000_000


DEFAULT_BUDGET = Budget()


class MonoidElement(NamedTuple):
    norm: int
    omega: int
    gsum: float


@dataclass(frozen=True)
class MonoidTable:
    system: PrimeSystem
    X: int
    norm: np.ndarray
    omega: np.ndarray
    gsum: np.ndarray

    @property
    def count(self) -> int:
        return int(self.norm.size)

    def rows(self) -> Iterator[MonoidElement]:
        for n, o, s in zip(self.norm, self.omega, self.gsum):
            yield MonoidElement(int(n), int(o), float(s))


def enumerate_monoid(
    system: PrimeSystem,
    X: int,
    g,
    method: str = "auto",
    budget: Budget = DEFAULT_BUDGET,
) -> MonoidTable:
    """Complete table of monoid elements of norm <= X with g-statistics."""
    if X < 1:
        raise ParameterError(f"X must be >= 1, got {X}")
    if method not in ("auto", "sieve", "recursive"):
        raise ParameterError(f"method must be auto|sieve|recursive, got {method!r}")
    use_sieve = isinstance(system, Integers) if method == "auto" else method == "sieve"
    if use_sieve and not isinstance(system, Integers):
        raise ParameterError("the sieve path applies to the Integers system only")
    if use_sieve:
        if X > budget.max_x_sieve or X > budget.max_elements:
            raise BudgetExceeded(
                f"sieve at X={X} exceeds budget", predicted=X,
                cap=min(budget.max_x_sieve, budget.max_elements),
            )
        norm, omega, gsum = _sieve_table(X, g)
    else:
        if X > budget.max_x_recursive:
            raise BudgetExceeded(
                f"recursive enumeration at X={X} exceeds budget",
                predicted=X, cap=budget.max_x_recursive,
            )
        norm, omega, gsum = _recursive_table(system, X, g, budget.max_elements)
    return MonoidTable(system, X, norm, omega, gsum)


def _sieve_table(X: int, g) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    omega = np.zeros(X + 1, dtype=np.uint32)
    gsum = np.zeros(X + 1, dtype=np.float64)
    primes = primes_upto(X)
    gvals = [float(g.value(PrimeEntry(int(p), str(int(p))))) for p in primes]
    for p in primes:
        omega[p::p] += 1
    if gvals and all(v == gvals[0] for v in gvals):
        if gvals[0] != 0.0:
            np.multiply(omega, gvals[0], out=gsum)
    else:
        for p, gp in zip(primes, gvals):
            if gp != 0.0:
                gsum[p::p] += gp
    norm = np.arange(1, X + 1, dtype=np.uint64)
    return norm, omega[1:].copy(), gsum[1:].copy()


def _recursive_table(
    system: PrimeSystem, X: int, g, max_elements: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    entries = list_primes(system, X)
    norms = [e.norm for e in entries]
    gvals = [float(g.value(e)) for e in entries]
    out_n: list[int] = [1]
    out_o: list[int] = [0]
    out_g: list[float] = [0.0]
    append_n, append_o, append_g = out_n.append, out_o.append, out_g.append

    def rec(i0: int, n: int, om: int, gs: float) -> None:
        for i in range(i0, len(norms)):
            ni = norms[i]
            m = n * ni
            if m > X:
                break  # norms ascend, later primes only grow
            gi = gvals[i] + gs
            oi = om + 1
            while m <= X:
                if len(out_n) >= max_elements:
                    raise BudgetExceeded(
                        f"enumeration exceeds {max_elements} elements",
                        predicted=len(out_n) + 1, cap=max_elements,
                    )
                append_n(m)
                append_o(oi)
                append_g(gi)
                rec(i + 1, m, oi, gi)
                m *= ni

    rec(0, 1, 0, 0.0)
    norm = np.array(out_n, dtype=np.uint64)
    omega = np.array(out_o, dtype=np.uint32)
    gsum = np.array(out_g, dtype=np.float64)
    order = np.lexsort((gsum, omega, norm))
    return norm[order], omega[order], gsum[order]


@functools.lru_cache(maxsize=65536)
def count_by_enumeration(
    system: PrimeSystem, X: int, budget: Budget = DEFAULT_BUDGET
) -> int:
    """Count monoid elements of norm <= X without materializing them."""
    if X < 1:
        raise ParameterError(f"X must be >= 1, got {X}")
    if X > budget.max_x_recursive:
        raise BudgetExceeded(
            f"counting at X={X} exceeds budget", predicted=X, cap=budget.max_x_recursive
        )
    norms = [e.norm for e in list_primes(system, X)]
    cap = budget.max_elements
    total = 0

    def rec(i0: int, n: int) -> int:
        nonlocal total
        c = 1
        total += 1
        if total > cap:
            raise BudgetExceeded(f"count exceeds {cap} elements", predicted=total, cap=cap)
        for i in range(i0, len(norms)):
            m = n * norms[i]
            if m > X:
                break
            while m <= X:
                c += rec(i + 1, m)
                m *= norms[i]
        return c

    return rec(0, 1)


@dataclass(frozen=True)
class Histogram:
    statistic: str
    bins: tuple[float, ...]
    counts: tuple[int, ...]
    total: int
    width: float | None = None

    def as_dict(self) -> dict[float, int]:
        return dict(zip(self.bins, self.counts))


def histogram(table: MonoidTable, statistic: str = "omega", width: float | None = None) -> Histogram:
    """Bin counts of omega or gsum over the table; total mass = table.count.

    width=None requests exact-integer bins, valid only when every value is
    an integer.
    """
    if statistic == "omega":
        values = table.omega.astype(np.float64)
    elif statistic == "gsum":
        values = table.gsum
    else:
        raise ParameterError(f"statistic must be omega or gsum, got {statistic!r}")
    if width is None:
        if not np.all(values == np.rint(values)):
            raise NonIntegerStatistic(
                f"exact-integer binning requested but {statistic} has non-integer values"
            )
        ints = values.astype(np.int64)
        counts = np.bincount(ints)
        bins = np.flatnonzero(counts)
        return Histogram(statistic, tuple(float(b) for b in bins),
                         tuple(int(counts[b]) for b in bins), table.count)
    if width <= 0:
        raise ParameterError(f"bin width must be positive, got {width}")
    idx = np.floor(values / width).astype(np.int64)
    uniq, cnt = np.unique(idx, return_counts=True)
    return Histogram(statistic, tuple(float(k * width) for k in uniq),
                     tuple(int(c) for c in cnt), table.count, width)


def write_table_csv(table: MonoidTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("norm,omega,gsum\n")
        for n, o, s in zip(table.norm, table.omega, table.gsum):
            fh.write(f"{int(n)},{int(o)},{float(s):.12g}\n")


def write_table_cache(table: MonoidTable, path: str | Path) -> None:
    """Binary cache: 16-byte header (magic, u32 version, u32 count), then
    little-endian records (u64 norm, u32 omega, f64 gsum)."""
    records = np.empty(table.count, dtype=_RECORD_DTYPE)
    records["norm"] = table.norm
    records["omega"] = table.omega
    records["gsum"] = table.gsum
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<II", CACHE_VERSION, table.count))
        fh.write(records.tobytes())


def read_table_cache(path: str | Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read back (norm, omega, gsum) arrays; validates header and length."""
    blob = Path(path).read_bytes()
    if len(blob) < 16 or blob[:8] != CACHE_MAGIC:
        raise SourceError(f"{path}: not a monoid table cache (bad magic)")
    version, count = struct.unpack("<II", blob[8:16])
    if version != CACHE_VERSION:
        raise SourceError(f"{path}: unsupported cache version {version}")
    body = blob[16:]
    if len(body) != count * _RECORD_DTYPE.itemsize:
        raise SourceError(f"{path}: truncated cache ({len(body)} bytes for {count} records)")
    records = np.frombuffer(body, dtype=_RECORD_DTYPE)
    return (records["norm"].copy(), records["omega"].copy(), records["gsum"].copy())
