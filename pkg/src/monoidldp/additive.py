"""Strongly additive functions and the prime-value measures they induce.

A strongly additive g is determined by its values on primes: g of a product
of prime powers is the sum of g(p) over the distinct primes p dividing it.
Three rules are supported, all with finitely many distinct values and all
non-negative (the large-deviation machinery downstream assumes a measure
supported on [0, inf)):

  Omega                g(p) = 1, the distinct-prime-divisor count
  NormResidue(m,R,..)  g(p) = value_in when N(p) mod m lands in R, else value_out
  TableLookup          explicit norm -> value map with a default

The empirical measure rho_X puts mass proportional to 1/N(p) on each value
g(p) over norms <= X, normalized by the Mertens sum. Weights are accumulated
as unreduced integer fractions and combined by divide-and-conquer so the
total mass is exactly 1 before any float rounding; a gcd normalization per
prime would be quadratic-time at X = 10^6.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import EmptySystem, ParameterError
from .systems import PrimeEntry, PrimeSystem, list_primes


@dataclass(frozen=True)
class Omega:
    @property
    def key(self) -> str:
        return "omega"

    def value(self, entry: PrimeEntry) -> float:
        return 1.0


@dataclass(frozen=True)
class NormResidue:
    modulus: int
    residues: frozenset[int]
    value_in: float
    value_out: float

    def __post_init__(self):
        if self.modulus < 1:
            raise ParameterError(f"modulus must be >= 1, got {self.modulus}")
        object.__setattr__(self, "residues", frozenset(int(r) % self.modulus for r in self.residues))
        if self.value_in < 0 or self.value_out < 0:
            raise ParameterError("prime values must be non-negative")

    @property
    def key(self) -> str:
        rs = ",".join(str(r) for r in sorted(self.residues))
        return f"residue:{self.modulus}:{rs}:{self.value_in:.12g}:{self.value_out:.12g}"

    def value(self, entry: PrimeEntry) -> float:
        return self.value_in if entry.norm % self.modulus in self.residues else self.value_out


@dataclass(frozen=True)
class TableLookup:
    table: tuple[tuple[int, float], ...]
    default: float = 0.0

    def __post_init__(self):
        if isinstance(self.table, Mapping):
            object.__setattr__(self, "table", tuple(sorted(self.table.items())))
        if self.default < 0 or any(v < 0 for _, v in self.table):
            raise ParameterError("prime values must be non-negative")

    @property
    def key(self) -> str:
        body = ",".join(f"{n}={v:.12g}" for n, v in self.table)
        return f"table:{body}:default={self.default:.12g}"

    def value(self, entry: PrimeEntry) -> float:
        for n, v in self.table:
            if n == entry.norm:
                return v
        return self.default


AdditiveFunction = Omega | NormResidue | TableLookup


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite list of (atom, weight) pairs; weights positive, total mass 1."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ys = [y for y, _ in self.atoms]
        if sorted(ys) != ys or len(set(ys)) != len(ys):
            raise ParameterError("atoms must be sorted by value with no duplicates")
        if any(w <= 0 for _, w in self.atoms):
            raise ParameterError("atom weights must be positive")
        if abs(math.fsum(w for _, w in self.atoms) - 1.0) > 1e-12:
            raise ParameterError("atom weights must sum to 1 within 1e-12")

    @classmethod
    def delta(cls, y: float = 1.0) -> "DiscreteMeasure":
        return cls(((float(y), 1.0),))

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[float, float]]) -> "DiscreteMeasure":
        merged: dict[float, float] = {}
        for y, w in pairs:
            merged[float(y)] = merged.get(float(y), 0.0) + float(w)
        return cls(tuple(sorted(merged.items())))

    @classmethod
    def from_json(cls, text: str) -> "DiscreteMeasure":
        try:
            data = json.loads(text)
            pairs = [(a["y"], a["w"]) for a in data["atoms"]]
        except (json.JSONDecodeError, TypeError, KeyError) as e:
            raise ParameterError(f"measure JSON must be {{\"atoms\": [{{\"y\":..,\"w\":..}}]}}: {e}") from e
        return cls.from_pairs(pairs)

    def to_json(self) -> str:
        return json.dumps({"atoms": [{"y": y, "w": w} for y, w in self.atoms]})

    @property
    def mean(self) -> float:
        return math.fsum(w * y for y, w in self.atoms)


@dataclass(frozen=True)
class EmpiricalMeasure:
    base: DiscreteMeasure
    X: int
    denominator: float
    # per-atom exact weights as unreduced (num, den) pairs; Fraction would
    # gcd-normalize ~1e6-bit integers at X = 10^6
    weights_exact: tuple[tuple[int, int], ...]


def _tree_sum(pairs: list[tuple[int, int]]) -> tuple[int, int]:
    """Sum of num/den fractions without gcd reduction, combined pairwise."""
    while len(pairs) > 1:
        nxt = []
        for i in range(0, len(pairs) - 1, 2):
            (n1, d1), (n2, d2) = pairs[i], pairs[i + 1]
            nxt.append((n1 * d2 + n2 * d1, d1 * d2))
        if len(pairs) % 2:
            nxt.append(pairs[-1])
        pairs = nxt
    return pairs[0]


def rho_X(system: PrimeSystem, g: AdditiveFunction, X: int) -> EmpiricalMeasure:
    """Empirical prime-value measure at threshold X.

    Atom at each distinct y = g(p), weighted by sum of 1/N(p) over the
    primes attaining y, normalized by the full Mertens sum. Exact rational
    until the final float conversion.
    """
    entries = list_primes(system, X)
    if not entries:
        raise EmptySystem(f"no prime of norm <= {X}; rho_X denominator vanishes")
    groups: dict[float, list[tuple[int, int]]] = {}
    for e in entries:
        groups.setdefault(g.value(e), []).append((1, e.norm))
    group_sums = {y: _tree_sum(ps) for y, ps in groups.items()}
    tot_n, tot_d = _tree_sum(list(group_sums.values()))
    atoms = []
    weights_exact = []
    for y in sorted(group_sums):
        n, d = group_sums[y]
        # correctly rounded big-int division; no gcd on huge denominators
        atoms.append((y, (n * tot_d) / (d * tot_n)))
        weights_exact.append((n * tot_d, d * tot_n))
    denominator = tot_n / tot_d
    return EmpiricalMeasure(DiscreteMeasure(tuple(atoms)), X, denominator, tuple(weights_exact))


def exp_moment(measure: DiscreteMeasure, theta: float) -> float:
    """Integral of e^(theta*y) against the measure."""
    return math.fsum(w * math.exp(theta * y) for y, w in measure.atoms)


@dataclass(frozen=True)
class ConvergenceRow:
    X: int
    theta: float
    empirical: float
    limit: float
    deviation: float


def check_convergence(
    system: PrimeSystem,
    g: AdditiveFunction,
    rho: DiscreteMeasure,
    theta_grid: Sequence[float],
    X_grid: Sequence[int],
) -> list[ConvergenceRow]:
    """|exp_moment(rho_X) - exp_moment(rho)| per (X, theta) grid point."""
    if not theta_grid or not X_grid:
        raise ParameterError("theta and X grids must be nonempty")
    rows = []
    for X in X_grid:
        emp = rho_X(system, g, X).base
        for theta in theta_grid:
            a = exp_moment(emp, theta)
            b = exp_moment(rho, theta)
            rows.append(ConvergenceRow(X, theta, a, b, abs(a - b)))
    return rows
