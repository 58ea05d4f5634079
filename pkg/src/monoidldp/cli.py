"""Command-line front end.

Twelve subcommands, each writing <command>.csv or <command>.json plus a
config-echo.json into --out (default "reports"). The echo is self-contained:
measures are inlined as atoms and Beurling systems as their norm list, so

    monoidldp --config reports/config-echo.json --out replay

reproduces a run byte for byte. Only --out and --threads may accompany
--config; everything else must come from the echo.

Exit codes: 0 PASS, 1 WARN, 2 FAILED or runtime error, 64 usage error,
65 bad parameter or input file, 66 budget exceeded.

Runtime-only knobs (--out, --threads, and count's --dump-cache) are excluded
from the echo; reports are identical for any thread count.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .additive import (
    AdditiveFunction,
    DiscreteMeasure,
    NormResidue,
    Omega,
)
from .errors import (
    BudgetExceeded,
    MonoidLdpError,
    ParameterError,
    SourceError,
)
from .exact import domination_report, expect_Y, expect_Z, tail_mass
from .experiments import condition_sweep, ek_report, gap_sweep, ldp_scan
from .monoid import DEFAULT_BUDGET, enumerate_monoid, write_table_cache
from .rate import rate_profile
from .reportio import fmt, write_csv, write_json
from .systems import (
    Beurling,
    Integers,
    PolyOverFq,
    PrimeSystem,
    QuadraticField,
    density_fit,
    list_primes,
    mertens_sum,
)

COMMANDS = (
    "primes", "count", "density", "mertens", "expect", "dominate",
    "mgf-gap", "tail-mass", "rate", "ek", "ldp-scan", "sweep",
)


class UsageError(Exception):
    """Command-line misuse; maps to exit code 64."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2)
        raise UsageError(message)


# ---------------------------------------------------------------------------
# argument value parsing (syntax errors -> ValueError -> argparse -> 64;
# domain errors surface later as ParameterError/SourceError -> 65)

def _system_arg(text: str) -> dict:
    if text == "integers":
        return {"kind": "integers"}
    kind, sep, rest = text.partition(":")
    if sep and rest:
        if kind == "poly":
            return {"kind": "poly", "q": int(rest)}
        if kind == "quad":
            return {"kind": "quad", "D": int(rest)}
        if kind == "beurling":
            b = Beurling.from_file(rest)
            return {"kind": "beurling", "source": b.source, "norms": list(b.norms)}
    raise ValueError(
        f"system must be integers, poly:Q, quad:D or beurling:PATH, got {text!r}"
    )


def _g_arg(text: str) -> dict:
    if text == "omega":
        return {"kind": "omega"}
    parts = text.split(":")
    if parts[0] == "residue" and len(parts) == 5:
        return {
            "kind": "residue",
            "modulus": int(parts[1]),
            "residues": [int(r) for r in parts[2].split(",")],
            "value_in": float(parts[3]),
            "value_out": float(parts[4]),
        }
    raise ValueError(f"g must be omega or residue:M:R1[,R2...]:VIN:VOUT, got {text!r}")


def _rho_arg(text: str) -> dict:
    if text == "delta1":
        measure = DiscreteMeasure.delta(1.0)
    else:
        try:
            payload = Path(text).read_text(encoding="utf-8")
        except OSError as e:
            raise SourceError(f"cannot read measure file {text}: {e}") from e
        measure = DiscreteMeasure.from_json(payload)
    return {"atoms": [{"y": y, "w": w} for y, w in measure.atoms]}


def _geom_points(start: float, stop: float, steps: int) -> list[float]:
    if steps < 2:
        raise ValueError("geom grid needs steps >= 2")
    if not 0 < start < stop:
        raise ValueError("geom grid needs 0 < start < stop")
    ratio = stop / start
    return [start * ratio ** (i / (steps - 1)) for i in range(steps)]


def _grid_int_arg(text: str) -> list[int]:
    if text.startswith("geom:"):
        _, a, b, n = text.split(":")
        points = [round(v) for v in _geom_points(int(a), int(b), int(n))]
        out = []
        for v in points:
            if not out or v > out[-1]:
                out.append(v)
        return out
    return [int(v) for v in text.split(",")]


def _grid_float_arg(text: str) -> list[float]:
    if text.startswith("geom:"):
        _, a, b, n = text.split(":")
        return _geom_points(float(a), float(b), int(n))
    return [float(v) for v in text.split(",")]


def _intervals_arg(text: str) -> list[list]:
    out = []
    for part in text.split(","):
        lo_s, hi_s = part.split(":")
        out.append([_jsonf(float(lo_s)), _jsonf(float(hi_s))])
    if not out:
        raise ValueError("no intervals given")
    return out


def _norms_arg(text: str) -> list[int]:
    return [int(v) for v in text.split(",")]


def _jsonf(v: float) -> float | str:
    """Floats for strict JSON: non-finite values become their token strings."""
    if isinstance(v, float) and not math.isfinite(v):
        return fmt(v)
    return v


# argparse uses the type callable's __name__ in its error messages
for _fn, _label in (
    (_system_arg, "system"), (_g_arg, "g"), (_rho_arg, "measure"),
    (_grid_int_arg, "grid"), (_grid_float_arg, "grid"),
    (_intervals_arg, "intervals"), (_norms_arg, "norm list"),
):
    _fn.__name__ = _label


# ---------------------------------------------------------------------------
# rebuilding objects from a config dict (CLI parse and --config replay share
# this path, so the echo reproduces runs exactly)

def _build_system(data: dict) -> PrimeSystem:
    kind = data.get("kind")
    if kind == "integers":
        return Integers()
    if kind == "poly":
        return PolyOverFq(int(data["q"]))
    if kind == "quad":
        return QuadraticField(int(data["D"]))
    if kind == "beurling":
        return Beurling(
            tuple(int(n) for n in data["norms"]), source=str(data["source"])
        )
    raise SourceError(f"unknown system kind {kind!r} in config")


def _build_g(data: dict) -> AdditiveFunction:
    kind = data.get("kind")
    if kind == "omega":
        return Omega()
    if kind == "residue":
        return NormResidue(
            modulus=int(data["modulus"]),
            residues=frozenset(int(r) for r in data["residues"]),
            value_in=float(data["value_in"]),
            value_out=float(data["value_out"]),
        )
    raise SourceError(f"unknown additive function kind {kind!r} in config")


def _build_rho(data: dict) -> DiscreteMeasure:
    return DiscreteMeasure.from_pairs(
        [(float(a["y"]), float(a["w"])) for a in data["atoms"]]
    )


def _cfg_get(cfg: dict, key: str) -> Any:
    if key not in cfg:
        raise SourceError(f"config is missing required key {key!r}")
    return cfg[key]


# ---------------------------------------------------------------------------
# subcommand handlers: (cfg, out, threads) -> (exit_code, summary line)

def _out_path(out: Path, cfg: dict, command: str) -> Path:
    return out / f"{command}.{cfg['format']}"


def _run_primes(cfg: dict, out: Path, threads: int) -> tuple[int, str]:
    system = _build_system(cfg["system"])
    X = int(_cfg_get(cfg, "limit"))
    entries = list_primes(system, X)
    if cfg["format"] == "csv":
        write_csv(_out_path(out, cfg, "primes"), ["norm", "label"],
                  [(e.norm, e.label) for e in entries])
    else:
        write_json(_out_path(out, cfg, "primes"), {
            "command": "primes", "system": system.key, "X": X,
            "count": len(entries),
            "primes": [{"norm": e.norm, "label": e.label} for e in entries],
        })
    return 0, f"primes: {len(entries)} primes of norm <= {X} in {system.key}"


def _run_count(cfg: dict, out: Path, threads: int) -> tuple[int, str]:
    system = _build_system(cfg["system"])
    g = _build_g(cfg["g"])
    X = int(_cfg_get(cfg, "limit"))
    table = enumerate_monoid(system, X, g, budget=DEFAULT_BUDGET)
    mean_omega = float(table.omega.sum(dtype=np.int64)) / table.count
    if cfg["format"] == "csv":
        write_csv(_out_path(out, cfg, "count"), ["norm", "omega", "gsum"], table.rows())
    else:
        write_json(_out_path(out, cfg, "count"), {
            "command": "count", "system": system.key, "X": X, "g": g.key,
            "count": table.count, "mean_omega": mean_omega,
            "omega_histogram": [int(c) for c in np.bincount(table.omega)],
        })
    if cfg.get("dump_cache"):
        write_table_cache(table, cfg["dump_cache"])
    return 0, f"count: {table.count} elements of norm <= {X}, mean omega {fmt(mean_omega)}"


def _run_density(cfg: dict, out: Path, threads: int) -> tuple[int, str]:
    system = _build_system(cfg["system"])
    grid = [int(v) for v in _cfg_get(cfg, "grid")]
    fit = density_fit(system, grid)
    rows = [
        (X, c, fit.a_hat, fit.b_hat, fit.slope, r, fit.status)
        for (X, c, (_, r)) in zip(fit.grid, fit.counts, fit.residuals)
    ]
    if cfg["format"] == "csv":
        write_csv(_out_path(out, cfg, "density"),
                  ["X", "count", "a_hat", "b_hat", "slope", "residual", "status"], rows)
    else:
        write_json(_out_path(out, cfg, "density"), {
            "command": "density", "system": system.key,
            "grid": list(fit.grid), "counts": list(fit.counts),
            "a_hat": fit.a_hat, "b_hat": fit.b_hat, "slope": fit.slope,
            "residuals": [[x, r] for x, r in fit.residuals],
            "status": fit.status, "unsupported": list(fit.unsupported),
        })
    summary = (f"density: status={fit.status} a_hat={fmt(fit.a_hat)} "
               f"b_hat={fmt(fit.b_hat)} slope={fmt(fit.slope)}")
    if fit.unsupported:
        summary += f" unsupported={list(fit.unsupported)}"
    return (2 if fit.status == "FAILED" else 0), summary


def _run_mertens(cfg: dict, out: Path, threads: int) -> tuple[int, str]:
    system = _build_system(cfg["system"])
    grid = [int(v) for v in _cfg_get(cfg, "grid")]
    rows = [(X, *mertens_sum(system, X)) for X in grid]
    if cfg["format"] == "csv":
        write_csv(_out_path(out, cfg, "mertens"), ["X", "sum", "deviation"], rows)
    else:
        write_json(_out_path(out, cfg, "mertens"), {
            "command": "mertens", "system": system.key,
            "rows": [[X, s, d] for X, s, d in rows],
        })
    X, s, d = rows[-1]
    return 0, f"mertens: X={X} sum={fmt(s)} deviation={fmt(d)}"


def _run_expect(cfg: dict, out: Path, threads: int) -> tuple[int, str]:
    system = _build_system(cfg["system"])
    X = int(_cfg_get(cfg, "limit"))
    wanted = [int(n) for n in _cfg_get(cfg, "primes")]
    entries = list_primes(system, X)
    selected = []
    for n in wanted:
        match = next(
            (e for e in entries if e.norm == n and e not in selected), None
        )
        if match is None:
            raise ParameterError(f"no unused prime of norm {n} in {system.key} up to {X}")
        selected.append(match)
    zc = expect_Z(system, X, selected)
    yc = expect_Y(selected)
    ratio = zc.value / yc.value
    labels = "*".join(e.label for e in selected)
    if cfg["format"] == "csv":
        write_csv(_out_path(out, cfg, "expect"),
                  ["X", "primes", "expect_Z", "expect_Y", "ratio"],
                  [(X, labels, zc.value, yc.value, ratio)])
    else:
        write_json(_out_path(out, cfg, "expect"), {
            "command": "expect", "system": system.key, "X": X,
            "primes": [e.label for e in selected],
            "expect_Z": fmt(zc.value), "expect_Z_float": zc.float_value,
            "expect_Y": fmt(yc.value), "expect_Y_float": yc.float_value,
            "ratio": fmt(ratio), "ratio_float": float(ratio),
        })
    return 0, (f"expect: Z={fmt(zc.value)} Y={fmt(yc.value)} ratio={fmt(ratio)} "
               f"primes={labels}")


def _run_dominate(cfg: dict, out: Path, threads: int) -> tuple[int, str]:
    system = _build_system(cfg["system"])
    X = int(_cfg_get(cfg, "limit"))
    k_max = int(_cfg_get(cfg, "kmax"))
    rep = domination_report(system, X, k_max)
    labels = "*".join(e.label for e in rep.witness)
    if cfg["format"] == "csv":
        write_csv(_out_path(out, cfg, "dominate"),
                  ["X", "k_max", "M_observed", "witness"],
                  [(rep.X, rep.k_max, rep.M_observed, labels)])
    else:
        write_json(_out_path(out, cfg, "dominate"), {
            "command": "dominate", "system": system.key, "X": rep.X,
            "k_max": rep.k_max, "M_observed": rep.M_observed,
            "M_exact": fmt(rep.M_exact),
            "witness": [e.label for e in rep.witness],
            "tuples_examined": rep.tuples_examined,
        })
    return 0, (f"dominate: M_observed={fmt(rep.M_observed)} witness={labels} "
               f"({rep.tuples_examined} tuples examined)")


def _run_mgf_gap(cfg: dict, out: Path, threads: int) -> tuple[int, str]:
    system = _build_system(cfg["system"])
    g = _build_g(cfg["g"])
    grid = [int(v) for v in _cfg_get(cfg, "grid")]
    C = float(_cfg_get(cfg, "cap"))
    theta = float(_cfg_get(cfg, "theta"))
    rep = gap_sweep(system, g, grid, C, theta, threads=threads)
    if cfg["format"] == "csv":
        write_csv(_out_path(out, cfg, "mgf-gap"),
                  ["X", "C", "theta", "mgf_Z", "mgf_Y", "gap"],
                  [(r.X, r.C, r.theta, r.mgf_Z, r.mgf_Y, r.gap) for r in rep.rows])
    else:
        write_json(_out_path(out, cfg, "mgf-gap"), {
            "command": "mgf-gap", "system": system.key, "g": g.key,
            "trend": rep.trend,
            "rows": [{
                "X": r.X, "C": r.C, "theta": r.theta, "k_X": r.k_X,
                "B_size": r.B_size, "mgf_Z": r.mgf_Z, "mgf_Y": r.mgf_Y,
                "gap": r.gap, "log_space": r.log_space,
            } for r in rep.rows],
        })
    last = rep.rows[-1]
    return (0 if rep.trend == "PASS" else 1), (
        f"mgf-gap: trend={rep.trend} gap(X={last.X})={fmt(last.gap)}"
    )


def _run_tail_mass(cfg: dict, out: Path, threads: int) -> tuple[int, str]:
    system = _build_system(cfg["system"])
    g = _build_g(cfg["g"])
    X = int(_cfg_get(cfg, "limit"))
    C = float(_cfg_get(cfg, "cap"))
    theta = float(_cfg_get(cfg, "theta"))
    tm = tail_mass(system, g, X, C, theta)
    if cfg["format"] == "csv":
        write_csv(_out_path(out, cfg, "tail-mass"),
                  ["X", "C", "theta", "tail_mass"], [(X, C, theta, tm)])
    else:
        write_json(_out_path(out, cfg, "tail-mass"), {
            "command": "tail-mass", "system": system.key, "g": g.key,
            "X": X, "C": C, "theta": theta, "tail_mass": tm,
        })
    return 0, f"tail-mass: X={X} C={fmt(C)} theta={fmt(theta)} tail={fmt(tm)}"


def _run_rate(cfg: dict, out: Path, threads: int) -> tuple[int, str]:
    rho = _build_rho(_cfg_get(cfg, "rho"))
    grid = [float(v) for v in _cfg_get(cfg, "grid")]
    prof = rate_profile(rho, grid, threads=threads)
    rows = [
        (x, I, math.nan if t is None else t, it, st)
        for x, I, t, it, st in zip(
            prof.x_grid, prof.I_values, prof.theta_stars,
            prof.solver_iters, prof.statuses)
    ]
    if cfg["format"] == "csv":
        write_csv(_out_path(out, cfg, "rate"),
                  ["x", "I", "theta_star", "iters", "status"], rows)
    else:
        write_json(_out_path(out, cfg, "rate"), {
            "command": "rate",
            "rho": [{"y": y, "w": w} for y, w in rho.atoms],
            "rows": [{"x": x, "I": _jsonf(I), "theta_star": None if t is None else t,
                      "iters": it, "status": st}
                     for x, I, t, it, st in zip(
                         prof.x_grid, prof.I_values, prof.theta_stars,
                         prof.solver_iters, prof.statuses)],
        })
    bad = sum(1 for s in prof.statuses if s == "no-convergence")
    n_conv = sum(1 for s in prof.statuses if s == "converged")
    code = 1 if bad else 0
    return code, f"rate: {len(rows)} points, {n_conv} converged, {bad} failed"


def _run_ek(cfg: dict, out: Path, threads: int) -> tuple[int, str]:
    system = _build_system(cfg["system"])
    X = int(_cfg_get(cfg, "limit"))
    min_norm = int(_cfg_get(cfg, "min_norm"))
    rep = ek_report(system, X, min_norm=min_norm)
    fields = [
        ("X", rep.X), ("samples", rep.samples), ("min_norm", rep.min_norm),
        ("ks_sample_count", rep.ks_sample_count),
        ("ks_distance", rep.ks_distance), ("ks_two_sided", rep.ks_two_sided),
        ("mean_omega", rep.mean_omega), ("mertens_mean", rep.mertens_mean),
        ("variance_omega", rep.variance_omega),
    ]
    if cfg["format"] == "csv":
        write_csv(_out_path(out, cfg, "ek"),
                  [k for k, _ in fields], [[v for _, v in fields]])
    else:
        write_json(_out_path(out, cfg, "ek"),
                   {"command": "ek", "system": system.key, **dict(fields)})
    return 0, (f"ek: X={rep.X} ks_distance={fmt(rep.ks_distance)} "
               f"ks_two_sided={fmt(rep.ks_two_sided)} mean_omega={fmt(rep.mean_omega)}")


def _run_ldp_scan(cfg: dict, out: Path, threads: int) -> tuple[int, str]:
    system = _build_system(cfg["system"])
    g = _build_g(cfg["g"])
    rho = _build_rho(_cfg_get(cfg, "rho"))
    grid = [int(v) for v in _cfg_get(cfg, "grid")]
    intervals = [(float(lo), float(hi)) for lo, hi in _cfg_get(cfg, "intervals")]
    rows = ldp_scan(system, g, grid, intervals, rho, threads=threads)
    if cfg["format"] == "csv":
        write_csv(
            _out_path(out, cfg, "ldp-scan"),
            ["X", "x_lo", "x_hi", "count", "total", "tail_prob",
             "normalized", "rate_bound"],
            [(r.X, r.x_lo, r.x_hi, r.count, r.total, r.tail_prob,
              r.normalized, r.rate_bound) for r in rows],
        )
    else:
        write_json(_out_path(out, cfg, "ldp-scan"), {
            "command": "ldp-scan", "system": system.key, "g": g.key,
            "rho": [{"y": y, "w": w} for y, w in rho.atoms],
            "rows": [{
                "X": r.X, "x_lo": _jsonf(r.x_lo), "x_hi": _jsonf(r.x_hi),
                "count": r.count, "total": r.total, "tail_prob": fmt(r.tail_prob),
                "normalized": _jsonf(r.normalized),
                "rate_bound": _jsonf(r.rate_bound),
            } for r in rows],
        })
    return 0, f"ldp-scan: {len(rows)} rows over {len(grid)} values of X"


def _run_sweep(cfg: dict, out: Path, threads: int) -> tuple[int, str]:
    system = _build_system(cfg["system"])
    g = _build_g(cfg["g"])
    rho = _build_rho(_cfg_get(cfg, "rho"))
    grid = [int(v) for v in _cfg_get(cfg, "grid")]
    theta_grid = [float(v) for v in _cfg_get(cfg, "theta_grid")]
    rep = condition_sweep(system, g, rho, grid, theta_grid)
    sections = [
        ("density", rep.density["flag"]),
        ("prime_count", rep.prime_count["flag"]),
        ("mertens", rep.mertens["flag"]),
        ("convergence", rep.convergence["flag"]),
    ]
    if cfg["format"] == "csv":
        write_csv(_out_path(out, cfg, "sweep"), ["section", "flag"],
                  sections + [("overall", rep.overall)])
    else:
        write_json(_out_path(out, cfg, "sweep"),
                   {"command": "sweep", "system": system.key, "g": g.key,
                    **rep.as_dict()})
    code = {"PASS": 0, "WARN": 1}.get(rep.overall, 2)
    detail = " ".join(f"{name}={flag}" for name, flag in sections)
    return code, f"sweep: overall={rep.overall} {detail}"


_HANDLERS: dict[str, Callable[[dict, Path, int], tuple[int, str]]] = {
    "primes": _run_primes,
    "count": _run_count,
    "density": _run_density,
    "mertens": _run_mertens,
    "expect": _run_expect,
    "dominate": _run_dominate,
    "mgf-gap": _run_mgf_gap,
    "tail-mass": _run_tail_mass,
    "rate": _run_rate,
    "ek": _run_ek,
    "ldp-scan": _run_ldp_scan,
    "sweep": _run_sweep,
}


# ---------------------------------------------------------------------------
# parser construction

def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", default="reports", help="output directory")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--threads", type=int, default=None,
                    help="worker threads (default: CPU count); never changes output")
    sp.add_argument("--seed", type=int, default=None,
                    help="reserved for randomized extensions; echoed, unused")


def _build_parser() -> _Parser:
    parser = _Parser(prog="monoidldp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, helptext: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=helptext)
        _add_common(sp)
        return sp

    sp = add("primes", "list primes of the system up to a norm bound")
    sp.add_argument("--system", type=_system_arg, default={"kind": "integers"})
    sp.add_argument("--limit", type=int, default=100)

    sp = add("count", "enumerate the monoid table (norm, omega, gsum)")
    sp.add_argument("--system", type=_system_arg, default={"kind": "integers"})
    sp.add_argument("--limit", type=int, default=1000)
    sp.add_argument("--g", type=_g_arg, default={"kind": "omega"})
    sp.add_argument("--dump-cache", default=None, metavar="PATH",
                    help="also write the binary table cache")

    sp = add("density", "fit count(X) = a X + O(X^b) over a grid")
    sp.add_argument("--system", type=_system_arg, default={"kind": "integers"})
    sp.add_argument("--grid", type=_grid_int_arg, default="geom:100:100000:4")

    sp = add("mertens", "partial sums of 1/N(p) minus log log X")
    sp.add_argument("--system", type=_system_arg, default={"kind": "integers"})
    sp.add_argument("--grid", type=_grid_int_arg, default="geom:100:1000000:5")
    sp.add_argument("--limit", type=int, default=None,
                    help="single cutoff, shorthand for --grid LIMIT")

    sp = add("expect", "exact E[prod Z_p] vs E[prod Y_p] for chosen primes")
    sp.add_argument("--system", type=_system_arg, default={"kind": "integers"})
    sp.add_argument("--limit", type=int, default=100)
    sp.add_argument("--primes", type=_norms_arg, required=True, metavar="N1,N2",
                    help="prime norms; the first unused entry of each norm is taken")

    sp = add("dominate", "max of expect_Z/expect_Y over distinct-prime tuples")
    sp.add_argument("--system", type=_system_arg, default={"kind": "integers"})
    sp.add_argument("--limit", type=int, default=100)
    sp.add_argument("--kmax", type=int, default=3)

    sp = add("mgf-gap", "B-side MGF difference over an X grid")
    sp.add_argument("--system", type=_system_arg, default={"kind": "integers"})
    sp.add_argument("--g", type=_g_arg, default={"kind": "omega"})
    sp.add_argument("--grid", type=_grid_int_arg, default="geom:1000:1000000:4")
    sp.add_argument("--cap", type=float, default=5.0, help="truncation cap C")
    sp.add_argument("--theta", type=float, default=1.0)

    sp = add("tail-mass", "rho_X tail integral of e^(theta y) - 1 over y > C")
    sp.add_argument("--system", type=_system_arg, default={"kind": "integers"})
    sp.add_argument("--g", type=_g_arg, default={"kind": "omega"})
    sp.add_argument("--limit", type=int, default=100)
    sp.add_argument("--cap", type=float, default=0.5)
    sp.add_argument("--theta", type=float, default=1.0)

    sp = add("rate", "Legendre transform I(x) over an x grid")
    sp.add_argument("--rho", type=_rho_arg, default="delta1",
                    help="delta1 or a JSON measure file")
    sp.add_argument("--grid", type=_grid_float_arg,
                    default="0,0.25,0.5,0.75,1,1.5,2,2.5,3")

    sp = add("ek", "normalized omega statistic against the standard normal")
    sp.add_argument("--system", type=_system_arg, default={"kind": "integers"})
    sp.add_argument("--limit", type=int, default=100000)
    sp.add_argument("--min-norm", type=int, default=3)

    sp = add("ldp-scan", "exact interval tail probabilities vs the rate bound")
    sp.add_argument("--system", type=_system_arg, default={"kind": "integers"})
    sp.add_argument("--g", type=_g_arg, default={"kind": "omega"})
    sp.add_argument("--rho", type=_rho_arg, default="delta1")
    sp.add_argument("--grid", type=_grid_int_arg, default="geom:100:100000:4")
    sp.add_argument("--intervals", type=_intervals_arg, default="1.5:inf",
                    metavar="LO:HI[,LO:HI...]", help="half-open [lo, hi); inf allowed")

    sp = add("sweep", "axiom diagnostics bundle with PASS/WARN/FAILED flags")
    sp.add_argument("--system", type=_system_arg, default={"kind": "integers"})
    sp.add_argument("--g", type=_g_arg, default={"kind": "omega"})
    sp.add_argument("--rho", type=_rho_arg, default="delta1")
    sp.add_argument("--grid", type=_grid_int_arg, default="geom:100:100000:4")
    sp.add_argument("--theta-grid", type=_grid_float_arg, default="0.5,1")

    return parser


_CFG_KEYS = {
    "primes": ("system", "limit"),
    "count": ("system", "limit", "g"),
    "density": ("system", "grid"),
    "mertens": ("system", "grid"),
    "expect": ("system", "limit", "primes"),
    "dominate": ("system", "limit", "kmax"),
    "mgf-gap": ("system", "g", "grid", "cap", "theta"),
    "tail-mass": ("system", "g", "limit", "cap", "theta"),
    "rate": ("rho", "grid"),
    "ek": ("system", "limit", "min_norm"),
    "ldp-scan": ("system", "g", "rho", "grid", "intervals"),
    "sweep": ("system", "g", "rho", "grid", "theta_grid"),
}


def _sanitize(value: Any) -> Any:
    if isinstance(value, float):
        return _jsonf(value)
    if isinstance(value, list):
        return [_sanitize(v) for v in value]
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    return value


def _cfg_from_namespace(ns: argparse.Namespace) -> dict:
    cfg = {"command": ns.command, "format": ns.format, "seed": ns.seed}
    for key in _CFG_KEYS[ns.command]:
        cfg[key] = _sanitize(getattr(ns, key))
    # --limit is a shorthand alias; the echoed config keeps only the grid.
    if ns.command == "mertens" and getattr(ns, "limit", None) is not None:
        if ns.limit < 3:
            raise UsageError(f"--limit must be >= 3, got {ns.limit}")
        cfg["grid"] = [ns.limit]
    return cfg


def _write_echo(out: Path, cfg: dict) -> None:
    with open(out / "config-echo.json", "w", encoding="utf-8") as fh:
        json.dump(cfg, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def _load_config(path: str) -> dict:
    try:
        payload = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SourceError(f"cannot read config {path}: {e}") from e
    try:
        cfg = json.loads(payload)
    except ValueError as e:
        raise SourceError(f"config {path} is not valid JSON: {e}") from e
    if not isinstance(cfg, dict):
        raise SourceError(f"config {path} must hold a JSON object")
    command = cfg.get("command")
    if command not in _HANDLERS:
        raise SourceError(f"config {path} names unknown command {command!r}")
    if cfg.get("format") not in ("csv", "json"):
        raise SourceError(f"config {path} needs format csv or json")
    for key in _CFG_KEYS[command]:
        if key not in cfg:
            raise SourceError(f"config {path} is missing key {key!r}")
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if any(a == "--config" or a.startswith("--config=") for a in argv):
            parser = _Parser(prog="monoidldp")
            parser.add_argument("--config", required=True)
            parser.add_argument("--out", default="reports")
            parser.add_argument("--threads", type=int, default=None)
            ns = parser.parse_args(argv)
            cfg = _load_config(ns.config)
            run_cfg = dict(cfg)
        else:
            ns = _build_parser().parse_args(argv)
            cfg = _cfg_from_namespace(ns)
            run_cfg = dict(cfg)
            if getattr(ns, "dump_cache", None):
                run_cfg["dump_cache"] = ns.dump_cache  # runtime-only, not echoed
        threads = ns.threads if ns.threads is not None else (os.cpu_count() or 1)
        if threads < 1:
            raise UsageError(f"--threads must be >= 1, got {threads}")
        out = Path(ns.out)
        out.mkdir(parents=True, exist_ok=True)
        code, summary = _HANDLERS[run_cfg["command"]](run_cfg, out, threads)
        _write_echo(out, cfg)
        print(summary)
        return code
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 64
    except SystemExit as e:  # argparse -h
        return int(e.code or 0)
    except (ParameterError, SourceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 65
    except BudgetExceeded as e:
        print(f"budget error: {e}", file=sys.stderr)
        return 66
    except (ValueError, TypeError, KeyError) as e:
        print(f"error: malformed configuration value: {e}", file=sys.stderr)
        return 65
    except (MonoidLdpError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
