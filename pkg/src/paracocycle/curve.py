"""Certified pressure values P(t) combining every available bound, and the pressure curve.

Lower bounds: (1/n) log s_n for t < 0; P >= 0 (the fixed points carry zero
exponent); P >= log 2 for t >= 0 (monotonicity); the renewal witness for
t' < t < 0; the induced sign test g(t, P) > 0.
Upper bounds: (1/n) log s_n for t > 0; P <= log 2 for t <= 0; the induced
sign test g(t, P) < 0, which gives exactly 0 below t*.
"""

from __future__ import annotations

import math
from dataclasses import replace
from enum import Enum
from typing import NamedTuple, Sequence

from .enumerate import Budget
from .errors import InfeasibleError
from .induced import induced_pressure_bounds
from .measures import build_renewal_spec, pressure_witness_bounds
from .pressure import LOG2, Method, PressureBracket, pressure_fekete_bounds
from .rounding import Bracket


class Regime(str, Enum):
    FROZEN = "frozen"
    POSITIVE = "positive"
    WINDOW = "transition-window"


def regime_of(t: float, tc: Bracket) -> Regime:
    if t <= tc.lo:
        return Regime.FROZEN
    if t >= tc.hi:
        return Regime.POSITIVE
    return Regime.WINDOW


def pressure_bracket(t: float, n_max: int = 16, *, induced: bool = True, threads: int = 1,
                     budget: Budget | None = None) -> PressureBracket:
    """Tightest certified bracket on P(t) from all implemented sources."""
    t = float(t)
    fek = pressure_fekete_bounds(t, n_max, threads=threads, budget=budget)
    if t == 0.0:
        return fek
    lower, upper = fek.lower, fek.upper
    sources = {"fullshift-fekete": (fek.lower, fek.upper)}
    method = Method.FULLSHIFT_FEKETE
    if t < 0:
        lower = max(lower, 0.0)
        try:
            witness = pressure_witness_bounds(build_renewal_spec(t)).lo
            sources["renewal-witness"] = (witness, math.inf)
            lower = max(lower, witness)
        except InfeasibleError:
            pass
        if induced:
            ib = induced_pressure_bounds(t)
            sources["induced-sign"] = ib.as_tuple()
            if ib.lo > lower or ib.hi < upper:
                method = Method.INDUCED_FEKETE
            lower, upper = max(lower, ib.lo), min(upper, ib.hi)
    estimate = min(max(fek.estimate, lower), upper)
    return replace(fek, lower=lower, upper=upper, method=method, estimate=estimate,
                   sources=sources)


class CurveRow(NamedTuple):
    t: float
    lower: float
    upper: float
    estimate: float
    regime: Regime


def pressure_curve(ts: Sequence[float], tc: Bracket, n_max: int = 16, *, induced: bool = True,
                   threads: int = 1, budget: Budget | None = None) -> list[CurveRow]:
    rows = []
    for t in ts:
        pb = pressure_bracket(t, n_max, induced=induced, threads=threads, budget=budget)
        rows.append(CurveRow(float(t), pb.lower, pb.upper, pb.estimate, regime_of(t, tc)))
    return rows


def t_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive grid; values are rounded to 12 decimals so 0 lands exactly on 0."""
    n = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + i * step, 12) for i in range(n + 1)]


__all__ = ["Regime", "regime_of", "pressure_bracket", "pressure_curve", "CurveRow", "t_grid",
           "LOG2"]
