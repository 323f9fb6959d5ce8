"""Closed-form degrees-of-freedom values and bounds.

Everything here is per slot. Normalized quantities divide the sum DoF by
the larger antenna count and depend only on the antenna ratio
r = min(m, n) / max(m, n) and the link-on probability p. Shape-aware
quantities (composite_achievable, the rate bounds, the per-topology
baseline) take integer antenna counts and return absolute symbol rates.

The normalized sum DoF is known exactly except when r > 2/3 and p > 1/2;
in that open region the package exposes an upper-bound pair and an
achievable lower bound instead, plus a grid search for their worst-case
relative gap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .channel import TOPOLOGIES, topology_probability

__all__ = [
    "normalized_dof",
    "upper_bound_a",
    "upper_bound_b",
    "lower_bound",
    "composite_achievable",
    "rate_pair_bound",
    "three_rate_bound",
    "per_topology_baseline",
    "baseline_normalized",
    "single_slot_symbols",
    "max_gap_search",
    "GapResult",
    "dof_profile",
    "DofProfile",
]


def _check_rp(r: float, p: float) -> None:
    if not 0.0 < r <= 1.0:
        raise ValueError("antenna ratio r must lie in (0, 1]")
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability p must lie in [0, 1]")


def normalized_dof(r: float, p: float) -> float:
    """Exact normalized sum DoF where it is characterized.

    Raises ValueError("outside the characterized regime") when r > 2/3 and
    p > 1/2, where only the bound pair below is available.
    """
    _check_rp(r, p)
    q = 1.0 - p
    if 3.0 * r > 2.0 and p > 0.5:
        raise ValueError("outside the characterized regime")
    if 2.0 * r <= 1.0:
        return 2.0 * r * p * (1.0 + q)
    return 2.0 * r * (p * p + 2.0 * p * q * q) + 2.0 * p * p * q


def upper_bound_a(r: float, p: float) -> float:
    """Normalized converse from per-receiver rate pairs; tight for r <= 2/3."""
    _check_rp(r, p)
    q = 1.0 - p
    return 2.0 * r * (p * p + 2.0 * p * q * q) + 2.0 * p * p * q


def upper_bound_b(r: float, p: float) -> float:
    """Normalized converse from weighted rate triples; bites at large r, p."""
    _check_rp(r, p)
    q = 1.0 - p
    return 4.0 * r * p * q + (4.0 / 3.0) * p * p


def lower_bound(r: float, p: float) -> float:
    """Normalized DoF achieved by the scheduled constructions at r > 2/3."""
    _check_rp(r, p)
    q = 1.0 - p
    return (
        r * p * q * (4.0 * q * q + 6.0 * p)
        + 2.0 * p * p * q
        + (4.0 / 3.0) * (p**4 - p**3 * q)
    )


def composite_achievable(m: int, n: int, p: float) -> float:
    """Expected per-slot sum DoF of the full scheduling strategy.

    Shape-aware and absolute (not normalized). The branches follow the
    antenna ratio: single-slot codes suffice at r <= 1/2, paired slots give
    the exact value for 1/2 < r <= 2/3 and remain exact up to p = 1/2 for
    larger ratios, and the five-slot reuse pattern takes over above that.
    """
    _check_shape(m, n)
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability p must lie in [0, 1]")
    mn, mx = min(m, n), max(m, n)
    q = 1.0 - p
    if 2 * mn <= mx:
        return 2.0 * mn * p * (1.0 + q)
    if 3 * mn <= 2 * mx or p <= 0.5:
        return 2.0 * mn * (p * p + 2.0 * p * q * q) + 2.0 * mx * p * p * q
    return (
        4.0 * mn * p * q**3
        + (6.0 * mn + 2.0 * mx) * p * p * q
        + (4.0 / 3.0) * mx * (p**4 - p**3 * q)
    )


def _check_shape(m: int, n: int) -> None:
    if int(m) != m or int(n) != n or m < 1 or n < 1:
        raise ValueError("antenna counts must be positive integers")


def rate_pair_bound(m: int, n: int, p: float) -> float:
    """Converse on one receiver's rate pair; doubling and normalizing by
    max(m, n) recovers the exact normalized DoF and upper_bound_a."""
    _check_shape(m, n)
    mn, mx = min(m, n), max(m, n)
    q = 1.0 - p
    if 2 * mn <= mx:
        return mn * p * (1.0 + q)
    return mn * (p * p + 2.0 * p * q * q) + mx * p * p * q


def three_rate_bound(m: int, n: int, p: float) -> float:
    """Converse on a weighted rate triple; scaling by 4/(3 max(m, n))
    recovers upper_bound_b."""
    _check_shape(m, n)
    mn, mx = min(m, n), max(m, n)
    q = 1.0 - p
    return p * p * mx + 3.0 * p * q * mn


def single_slot_symbols(name: str, m: int, n: int) -> int:
    """Symbols the best supported single-slot code delivers on a topology.

    Closed-form counts; the constructive schemes in builders deliver the
    same totals (tests cross-check the two routes). For the all-links
    topology at shapes without a standalone code this returns the fallback
    load max(m, n).
    """
    _check_shape(m, n)
    if name not in TOPOLOGIES:
        raise ValueError(f"unknown topology {name!r}")
    mn, mx = min(m, n), max(m, n)
    if name == "empty":
        return 0
    if name in ("s11", "s12", "s21", "s22"):
        return mn
    if name in ("mac1", "mac2"):
        return min(2 * m, n)
    if name in ("bc1", "bc2"):
        return min(m, 2 * n)
    if name in ("par_direct", "par_cross"):
        return 2 * mn
    if name in ("z1", "z2", "z3", "z4"):
        return min(2 * mn, mx)
    # all-links topology
    if 3 * mn <= 2 * mx:
        return 2 * mn
    if m == n and m % 3 == 0:
        return 4 * (m // 3)
    return mx


def per_topology_baseline(m: int, n: int, p: float) -> float:
    """Expected per-slot sum DoF when every slot is coded in isolation."""
    _check_shape(m, n)
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability p must lie in [0, 1]")
    total = 0.0
    for name, topo in TOPOLOGIES.items():
        total += topology_probability(topo, p) * single_slot_symbols(name, m, n)
    return total


def baseline_normalized(r: float, p: float) -> float:
    """Ratio-only form of the single-slot baseline, normalized by max(m, n).

    Matches per_topology_baseline / max(m, n) at every integer shape except
    equal antenna counts divisible by 3, where the standalone all-links code
    lifts the p^4 coefficient from 1 to 4/3.
    """
    _check_rp(r, p)
    q = 1.0 - p
    doubles = 6.0 * r + 2.0 * min(2.0 * r, 1.0)
    f_term = 2.0 * r if 3.0 * r <= 2.0 else 1.0
    return (
        4.0 * r * p * q**3
        + doubles * p * p * q * q
        + 4.0 * min(2.0 * r, 1.0) * p**3 * q
        + f_term * p**4
    )


@dataclass(frozen=True)
class GapResult:
    r: float
    p: float
    gap: float


def max_gap_search(step: float = 0.005) -> GapResult:
    """Worst relative slack 1 - lower/min(upper) over the open regime.

    Scans the grid of step multiples with r in (2/3, 1] and p in (1/2, 1]
    and returns the arg max. Vectorized; a step of 0.005 takes milliseconds.
    """
    if not 0.0 < step <= 0.25:
        raise ValueError("step must lie in (0, 0.25]")
    k = np.arange(1, int(round(1.0 / step)) + 1)
    grid = np.round(k * step, 12)
    r_vals = grid[(grid > 2.0 / 3.0) & (grid <= 1.0)]
    p_vals = grid[(grid > 0.5) & (grid <= 1.0)]
    rr, pp = np.meshgrid(r_vals, p_vals, indexing="ij")
    qq = 1.0 - pp
    ua = 2.0 * rr * (pp * pp + 2.0 * pp * qq * qq) + 2.0 * pp * pp * qq
    ub = 4.0 * rr * pp * qq + (4.0 / 3.0) * pp * pp
    lb = (
        rr * pp * qq * (4.0 * qq * qq + 6.0 * pp)
        + 2.0 * pp * pp * qq
        + (4.0 / 3.0) * (pp**4 - pp**3 * qq)
    )
    gap = 1.0 - lb / np.minimum(ua, ub)
    idx = np.unravel_index(int(np.argmax(gap)), gap.shape)
    return GapResult(float(rr[idx]), float(pp[idx]), float(gap[idx]))


@dataclass(frozen=True)
class DofProfile:
    """All analytic values for one operating point.

    dof is None in the open regime where the exact value is unknown.
    Normalized entries divide by max(m, n); composite and the two rate
    bounds are absolute per-slot values.
    """

    m: int
    n: int
    p: float
    r: float
    regime: str
    dof: Optional[float]
    ub1: float
    ub2: float
    lb: float
    baseline: float
    composite: float
    pair_bound: float
    triple_bound: float

    def to_dict(self) -> Dict:
        return {
            "m": self.m,
            "n": self.n,
            "p": self.p,
            "r": self.r,
            "regime": self.regime,
            "dof": self.dof,
            "ub1": self.ub1,
            "ub2": self.ub2,
            "lb": self.lb,
            "baseline": self.baseline,
            "composite": self.composite,
            "pair_bound": self.pair_bound,
            "triple_bound": self.triple_bound,
        }


def dof_profile(m: int, n: int, p: float) -> DofProfile:
    """Evaluate every closed form at one shape and probability."""
    _check_shape(m, n)
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability p must lie in [0, 1]")
    mn, mx = min(m, n), max(m, n)
    r = mn / mx
    if 2 * mn <= mx:
        regime = "low"
    elif 3 * mn > 2 * mx and p > 0.5:
        regime = "open"
    else:
        regime = "mid"
    dof = None if regime == "open" else normalized_dof(r, p)
    return DofProfile(
        m=m,
        n=n,
        p=p,
        r=r,
        regime=regime,
        dof=dof,
        ub1=upper_bound_a(r, p),
        ub2=upper_bound_b(r, p),
        lb=lower_bound(r, p),
        baseline=per_topology_baseline(m, n, p) / mx,
        composite=composite_achievable(m, n, p),
        pair_bound=rate_pair_bound(m, n, p),
        triple_bound=three_rate_bound(m, n, p),
    )
