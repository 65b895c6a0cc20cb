"""Closed-form optimal placement of a mirrored antenna pair.

Everything here reduces to the dimensionless room shape rho = 4*(ly/lx)**2 +
(lz_eff/lx)**2: the regime, the pair offset, the worst-case received power
and the gain over parking both antennas at the centre. The branch functions
are exposed individually so continuity across the regime boundaries can be
checked numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import RadioParams
from .geometry import (
    GeometrySignature,
    Regime,
    Room,
    critical_set,
    signature,
)

# Regime boundaries in rho. Boundary values belong to both neighbours; reports
# carry the lower label and every numeric output is continuous across them.
RHO_THREE_POINT_MAX = 1.25
RHO_COLOCATED_MIN = 3.0

_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class StationaryPoints:
    """Pair offsets where the critical-line power at one receiver x is flat.

    Candidates i..iv are None when the corresponding root is not real; v, the
    co-located candidate, always exists. iii and iv are never evaluated from
    their own (always-negative, for x > 0) radicand: they are the mirror
    images of i and ii at -x.
    """

    i: float | None
    ii: float | None
    iii: float | None
    iv: float | None
    v: float = 0.0


def _e(x: float, ly: float, lz_eff: float) -> float:
    return 4.0 * x * math.sqrt(4.0 * x * x + 4.0 * ly * ly + lz_eff * lz_eff)


def _d(x: float, ly: float, lz_eff: float) -> float:
    return 4.0 * x * x + 4.0 * ly * ly + lz_eff * lz_eff


def _half_root(radicand: float) -> float | None:
    return 0.5 * math.sqrt(radicand) if radicand >= 0 else None


def stationary_points(x: float, ly: float, lz_eff: float) -> StationaryPoints:
    """All five stationary offsets of the critical-line power at receiver x."""
    first = _half_root(_e(x, ly, lz_eff) - _d(x, ly, lz_eff))
    mirrored = _half_root(_e(-x, ly, lz_eff) - _d(-x, ly, lz_eff))
    return StationaryPoints(
        i=first,
        ii=None if first is None else -first,
        iii=mirrored,
        iv=None if mirrored is None else -mirrored,
    )


def realness_threshold(ly: float, lz_eff: float) -> float:
    """Smallest |x| at which the distributed stationary points become real."""
    return math.sqrt(lz_eff * lz_eff / 12.0 + ly * ly / 3.0)


def classify_rho(rho: float) -> Regime:
    """Regime from the shape quantity rho; ties go to the lower regime."""
    if rho <= RHO_THREE_POINT_MAX:
        return Regime.THREE_POINT_DAS
    if rho <= RHO_COLOCATED_MIN:
        return Regime.BOUNDARY_DAS
    return Regime.COLOCATED


def classify(sig: GeometrySignature) -> Regime:
    return classify_rho(sig.rho)


def a1_over_lx_three_point(rho: float) -> float:
    """Pair offset per unit room width equalising the centre and the side walls."""
    return math.sqrt(rho + 1.0) / (2.0 * _SQRT3)


def a1_over_lx_boundary(rho: float) -> float:
    """Pair offset per unit room width when only the side walls are critical."""
    inner = 2.0 * math.sqrt(rho + 1.0) - (rho + 1.0)
    if -1e-12 < inner < 0.0:
        # roundoff can push the radicand a hair below zero near rho = 3
        inner = 0.0
    return 0.5 * math.sqrt(inner)


def a1_over_lx(rho: float) -> float:
    """Optimal pair offset per unit room width, across all regimes."""
    regime = classify_rho(rho)
    if regime is Regime.THREE_POINT_DAS:
        return a1_over_lx_three_point(rho)
    if regime is Regime.BOUNDARY_DAS:
        return a1_over_lx_boundary(rho)
    return 0.0


def gamma_norm_three_point(rho: float) -> float:
    return 24.0 / (4.0 * rho + 1.0)


def gamma_norm_boundary(rho: float) -> float:
    return (2.0 * math.sqrt(rho + 1.0) + 2.0) / rho


def gamma_norm_colocated(rho: float) -> float:
    return 8.0 / (rho + 1.0)


def gamma_norm(rho: float) -> float:
    """Worst-case received power scaled by lx^2/(P*c): a shape-only quantity."""
    regime = classify_rho(rho)
    if regime is Regime.THREE_POINT_DAS:
        return gamma_norm_three_point(rho)
    if regime is Regime.BOUNDARY_DAS:
        return gamma_norm_boundary(rho)
    return gamma_norm_colocated(rho)


def gain_three_point(rho: float) -> float:
    return 3.0 * (rho + 1.0) / (4.0 * rho + 1.0)


def gain_boundary(rho: float) -> float:
    return ((rho + 1.0) ** 1.5 + (rho + 1.0)) / (4.0 * rho)


def gain(rho: float) -> float:
    """Worst-case power of the optimal pair over the co-located reference.

    Computed from the closed forms directly rather than as a ratio of powers,
    which would cancel catastrophically for extreme aspect ratios; the ratio
    identity is exercised by the tests instead.
    """
    regime = classify_rho(rho)
    if regime is Regime.THREE_POINT_DAS:
        return gain_three_point(rho)
    if regime is Regime.BOUNDARY_DAS:
        return gain_boundary(rho)
    return 1.0


def optimal_a1(room: Room) -> float:
    """Optimal nonnegative offset of the antenna pair; its twin mirrors it at -a1."""
    return room.lx * a1_over_lx(signature(room).rho)


def worst_case_power(room: Room, params: RadioParams) -> float:
    """Received power in watts at the worst receiver location under the optimal pair."""
    rho = signature(room).rho
    return params.tx_power * params.ref_gain * gamma_norm(rho) / (room.lx * room.lx)


def farfield_gain(room: Room) -> float:
    """Factor gained over placing both antennas at the centre of the wall."""
    return gain(signature(room).rho)


@dataclass(frozen=True)
class SolveReport:
    """Complete closed-form answer for one room."""

    a1_star: float
    a2_star: float
    regime: Regime
    x_crit: tuple[float, ...]
    gamma_star: float
    eta: float
    geometry: GeometrySignature

    def __post_init__(self) -> None:
        if self.a2_star != -self.a1_star:
            raise ValueError("the antenna pair must be mirrored: a2 = -a1")
        if self.a1_star < 0:
            raise ValueError("a1 must be the nonnegative pair offset")
        if not 1.0 - 1e-12 <= self.eta <= 3.0 + 1e-12:
            raise ValueError(f"gain must lie in [1, 3], got {self.eta}")


def solve(room: Room, params: RadioParams) -> SolveReport:
    """Assemble the full closed-form report for a room."""
    sig = signature(room)
    regime = classify(sig)
    a1 = optimal_a1(room)
    crit = critical_set(room, regime)
    return SolveReport(
        a1_star=a1,
        a2_star=-a1,
        regime=regime,
        x_crit=crit.x_crit,
        gamma_star=worst_case_power(room, params),
        eta=farfield_gain(room),
        geometry=sig,
    )
