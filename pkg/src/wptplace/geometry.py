"""Cuboid room geometry, the antenna-line constraint, and critical receiver sets."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Regime(Enum):
    """Optimal antenna architecture, decided by the room shape quantity rho.

    THREE_POINT_DAS: wide, shallow rooms (rho <= 5/4) where the middle of the
        far wall competes with its sides for worst coverage.
    BOUNDARY_DAS: intermediate rooms (5/4 <= rho <= 3) where only the far
        corners are critical.
    COLOCATED: deep rooms (rho >= 3) where both antennas belong at the centre.
    """

    THREE_POINT_DAS = "ThreePointDAS"
    BOUNDARY_DAS = "BoundaryDAS"
    COLOCATED = "Colocated"


@dataclass(frozen=True)
class Room:
    """Cuboid environment: x in [-lx/2, lx/2], y in [0, ly], z in [-lz/2, lz/2].

    Transmit antennas sit on the horizontal line y = 0, z = z0. A flat room
    (lz = 0) is accepted as a degenerate 2-D case, but only with z0 = 0; such
    rooms are flagged in reports.
    """

    lx: float
    ly: float
    lz: float
    z0: float = 0.0

    def __post_init__(self) -> None:
        if not self.lx > 0:
            raise ValueError(f"L_x must be positive, got {self.lx}")
        if not self.ly > 0:
            raise ValueError(f"L_y must be positive, got {self.ly}")
        if not self.lz >= 0:
            raise ValueError(f"L_z must be non-negative, got {self.lz}")
        if self.lz == 0 and self.z0 != 0:
            raise ValueError("a flat room (L_z = 0) requires z0 = 0")
        if not -self.lz / 2 <= self.z0 <= self.lz / 2:
            raise ValueError(f"z0 must lie in [-L_z/2, L_z/2], got {self.z0}")

    @property
    def effective_height(self) -> float:
        """Height lz + 2|z0| of the symmetrised room, as seen from the antenna line."""
        return self.lz + 2 * abs(self.z0)

    @property
    def is_degenerate(self) -> bool:
        """True for the flat 2-D special case lz = 0."""
        return self.lz == 0

    def contains(self, point: ReceiverPoint) -> bool:
        return (
            -self.lx / 2 <= point.x <= self.lx / 2
            and 0 <= point.y <= self.ly
            and -self.lz / 2 <= point.z <= self.lz / 2
        )


@dataclass(frozen=True)
class GeometrySignature:
    """Dimensionless room shape: ry = ly/lx, rz = effective height / lx.

    The derived quantity rho = 4*ry**2 + rz**2 alone decides the regime; it is
    a property so it can never drift out of sync with ry and rz.
    """

    ry: float
    rz: float

    def __post_init__(self) -> None:
        if self.ry < 0 or self.rz < 0:
            raise ValueError("shape ratios must be non-negative")

    @property
    def rho(self) -> float:
        return 4 * self.ry * self.ry + self.rz * self.rz


@dataclass(frozen=True)
class ReceiverPoint:
    """A candidate receiver location inside the room."""

    x: float
    y: float
    z: float


@dataclass(frozen=True)
class CriticalSet:
    """Receiver positions that can attain the worst received power."""

    x_crit: tuple[float, ...]
    y_crit: float
    z_crit: float


def signature(room: Room) -> GeometrySignature:
    """Dimensionless shape ratios of a room; invariant under uniform scaling."""
    return GeometrySignature(ry=room.ly / room.lx, rz=room.effective_height / room.lx)


def critical_set(room: Room, regime: Regime) -> CriticalSet:
    """Worst-case receiver candidates for a symmetric antenna pair.

    Received power falls with depth and with vertical distance from the
    antenna line, so the worst receiver sits on the far wall (y = ly) at the
    vertical edge away from z0; at z0 = 0 the bottom edge is reported. Along
    x the side walls are always candidates, and the centre joins them in the
    three-point regime.
    """
    z_crit = -room.lz / 2 if room.z0 >= 0 else room.lz / 2
    if regime is Regime.THREE_POINT_DAS:
        x_crit = (-room.lx / 2, 0.0, room.lx / 2)
    else:
        x_crit = (-room.lx / 2, room.lx / 2)
    return CriticalSet(x_crit=x_crit, y_crit=room.ly, z_crit=z_crit)
