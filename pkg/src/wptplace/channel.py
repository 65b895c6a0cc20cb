"""Spherical-wavefront line-of-sight channel, MRT beamforming, received power."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .geometry import ReceiverPoint

# Below this separation the 1/D free-space model is meaningless.
MIN_DISTANCE = 1e-9


class ZeroDistance(ValueError):
    """Receiver coincides with a transmit antenna."""


class ZeroChannel(ValueError):
    """Channel vector has zero norm, so no beamforming direction exists."""


@dataclass(frozen=True)
class RadioParams:
    """Carrier and link-budget constants.

    wavelength sets the channel phases only; received power is wavelength-free.
    ref_gain is the channel power gain at 1 m, tx_power the total transmit
    power in watts shared across the antennas.
    """

    wavelength: float
    ref_gain: float = 1.0
    tx_power: float = 1.0

    def __post_init__(self) -> None:
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        if not self.ref_gain > 0:
            raise ValueError(f"ref_gain must be positive, got {self.ref_gain}")
        if not self.tx_power > 0:
            raise ValueError(f"tx_power must be positive, got {self.tx_power}")


@dataclass(frozen=True)
class Placement:
    """Transmit antenna x-coordinates on the line y = 0, z = z0.

    Containment in a particular room is checked with `within`, not at
    construction, since a placement carries no room of its own.
    """

    xs: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "xs", tuple(float(v) for v in self.xs))
        if len(self.xs) < 1:
            raise ValueError("a placement needs at least one antenna")

    @property
    def n_t(self) -> int:
        return len(self.xs)

    @property
    def aperture(self) -> float:
        return max(self.xs) - min(self.xs)

    def within(self, room) -> bool:
        half = room.lx / 2
        return all(-half <= x <= half for x in self.xs)


@dataclass(frozen=True)
class ChannelVector:
    """Complex per-antenna gains under the spherical wavefront model."""

    g: tuple[complex, ...]

    @property
    def norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for v in self.g))


def distance(antenna_x: float, z0: float, rx: ReceiverPoint) -> float:
    """Euclidean distance from an antenna at (antenna_x, 0, z0) to the receiver."""
    d = math.sqrt((rx.x - antenna_x) ** 2 + rx.y ** 2 + (rx.z - z0) ** 2)
    if d < MIN_DISTANCE:
        raise ZeroDistance(f"receiver within {MIN_DISTANCE} m of antenna at x={antenna_x}")
    return d


def channel_vector(placement: Placement, z0: float, rx: ReceiverPoint,
                   params: RadioParams) -> ChannelVector:
    """Per-antenna gains sqrt(ref_gain)/D_i * exp(-j*2*pi*D_i/wavelength)."""
    amp = math.sqrt(params.ref_gain)
    phase = -2.0 * math.pi / params.wavelength
    gains = []
    for ax in placement.xs:
        d = distance(ax, z0, rx)
        gains.append(amp / d * cmath.exp(1j * phase * d))
    return ChannelVector(g=tuple(gains))


def mrt_beamformer(g: ChannelVector, tx_power: float) -> np.ndarray:
    """Maximum ratio transmission vector sqrt(P) * g / ||g||.

    The result has squared norm tx_power and maximises the received power
    among all transmit vectors of that power.
    """
    vec = np.asarray(g.g, dtype=complex)
    nrm = np.linalg.norm(vec)
    if nrm == 0:
        raise ZeroChannel("cannot beamform on an all-zero channel")
    return math.sqrt(tx_power) * vec / nrm


def f_xyz(placement: Placement, z0: float, rx: ReceiverPoint) -> float:
    """Sum of inverse squared antenna-receiver distances (received power per P*c)."""
    total = 0.0
    for ax in placement.xs:
        d2 = (rx.x - ax) ** 2 + rx.y ** 2 + (rx.z - z0) ** 2
        if d2 < MIN_DISTANCE ** 2:
            raise ZeroDistance(f"receiver within {MIN_DISTANCE} m of antenna at x={ax}")
        total += 1.0 / d2
    return total


def f_x(placement: Placement, x: float, ly: float, lz_eff: float) -> float:
    """f_xyz restricted to the critical line: receivers at depth ly with
    vertical offset lz_eff/2 from the antenna line."""
    q = ly * ly + lz_eff * lz_eff / 4.0
    total = 0.0
    for ax in placement.xs:
        d2 = (x - ax) ** 2 + q
        if d2 < MIN_DISTANCE ** 2:
            raise ZeroDistance("critical-line receiver coincides with an antenna")
        total += 1.0 / d2
    return total


def received_power(placement: Placement, z0: float, rx: ReceiverPoint,
                   params: RadioParams) -> float:
    """Received power P * c * sum(1/D_i^2) in watts under MRT beamforming."""
    return params.tx_power * params.ref_gain * f_xyz(placement, z0, rx)


def fraunhofer_distance(placement: Placement, wavelength: float) -> float:
    """Informational far-field onset estimate 2 * aperture^2 / wavelength.

    Reported alongside results so users can judge whether a receiver is in
    the radiating near field of the array; never enforced.
    """
    ap = placement.aperture
    return 2.0 * ap * ap / wavelength
