"""Lambertian line-of-sight channel for a single AP-user link.

Transmitter and receiver planes are parallel, the LED points straight down and
the photodiode straight up, so irradiance and incidence angles coincide:
cos(phi) = cos(psi) = d_v / d.  Every user position is a 2-D point on the
receiver plane; only its horizontal distance from the AP matters here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

__all__ = [
    "AccessPoint",
    "ReceiverModel",
    "lambertian_index",
    "cell_radius",
    "channel_gain",
    "snr_per_subcarrier",
    "rate_per_subcarrier",
]


def _check_half_angle(theta: float) -> None:
    if not (0.0 < theta < math.pi / 2):
        raise DomainError(f"half-intensity angle must lie in (0, pi/2) rad, got {theta!r}")


def lambertian_index(theta: float) -> float:
    """Lambertian order m = -1 / log2(cos(theta)) of an LED with half-intensity angle `theta` (rad)."""
    _check_half_angle(theta)
    return -1.0 / math.log2(math.cos(theta))


def cell_radius(d_v: float, theta: float) -> float:
    """Radius of the hard-edged light cone on the receiver plane."""
    _check_half_angle(theta)
    if d_v <= 0:
        raise DomainError(f"d_v must be positive, got {d_v!r}")
    return d_v * math.tan(theta)


@dataclass(frozen=True)
class AccessPoint:
    """One LED luminaire and its resource budget.

    Defaults are the Table-1 values with a 60 degree LED and 64 subcarriers.
    `i0` is the on-axis luminous intensity in candela; zero means "not set".
    """

    id: int = 0
    center: tuple[float, float] = (0.0, 0.0)
    theta: float = math.radians(60.0)
    d_v: float = 3.5
    p_cell: float = 9.0
    b_cell: float = 20e6
    n_cell: int = 64
    i0: float = 0.0

    def __post_init__(self):
        _check_half_angle(self.theta)
        if self.d_v <= 0:
            raise DomainError(f"d_v must be positive, got {self.d_v!r}")
        if self.p_cell <= 0 or self.b_cell <= 0:
            raise DomainError("p_cell and b_cell must be positive")
        if int(self.n_cell) != self.n_cell or self.n_cell < 1:
            raise DomainError(f"n_cell must be an integer >= 1, got {self.n_cell!r}")
        if self.i0 < 0:
            raise DomainError(f"i0 must be nonnegative, got {self.i0!r}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    @property
    def m(self) -> float:
        return lambertian_index(self.theta)

    @property
    def radius(self) -> float:
        return cell_radius(self.d_v, self.theta)

    @property
    def p_sub(self) -> float:
        return self.p_cell / self.n_cell

    @property
    def b_sub(self) -> float:
        return self.b_cell / self.n_cell


@dataclass(frozen=True)
class ReceiverModel:
    """Photodiode front end shared by every user (Table-1 defaults).

    Attributes:
        a_d: photodiode area [m^2].
        gamma: optical-to-electrical conversion efficiency [A/W].
        psi_c: field-of-view half angle [rad].
        g: concentrator gain inside the field of view.
        n_noise: noise power spectral density [A^2/Hz].
        sigma_ratio: optical-to-electrical power ratio.
        c_const: capacity-bound constant, 0 < c <= 1.
    """

    a_d: float = 1e-4
    gamma: float = 0.53
    psi_c: float = math.pi / 2
    g: float = 1.0
    n_noise: float = 1e-21
    sigma_ratio: float = 1.0
    c_const: float = field(default=1.0)

    def __post_init__(self):
        for name in ("a_d", "gamma", "g", "n_noise", "sigma_ratio"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be nonnegative")
        if not (0.0 < self.psi_c <= math.pi / 2):
            raise DomainError(f"psi_c must lie in (0, pi/2], got {self.psi_c!r}")
        if not (0.0 < self.c_const <= 1.0):
            raise DomainError(f"c_const must lie in (0, 1], got {self.c_const!r}")


def gain_prefactor(ap: AccessPoint, rx: ReceiverModel) -> float:
    """(m+1) A_d g d_v^(m+1) / (2 pi): the gain is this over d^(m+3)."""
    m = ap.m
    return (m + 1.0) * rx.a_d * rx.g * ap.d_v ** (m + 1.0) / (2.0 * math.pi)


def channel_gain(ap: AccessPoint, rx: ReceiverModel, horizontal_distance: float) -> float:
    """DC gain of the LoS link at `horizontal_distance` metres from the AP nadir.

    Returns 0 outside the cell cone (r > r_k) or outside the receiver FOV.
    """
    r = float(horizontal_distance)
    if r < 0:
        raise DomainError(f"horizontal distance must be nonnegative, got {r!r}")
    if r > ap.radius or math.atan2(r, ap.d_v) > rx.psi_c:
        return 0.0
    d = math.hypot(r, ap.d_v)
    return gain_prefactor(ap, rx) / d ** (ap.m + 3.0)


def snr_from_gain(ap: AccessPoint, rx: ReceiverModel, h: float) -> float:
    if rx.n_noise <= 0 or rx.sigma_ratio <= 0:
        raise DomainError("noise density and optical/electrical ratio must be positive")
    if h == 0.0:
        return 0.0
    return (rx.gamma * ap.p_sub * h) ** 2 / (rx.sigma_ratio * rx.n_noise * ap.b_sub)


def snr_per_subcarrier(ap: AccessPoint, rx: ReceiverModel, horizontal_distance: float) -> float:
    """Electrical SNR of one subcarrier, (gamma P_sub h)^2 / (sigma N_n B_sub)."""
    return snr_from_gain(ap, rx, channel_gain(ap, rx, horizontal_distance))


def rate_per_subcarrier(snr: float, bandwidth: float, c: float = 1.0) -> float:
    """Capacity lower bound (bandwidth/2) log2(1 + c^2 snr) in bits/s.

    Pass ``ap.b_sub`` for the per-subcarrier reading or ``ap.b_cell`` for the
    whole-cell reading; callers choose explicitly.
    """
    if snr < 0:
        raise DomainError(f"snr must be nonnegative, got {snr!r}")
    if bandwidth <= 0:
        raise DomainError(f"bandwidth must be positive, got {bandwidth!r}")
    return 0.5 * bandwidth * math.log2(1.0 + c * c * snr)
