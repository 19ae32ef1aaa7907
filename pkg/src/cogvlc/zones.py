"""Zone 0 / Zone 1 sizing under illumination and handover constraints.

Zone 0 is the inner disc of radius r0 reserved for primary users, Zone 1 the
ring out to the cell edge.  A design fixes r0 and the subcarrier split
(n0, n1 = N_cell - n0).  Two independent limits bound r0 from above:

* the illumination limit, so that illuminance at the Zone-0 edge stays above
  E_min when the centre sits at E_max;
* the handover limit, so that primary users, the fraction of them leaving
  Zone 0, and the handover traffic of Zone-1 users all fit in N_cell
  subcarriers.

The serving requirement (at least U_pu primary users at density epsilon)
bounds r0 from below.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal, NamedTuple

from scipy import integrate, optimize

from .channel import AccessPoint, ReceiverModel, gain_prefactor, lambertian_index
from .errors import DomainError, InfeasibleError

__all__ = [
    "IlluminationSpec",
    "MobilitySpec",
    "ZoneDesign",
    "HandoverLimit",
    "ThresholdAngle",
    "RateApproximationWarning",
    "illuminance_at",
    "luminous_intensity_bounds",
    "illum_radius_limit",
    "illumination_threshold_angle",
    "avg_subcarrier_rate_closed",
    "avg_subcarrier_rate_numeric",
    "compare_rate_routes",
    "ase",
    "handover_radius_limit",
    "max_zone0_subcarriers",
    "design_zone",
]

Bandwidth = Literal["sub", "cell"]


@dataclass(frozen=True)
class IlluminationSpec:
    """Brightness span [e_min, e_max] in lux required across Zone 0."""

    e_min: float = 200.0
    e_max: float = 800.0

    def __post_init__(self):
        if not (0 < self.e_min <= self.e_max):
            raise DomainError(f"need 0 < e_min <= e_max, got [{self.e_min}, {self.e_max}]")

    @property
    def ratio(self) -> float:
        return self.e_max / self.e_min


@dataclass(frozen=True)
class MobilitySpec:
    """Traffic assumptions used to dimension the handover reserve.

    Attributes:
        epsilon: user density [user/m^2].
        beta: fraction of primary users expected to leave Zone 0.
        b_ho: bandwidth-equivalent cost of one handover; b_ho / B_sub is the
            number of subcarriers one handover occupies.
        u_pu: number of primary users Zone 0 must be able to hold.
    """

    epsilon: float = 0.4
    beta: float = 0.4
    b_ho: float = 10e3
    u_pu: int = 2

    def __post_init__(self):
        if self.epsilon < 0:
            raise DomainError(f"epsilon must be nonnegative, got {self.epsilon!r}")
        if not (0.0 <= self.beta <= 1.0):
            raise DomainError(f"beta must lie in [0, 1], got {self.beta!r}")
        if self.b_ho < 0:
            raise DomainError(f"b_ho must be nonnegative, got {self.b_ho!r}")
        if self.u_pu < 0:
            raise DomainError(f"u_pu must be nonnegative, got {self.u_pu!r}")


@dataclass(frozen=True)
class ZoneDesign:
    """A sized cell: Zone-0 radius, subcarrier split and the limits behind them.

    ``lambda_cap`` is the handover limit clamped to the cell radius and
    ``lambda_raw`` the unclamped value; ``r0_max`` = min(Lambda, lambda_cap)
    so [r0_min, r0_max] is the whole feasible interval for r0.
    """

    r0: float
    r1_width: float
    n0: int
    n1: int
    lambda_cap: float
    big_lambda_cap: float
    r0_min: float
    r0_max: float
    lambda_raw: float
    r_cell: float

    @property
    def n_cell(self) -> int:
        return self.n0 + self.n1

    def resource_split(self, ap: AccessPoint) -> dict[str, tuple[float, float]]:
        """Per-zone (zone0, zone1) optical power, bandwidth and subcarriers."""
        n = ap.n_cell
        return {
            "power": (self.n0 * ap.p_cell / n, self.n1 * ap.p_cell / n),
            "bandwidth": (self.n0 * ap.b_cell / n, self.n1 * ap.b_cell / n),
            "subcarriers": (self.n0, self.n1),
        }


class HandoverLimit(NamedTuple):
    raw: float
    clamped: float


class ThresholdAngle(NamedTuple):
    angle: float
    bracketed: bool


class RateApproximationWarning(UserWarning):
    """Closed-form and quadrature zone rates disagree by more than 10 %."""


# -- illumination -----------------------------------------------------------

def illuminance_at(i0: float, d_v: float, m: float, r: float) -> float:
    """Horizontal illuminance [lx] at distance `r` from the nadir of an LED with intensity `i0` [cd]."""
    if d_v <= 0 or r < 0 or i0 < 0:
        raise DomainError("need d_v > 0, r >= 0, i0 >= 0")
    return i0 * d_v ** (m + 1.0) / (r * r + d_v * d_v) ** ((m + 3.0) / 2.0)


def luminous_intensity_bounds(spec: IlluminationSpec, d_v: float) -> tuple[float, float]:
    return spec.e_min * d_v * d_v, spec.e_max * d_v * d_v


def illum_radius_limit(spec: IlluminationSpec, d_v: float, m: float) -> float:
    """Largest r0 whose edge illuminance stays >= e_min with the centre at e_max."""
    if d_v <= 0 or m <= 0:
        raise DomainError("need d_v > 0 and m > 0")
    return d_v * math.sqrt(spec.ratio ** (2.0 / (m + 3.0)) - 1.0)


def _threshold_gap(theta: float, ratio: float) -> float:
    m = lambertian_index(theta)
    return math.sqrt(ratio ** (2.0 / (m + 3.0)) - 1.0) - math.tan(theta)


def illumination_threshold_angle(ratio: float) -> ThresholdAngle:
    """Half-angle below which the illumination limit exceeds the cell radius.

    For LEDs narrower than the returned angle the illumination constraint
    never binds.  ``bracketed`` is False when no sign change exists inside
    (0, pi/2) and the angle is a boundary value.
    """
    if ratio <= 1.0:
        raise DomainError(f"illumination ratio must exceed 1, got {ratio!r}")
    lo, hi = 1e-6, math.pi / 2 - 1e-9
    g_lo, g_hi = _threshold_gap(lo, ratio), _threshold_gap(hi, ratio)
    if g_lo <= 0:
        return ThresholdAngle(0.0, False)
    if g_hi > 0:
        return ThresholdAngle(math.pi / 2, False)
    return ThresholdAngle(optimize.brentq(_threshold_gap, lo, hi, args=(ratio,), xtol=1e-14), True)


# -- per-zone average rates -------------------------------------------------

def _check_zone(ap: AccessPoint, r_min: float, r_max: float) -> None:
    if not (0.0 <= r_min < r_max):
        raise DomainError(f"need 0 <= r_min < r_max, got [{r_min}, {r_max}]")
    if r_max > ap.radius * (1 + 1e-12):
        raise DomainError(f"r_max={r_max} exceeds the cell radius {ap.radius}")


def _snr_scale(ap: AccessPoint, rx: ReceiverModel) -> float:
    """c^2 * rho * kappa-numerator, so SNR(u) = scale / u^(m+3) with u = r^2 + d_v^2."""
    if rx.n_noise <= 0 or rx.sigma_ratio <= 0:
        raise DomainError("noise density and optical/electrical ratio must be positive")
    rho = (ap.p_sub * rx.gamma) ** 2 / (rx.sigma_ratio * rx.n_noise * ap.b_sub)
    return rx.c_const ** 2 * rho * gain_prefactor(ap, rx) ** 2


def point_rate(ap: AccessPoint, rx: ReceiverModel, r: float) -> float:
    """0.5 log2(1 + c^2 SNR) at radius `r` [bits/s/Hz], no cell cut-off applied."""
    u = r * r + ap.d_v ** 2
    return 0.5 * math.log2(1.0 + _snr_scale(ap, rx) / u ** (ap.m + 3.0))


def avg_subcarrier_rate_closed(ap: AccessPoint, rx: ReceiverModel, r_min: float, r_max: float) -> float:
    """High-SNR closed form for the mean per-subcarrier rate over an annulus.

    The result is normalised per Hz of subcarrier bandwidth (bits/s/Hz); users
    are uniform over the annulus, hence uniform in u = r^2 + d_v^2.
    """
    _check_zone(ap, r_min, r_max)
    m = ap.m
    d_max = r_max ** 2 + ap.d_v ** 2
    d_min = r_min ** 2 + ap.d_v ** 2
    scale = _snr_scale(ap, rx)
    if scale == 0.0:
        return 0.0
    # ln(rho * kappa) evaluated at the outer and inner edge
    ln_outer = math.log(scale) - (m + 3.0) * math.log(d_max)
    ln_inner = math.log(scale) - (m + 3.0) * math.log(d_min)
    num = d_max * (ln_outer + m + 3.0) - d_min * (ln_inner + m + 3.0)
    return num / (2.0 * math.log(2.0) * (r_max ** 2 - r_min ** 2))


def avg_subcarrier_rate_numeric(ap: AccessPoint, rx: ReceiverModel, r_min: float, r_max: float,
                                rtol: float = 1e-8) -> float:
    """Mean of 0.5 log2(1 + c^2 SNR) over the annulus by adaptive quadrature."""
    _check_zone(ap, r_min, r_max)
    scale = _snr_scale(ap, rx)
    if scale == 0.0:
        return 0.0
    k = ap.m + 3.0
    d_min = r_min ** 2 + ap.d_v ** 2
    d_max = r_max ** 2 + ap.d_v ** 2
    val, _ = integrate.quad(lambda u: math.log1p(scale / u ** k), d_min, d_max,
                            epsabs=0.0, epsrel=rtol, limit=200)
    return val / (2.0 * math.log(2.0) * (d_max - d_min))


def compare_rate_routes(ap: AccessPoint, rx: ReceiverModel, r_min: float, r_max: float,
                        warn_above: float = 0.10) -> float:
    """Relative deviation of the closed form from quadrature.

    Emits :class:`RateApproximationWarning` above `warn_above`; the closed
    form assumes high SNR and degrades quickly towards the cell edge.
    """
    closed = avg_subcarrier_rate_closed(ap, rx, r_min, r_max)
    numeric = avg_subcarrier_rate_numeric(ap, rx, r_min, r_max)
    rel = abs(closed - numeric) / abs(numeric) if numeric else abs(closed)
    if rel > warn_above:
        warnings.warn(
            f"closed-form zone rate off by {rel:.1%} on [{r_min:.3g}, {r_max:.3g}] m",
            RateApproximationWarning, stacklevel=2)
    return rel


def _zone_rate(ap, rx, r_min, r_max, method):
    if r_max - r_min <= 0.0:
        # empty zone: the mean degenerates to the value on its boundary circle
        return point_rate(ap, rx, r_min)
    if method == "closed":
        return avg_subcarrier_rate_closed(ap, rx, r_min, r_max)
    return avg_subcarrier_rate_numeric(ap, rx, r_min, r_max)


def zone_rates(ap: AccessPoint, rx: ReceiverModel, r0: float,
               method: Literal["numeric", "closed"] = "numeric") -> tuple[float, float]:
    """Normalised mean per-subcarrier rates (Zone 0, Zone 1) for a split at r0."""
    r_k = ap.radius
    if not (0.0 <= r0 <= r_k * (1 + 1e-12)):
        raise DomainError(f"r0 must lie in [0, {r_k}], got {r0!r}")
    r0 = min(r0, r_k)
    return _zone_rate(ap, rx, 0.0, r0, method), _zone_rate(ap, rx, r0, r_k, method)


def ase(ap: AccessPoint, rx: ReceiverModel, r0: float, n0: int, *,
        bandwidth: Bandwidth = "sub", method: Literal["numeric", "closed"] = "numeric") -> float:
    """Area spectral efficiency of one cell split at (r0, n0).

    eta = [n0 R0 + (N_cell - n0) R1] / (pi B_cell r_k^2), where Rz is the mean
    per-subcarrier rate in bits/s.  ``bandwidth`` picks the bandwidth that
    multiplies log2(1 + SNR)/2: ``"sub"`` uses B_sub, ``"cell"`` uses B_cell.
    The result is in bits/s per Hz of cell bandwidth per m^2.
    """
    if not (0 <= n0 <= ap.n_cell):
        raise DomainError(f"n0 must lie in [0, {ap.n_cell}], got {n0!r}")
    rbar0, rbar1 = zone_rates(ap, rx, r0, method)
    return ase_from_rates(ap, rbar0, rbar1, n0, bandwidth=bandwidth)


def ase_from_rates(ap: AccessPoint, rbar0: float, rbar1: float, n0, *, bandwidth: Bandwidth = "sub"):
    """Same as :func:`ase` with precomputed normalised zone rates; `n0` may be an array."""
    bw = {"sub": ap.b_sub, "cell": ap.b_cell}[bandwidth]
    total = n0 * rbar0 * bw + (ap.n_cell - n0) * rbar1 * bw
    return total / (math.pi * ap.b_cell * ap.radius ** 2)


# -- handover ---------------------------------------------------------------

def handover_radius_limit(ap: AccessPoint, mob: MobilitySpec) -> HandoverLimit:
    """Largest r0 for which Zone-0 users, leavers and handover traffic fit in N_cell.

    Raises:
        InfeasibleError: handover cost alone exhausts the subcarrier budget.
    """
    r_k = ap.radius
    ho_subcarriers = mob.b_ho * ap.n_cell / ap.b_cell  # B_HO / B_sub, kept fractional
    pe = math.pi * mob.epsilon
    numer = ap.n_cell - pe * r_k ** 2 * ho_subcarriers
    denom = pe * (1.0 + mob.beta - ho_subcarriers)
    if mob.epsilon == 0:
        return HandoverLimit(math.inf, r_k)
    if denom <= 0 or numer < 0:
        raise InfeasibleError(
            "handover cost exceeds the subcarrier budget", "handover",
            numerator=numer, denominator=denom, ho_subcarriers=ho_subcarriers)
    raw = math.sqrt(numer / denom)
    return HandoverLimit(raw, min(raw, r_k))


def max_zone0_subcarriers(mob: MobilitySpec, lambda_raw: float, n_cell: int) -> int:
    """Zone-0 subcarrier count epsilon * pi * lambda^2, rounded to nearest and capped at n_cell."""
    if lambda_raw < 0:
        raise DomainError(f"lambda must be nonnegative, got {lambda_raw!r}")
    if math.isinf(lambda_raw):
        return n_cell
    n = math.floor(mob.epsilon * math.pi * lambda_raw ** 2 + 0.5)
    return int(min(max(n, 0), n_cell))


def min_zone0_radius(mob: MobilitySpec) -> float:
    """Smallest r0 that holds U_pu primary users at density epsilon."""
    if mob.u_pu == 0:
        return 0.0
    if mob.epsilon == 0:
        raise DomainError("zero user density cannot serve any primary user")
    return math.sqrt(mob.u_pu / (math.pi * mob.epsilon))


def design_zone(ap: AccessPoint, rx: ReceiverModel, illum: IlluminationSpec,
                mob: MobilitySpec) -> ZoneDesign:
    """Size Zone 0 of `ap` so that illumination, handover and serving constraints all hold.

    Picks r0 = min(Lambda, lambda) (the largest admissible radius); callers
    after maximal ASE should use ``design.r0_min`` instead.

    Raises:
        InfeasibleError: the serving requirement exceeds the upper limit.
    """
    r_k = ap.radius
    big_lambda = illum_radius_limit(illum, ap.d_v, ap.m)
    lam = handover_radius_limit(ap, mob)
    r0_min = min_zone0_radius(mob)
    r0_max = min(big_lambda, lam.clamped)
    if r0_min > r0_max:
        bound = "illumination" if big_lambda < lam.clamped else "handover"
        raise InfeasibleError(
            f"serving {mob.u_pu} primary users needs r0 >= {r0_min:.4g} m "
            f"but the {bound} limit allows at most {r0_max:.4g} m",
            bound, r0_min=r0_min, r0_max=r0_max, **{"Lambda": big_lambda, "lambda": lam.clamped})
    n0 = max_zone0_subcarriers(mob, lam.raw, ap.n_cell)
    return ZoneDesign(
        r0=r0_max, r1_width=r_k - r0_max, n0=n0, n1=ap.n_cell - n0,
        lambda_cap=lam.clamped, big_lambda_cap=big_lambda, r0_min=r0_min, r0_max=r0_max,
        lambda_raw=lam.raw, r_cell=r_k)
