"""Seeded Monte Carlo mobility simulation over a network layout.

Users start uniformly over the hall.  Each step of length T_s a user draws a
speed uniform on [0, v_max(zone)]; Zone-0 users walk in a uniformly random
direction, everyone else heads straight for the nearest AP centre.  After
the move users are clamped to the walls and reclassified.  A step fails in
Zone z when more users sit in Zone z than the network has Zone-z
subcarriers; the failure rates are the mean of those 0/1 indicators over
steps and replications.

Replication r draws from its own stream ``SeedSequence(seed, spawn_key=(r,))``
in a fixed order (initial positions, then per step a (speed, angle) pair per
user), so results do not depend on how replications are batched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .channel import AccessPoint, ReceiverModel
from .errors import DomainError
from .network import OUT_OF_COVERAGE, ZONE0, Hall, NetworkLayout, build_layout, locate_many
from .zones import IlluminationSpec, MobilitySpec, ase

__all__ = [
    "SimConfig",
    "UserState",
    "Population",
    "FailureStats",
    "LayoutTemplate",
    "SweepRow",
    "replication_rng",
    "init_users",
    "step",
    "failure_indicators",
    "zone_capacities",
    "run",
    "sweep",
]

# keeps a batch of random tapes around 16 MB
_TAPE_BUDGET = 2_000_000


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings; defaults reproduce the hall example.

    ``users`` is the population size M; the matching density is
    M / hall area.  ``beta`` is carried for bookkeeping only: the layout's
    zone designs already encode it.
    """

    users: int = 120
    beta: float = 0.4
    t_s: float = 0.5
    duration: float = 120.0
    v_max_zone0: float = 0.5
    v_max_zone1: float = 2.0
    seed: int = 0
    replications: int = 200

    def __post_init__(self):
        if self.users < 0:
            raise DomainError("users must be nonnegative")
        if self.t_s <= 0 or self.duration <= 0:
            raise DomainError("t_s and duration must be positive")
        if self.v_max_zone0 < 0 or self.v_max_zone1 < 0:
            raise DomainError("speed caps must be nonnegative")
        if self.replications < 1:
            raise DomainError("need at least one replication")
        n = self.duration / self.t_s
        if abs(n - round(n)) > 1e-9:
            raise DomainError(f"duration {self.duration} is not a multiple of t_s {self.t_s}")
        if not (0 <= self.seed < 2 ** 64):
            raise DomainError("seed must be an unsigned 64-bit integer")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.t_s))

    @classmethod
    def from_density(cls, epsilon: float, hall: Hall, **kwargs) -> SimConfig:
        return cls(users=int(round(epsilon * hall.area)), **kwargs)


@dataclass(frozen=True)
class UserState:
    id: int
    position: tuple[float, float]
    zone: int
    serving_ap: int | None


@dataclass
class Population:
    """Array view of all users: positions (M, 2), serving AP index (-1 if none), zone code."""

    positions: np.ndarray
    serving: np.ndarray
    zone: np.ndarray

    def __len__(self) -> int:
        return len(self.positions)

    def states(self, layout: NetworkLayout) -> list[UserState]:
        return [
            UserState(i, (float(p[0]), float(p[1])), int(z),
                      None if s < 0 else layout.aps[int(s)].id)
            for i, (p, s, z) in enumerate(zip(self.positions, self.serving, self.zone))
        ]


@dataclass
class FailureStats:
    """Time- and replication-averaged failure rates.

    ``series0``/``series1`` hold, per step, the fraction of replications in
    which that zone failed.  ``handover_count`` totals serving-AP changes
    between two different APs over all replications.
    """

    delta0: float
    delta1: float
    delta0_se: float
    delta1_se: float
    series0: np.ndarray
    series1: np.ndarray
    handover_count: int
    out_of_coverage_fraction: float
    replications: int

    @property
    def handovers_per_replication(self) -> float:
        return self.handover_count / self.replications


def replication_rng(seed: int, replication: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(replication,)))


def _classify(layout, xy):
    return locate_many(layout, xy)


def _advance(layout: NetworkLayout, xy: np.ndarray, zone: np.ndarray,
             u_speed: np.ndarray, u_angle: np.ndarray, cfg: SimConfig) -> np.ndarray:
    """Move users one step; `xy` has shape (..., M, 2), the draws shape (..., M)."""
    in_zone0 = zone == ZONE0
    vmax = np.where(in_zone0, cfg.v_max_zone0, cfg.v_max_zone1)
    dist = cfg.t_s * vmax * u_speed

    angle = 2.0 * np.pi * u_angle
    wander = np.stack([np.cos(angle), np.sin(angle)], axis=-1) * dist[..., None]

    to_centers = layout.centers - xy[..., None, :]  # (..., M, K, 2)
    d = np.sqrt(np.einsum("...kj,...kj->...k", to_centers, to_centers))
    j = np.argmin(d, axis=-1)
    d_near = np.take_along_axis(d, j[..., None], axis=-1)[..., 0]
    v_near = np.take_along_axis(to_centers, j[..., None, None], axis=-2)[..., 0, :]
    travel = np.minimum(dist, d_near)
    with np.errstate(invalid="ignore", divide="ignore"):
        unit = np.where(d_near[..., None] > 0, v_near / d_near[..., None], 0.0)
    homing = unit * travel[..., None]

    new = xy + np.where(in_zone0[..., None], wander, homing)
    new[..., 0] = np.clip(new[..., 0], 0.0, layout.hall.length)
    new[..., 1] = np.clip(new[..., 1], 0.0, layout.hall.width)
    return new


def init_users(layout: NetworkLayout, cfg: SimConfig, rng: np.random.Generator) -> Population:
    """Drop ``cfg.users`` users uniformly over the hall and classify them."""
    dims = np.array([layout.hall.length, layout.hall.width])
    xy = rng.random((cfg.users, 2)) * dims
    serving, zone = _classify(layout, xy)
    return Population(xy, serving, zone)


def step(layout: NetworkLayout, pop: Population, cfg: SimConfig,
         rng: np.random.Generator) -> tuple[Population, int]:
    """Advance one time step; returns the new population and its handover count."""
    u = rng.random((2, len(pop)))
    xy = _advance(layout, pop.positions, pop.zone, u[0], u[1], cfg)
    serving, zone = _classify(layout, xy)
    handovers = int(np.count_nonzero((pop.serving >= 0) & (serving >= 0) & (serving != pop.serving)))
    return Population(xy, serving, zone), handovers


def zone_capacities(layout: NetworkLayout) -> tuple[int, int]:
    """Network-wide (Zone-0, Zone-1) subcarrier capacity."""
    cap0 = sum(zd.n0 for zd in layout.zone_designs)
    total = sum(ap.n_cell for ap in layout.aps)
    return cap0, total - cap0


def failure_indicators(layout: NetworkLayout, zone: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """0/1 failure indicators from zone codes along the last axis.

    Out-of-coverage users hold no Zone-0 resources and count against Zone 1.
    """
    cap0, cap1 = zone_capacities(layout)
    zone = np.asarray(zone)
    u0 = np.count_nonzero(zone == ZONE0, axis=-1)
    u1 = zone.shape[-1] - u0
    return (u0 > cap0).astype(np.int64), (u1 > cap1).astype(np.int64)


def _run_batch(layout, cfg, reps):
    m, n = cfg.users, cfg.n_steps
    dims = np.array([layout.hall.length, layout.hall.width])
    gens = [replication_rng(cfg.seed, r) for r in reps]
    xy = np.stack([g.random((m, 2)) for g in gens]) * dims
    tapes = np.stack([g.random((n, 2, m)) for g in gens])  # (B, steps, 2, M)
    serving, zone = _classify(layout, xy)
    ind0 = np.empty((len(reps), n), dtype=np.int64)
    ind1 = np.empty_like(ind0)
    handovers = 0
    out = 0
    for t in range(n):
        xy = _advance(layout, xy, zone, tapes[:, t, 0], tapes[:, t, 1], cfg)
        new_serving, zone = _classify(layout, xy)
        handovers += int(np.count_nonzero((serving >= 0) & (new_serving >= 0) & (new_serving != serving)))
        serving = new_serving
        out += int(np.count_nonzero(zone == OUT_OF_COVERAGE))
        ind0[:, t], ind1[:, t] = failure_indicators(layout, zone)
    return ind0, ind1, handovers, out


def run(layout: NetworkLayout, cfg: SimConfig) -> FailureStats:
    """Simulate ``cfg.replications`` independent runs and average the failure indicators."""
    n, reps = cfg.n_steps, cfg.replications
    batch = max(1, _TAPE_BUDGET // max(1, 2 * n * cfg.users))
    ind0 = np.empty((reps, n), dtype=np.int64)
    ind1 = np.empty_like(ind0)
    handovers = out = 0
    for lo in range(0, reps, batch):
        hi = min(reps, lo + batch)
        b0, b1, h, o = _run_batch(layout, cfg, range(lo, hi))
        ind0[lo:hi], ind1[lo:hi] = b0, b1
        handovers += h
        out += o

    def _se(ind):
        if reps < 2:
            return 0.0
        return float(ind.mean(axis=1).std(ddof=1) / math.sqrt(reps))

    total_user_steps = reps * n * cfg.users
    return FailureStats(
        delta0=float(ind0.sum() / ind0.size), delta1=float(ind1.sum() / ind1.size),
        delta0_se=_se(ind0), delta1_se=_se(ind1),
        series0=ind0.mean(axis=0), series1=ind1.mean(axis=0),
        handover_count=handovers,
        out_of_coverage_fraction=(out / total_user_steps) if total_user_steps else 0.0,
        replications=reps,
    )


@dataclass(frozen=True)
class LayoutTemplate:
    """Everything needed to rebuild a layout for a given (epsilon, beta)."""

    hall: Hall = field(default_factory=Hall)
    k: int = 3
    theta: float = math.radians(60.0)
    overlap_width: float = 1.2
    ap: AccessPoint = field(default_factory=AccessPoint)
    rx: ReceiverModel = field(default_factory=ReceiverModel)
    illum: IlluminationSpec = field(default_factory=IlluminationSpec)
    mob: MobilitySpec = field(default_factory=MobilitySpec)

    def build(self, epsilon: float | None = None, beta: float | None = None) -> NetworkLayout:
        mob = self.mob
        if epsilon is not None:
            mob = replace(mob, epsilon=epsilon)
        if beta is not None:
            mob = replace(mob, beta=beta)
        return build_layout(self.hall, self.k, self.theta, self.overlap_width,
                            self.ap, self.rx, self.illum, mob)


@dataclass
class SweepRow:
    beta: float
    epsilon: float
    users: int
    stats: FailureStats
    eta: float
    eta_norm: float


def sweep(template: LayoutTemplate, cfg: SimConfig, beta_grid: Sequence[float],
          epsilon_grid: Sequence[float]) -> list[SweepRow]:
    """One simulation per (beta, epsilon) grid point, rows ordered epsilon-major.

    Every point reuses ``cfg.seed``, so points sharing a density see common
    random numbers.  ``eta_norm`` is the first AP's ASE at its design point,
    normalised by the largest value over the beta grid at the same density.
    """
    if not beta_grid or not epsilon_grid:
        raise DomainError("grids must be nonempty")
    rows = []
    for eps in epsilon_grid:
        group = []
        for beta in beta_grid:
            layout = template.build(epsilon=eps, beta=beta)
            users = int(round(eps * template.hall.area))
            stats = run(layout, replace(cfg, users=users, beta=beta))
            zd = layout.zone_designs[0]
            eta = ase(layout.aps[0], template.rx, zd.r0, zd.n0)
            group.append(SweepRow(beta, eps, users, stats, eta, float("nan")))
        peak = max(r.eta for r in group)
        for r in group:
            r.eta_norm = r.eta / peak if peak > 0 else 0.0
        rows.extend(group)
    return rows
