"""Multi-AP layout in a rectangular hall and CCI-free Zone-1 band assignment.

APs sit on the long-axis midline of the hall.  Adjacent cells overlap, and
the overlap must fall inside Zone 1 of both cells; adjacent cells then use
disjoint Zone-1 subcarrier ranges so the overlap is free of co-channel
interference.  Hall coordinates: x along the length, y along the width, the
origin at a corner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .channel import AccessPoint, ReceiverModel
from .errors import DomainError, InfeasibleError, LayoutError
from .zones import IlluminationSpec, MobilitySpec, ZoneDesign, design_zone

__all__ = [
    "Hall",
    "NetworkLayout",
    "SubcarrierAssignment",
    "ZONE0",
    "ZONE1",
    "OUT_OF_COVERAGE",
    "build_layout",
    "assign_zone1_bands",
    "locate",
    "locate_many",
    "ranges_overlap",
]

ZONE0, ZONE1, OUT_OF_COVERAGE = 0, 1, -1


@dataclass(frozen=True)
class Hall:
    length: float = 30.0
    width: float = 10.0
    height: float = 3.5

    def __post_init__(self):
        if min(self.length, self.width, self.height) <= 0:
            raise DomainError("hall dimensions must be positive")

    @property
    def area(self) -> float:
        return self.length * self.width

    def corners(self) -> list[tuple[float, float]]:
        return [(0.0, 0.0), (self.length, 0.0), (0.0, self.width), (self.length, self.width)]

    def contains(self, p) -> bool:
        return 0.0 <= p[0] <= self.length and 0.0 <= p[1] <= self.width


@dataclass(frozen=True)
class NetworkLayout:
    hall: Hall
    aps: tuple[AccessPoint, ...]
    adjacency: frozenset[tuple[int, int]]
    zone_designs: tuple[ZoneDesign, ...]
    zone1_bands: tuple[range, ...] | None = None
    diagnostics: tuple[str, ...] = field(default=())

    @property
    def centers(self) -> np.ndarray:
        return np.array([ap.center for ap in self.aps], dtype=float)

    @property
    def radii(self) -> np.ndarray:
        return np.array([ap.radius for ap in self.aps])

    @property
    def zone0_radii(self) -> np.ndarray:
        return np.array([zd.r0 for zd in self.zone_designs])

    def index_of(self, ap_id: int) -> int:
        for i, ap in enumerate(self.aps):
            if ap.id == ap_id:
                return i
        raise KeyError(ap_id)

    def neighbours(self, ap_id: int) -> list[int]:
        return sorted({b if a == ap_id else a for a, b in self.adjacency if ap_id in (a, b)})

    def zone0_overlap_violations(self) -> list[tuple[int, int]]:
        """Adjacent pairs whose overlap lens reaches into a Zone-0 disc."""
        bad = []
        for a, b in sorted(self.adjacency):
            i, j = self.index_of(a), self.index_of(b)
            dist = math.dist(self.aps[i].center, self.aps[j].center)
            tol = 1e-9
            if (dist - self.aps[j].radius < self.zone_designs[i].r0 - tol
                    or dist - self.aps[i].radius < self.zone_designs[j].r0 - tol):
                bad.append((a, b))
        return bad

    def uncovered_corners(self) -> list[tuple[float, float]]:
        out = []
        for c in self.hall.corners():
            if not any(math.dist(c, ap.center) <= ap.radius for ap in self.aps):
                out.append(c)
        return out

    def to_dict(self) -> dict:
        return {
            "hall": {"length": self.hall.length, "width": self.hall.width, "height": self.hall.height},
            "aps": [
                {"id": ap.id, "center": list(ap.center), "radius": ap.radius,
                 "r0": zd.r0, "n0": zd.n0, "n1": zd.n1}
                for ap, zd in zip(self.aps, self.zone_designs)
            ],
            "adjacency": [list(p) for p in sorted(self.adjacency)],
            "zone1_bands": (None if self.zone1_bands is None
                            else [[b.start, b.stop - 1] if len(b) else [] for b in self.zone1_bands]),
            "diagnostics": list(self.diagnostics),
        }


@dataclass(frozen=True)
class SubcarrierAssignment:
    """Per-AP subcarrier index ranges, keyed by AP id.

    Zone-1 ranges are contiguous; the Zone-0 set is the complement and may be
    split in two around the Zone-1 block.
    """

    n_cell: dict[int, int]
    zone1: dict[int, range]

    def zone0(self, ap_id: int) -> list[int]:
        z1 = self.zone1[ap_id]
        return [i for i in range(self.n_cell[ap_id]) if i not in z1]


def ranges_overlap(a: range, b: range) -> bool:
    return len(a) > 0 and len(b) > 0 and a.start < b.stop and b.start < a.stop


def build_layout(hall: Hall, k: int, theta: float, overlap_width: float,
                 ap_template: AccessPoint | None = None, rx: ReceiverModel | None = None,
                 illum: IlluminationSpec | None = None, mob: MobilitySpec | None = None,
                 *, assign_bands: bool = True) -> NetworkLayout:
    """Place `k` identical APs on the hall midline with the given overlap width.

    Spacing between neighbouring centers is 2 r_k - overlap_width and the row
    is centred along the hall length.  Uncovered hall corners and Zone-0
    discs reaching into an overlap are recorded in ``diagnostics``, not
    raised.

    Raises:
        LayoutError: bad overlap or the row does not fit in the hall.
        InfeasibleError: from zone sizing or band assignment.
    """
    if k < 1:
        raise LayoutError(f"need at least one AP, got k={k}")
    template = ap_template or AccessPoint()
    template = replace(template, theta=theta, d_v=hall.height)
    r_k = template.radius
    if not (0.0 <= overlap_width < 2 * r_k):
        raise LayoutError(f"overlap width must lie in [0, {2 * r_k:.4g}) m, got {overlap_width!r}")
    spacing = 2 * r_k - overlap_width
    span = (k - 1) * spacing
    if span > hall.length:
        raise LayoutError(f"{k} APs at spacing {spacing:.4g} m span {span:.4g} m > hall length {hall.length} m")
    x0 = (hall.length - span) / 2.0
    aps = tuple(replace(template, id=i + 1, center=(x0 + i * spacing, hall.width / 2.0))
                for i in range(k))
    adjacency = frozenset((aps[i].id, aps[i + 1].id) for i in range(k - 1) if overlap_width > 0)

    rx = rx or ReceiverModel()
    illum = illum or IlluminationSpec()
    mob = mob or MobilitySpec()
    designs = tuple(design_zone(ap, rx, illum, mob) for ap in aps)
    layout = NetworkLayout(hall, aps, adjacency, designs)

    diags = []
    for c in layout.uncovered_corners():
        diags.append(f"hall corner ({c[0]:g}, {c[1]:g}) is not covered by any cell")
    for a, b in layout.zone0_overlap_violations():
        diags.append(f"overlap of APs {a} and {b} reaches into Zone 0")
    layout = replace(layout, diagnostics=tuple(diags))
    if assign_bands:
        sa = assign_zone1_bands(layout)
        layout = replace(layout, zone1_bands=tuple(sa.zone1[ap.id] for ap in aps))
    return layout


def _candidate_starts(n_cell: int, width: int, taken: Sequence[range]) -> list[int]:
    # top-aligned first, then bottom, then flush against each taken block
    cands = [n_cell - width, 0]
    for t in taken:
        cands += [t.stop, t.start - width]
    seen, out = set(), []
    for s in cands:
        if 0 <= s <= n_cell - width and s not in seen:
            seen.add(s)
            out.append(s)
    return out


def assign_zone1_bands(layout: NetworkLayout) -> SubcarrierAssignment:
    """Give every AP a contiguous Zone-1 block disjoint from its neighbours' blocks.

    Greedy in AP order; on a chain this alternates top- and bottom-aligned
    blocks, so non-adjacent APs reuse the same indices.

    Raises:
        InfeasibleError: an adjacent pair needs more Zone-1 subcarriers than
            the cell has, or the greedy pass finds no free block.
    """
    n1 = {ap.id: zd.n1 for ap, zd in zip(layout.aps, layout.zone_designs)}
    n_cell = {ap.id: ap.n_cell for ap in layout.aps}
    for a, b in sorted(layout.adjacency):
        if n1[a] + n1[b] > min(n_cell[a], n_cell[b]):
            raise InfeasibleError(
                f"adjacent APs {a} and {b} need {n1[a] + n1[b]} Zone-1 subcarriers, "
                f"only {min(n_cell[a], n_cell[b])} exist", "cci",
                ap_a=a, ap_b=b, n1_a=n1[a], n1_b=n1[b])
    zone1: dict[int, range] = {}
    for ap in layout.aps:
        width = n1[ap.id]
        taken = [zone1[j] for j in layout.neighbours(ap.id) if j in zone1]
        for s in _candidate_starts(ap.n_cell, width, taken):
            block = range(s, s + width)
            if not any(ranges_overlap(block, t) for t in taken):
                zone1[ap.id] = block
                break
        else:
            raise InfeasibleError(f"no free Zone-1 block of {width} subcarriers for AP {ap.id}",
                                  "cci", ap=ap.id, n1=width)
    return SubcarrierAssignment(n_cell=n_cell, zone1=zone1)


def locate_many(layout: NetworkLayout, points) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`locate` over an array of points with shape (..., 2).

    Returns (serving AP index into ``layout.aps`` or -1, zone code) arrays.
    Ties on distance go to the lower index, i.e. the lower AP id since ids
    increase along the row.
    """
    pts = np.asarray(points, dtype=float)
    diff = pts[..., None, :] - layout.centers
    dist = np.sqrt(np.einsum("...kj,...kj->...k", diff, diff))
    covered = dist <= layout.radii
    masked = np.where(covered, dist, np.inf)
    idx = np.argmin(masked, axis=-1)
    any_cov = covered.any(axis=-1)
    d_serv = np.take_along_axis(dist, idx[..., None], axis=-1)[..., 0]
    in_zone0 = d_serv <= layout.zone0_radii[idx]
    zone = np.where(any_cov, np.where(in_zone0, ZONE0, ZONE1), OUT_OF_COVERAGE)
    return np.where(any_cov, idx, -1), zone


def locate(layout: NetworkLayout, position) -> tuple[int | None, int]:
    """Serving AP id and zone code for one point, (None, OUT_OF_COVERAGE) if uncovered.

    Raises:
        DomainError: the point lies outside the hall.
    """
    if not layout.hall.contains(position):
        raise DomainError(f"position {tuple(position)} is outside the hall")
    idx, zone = locate_many(layout, position)
    idx = int(idx)
    return (None if idx < 0 else layout.aps[idx].id), int(zone)
