"""Scenario documents: one JSON object describing a hall deployment.

Every section is optional and falls back to the hall-example defaults.
Angles are given in degrees; unknown keys are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from .channel import AccessPoint, ReceiverModel
from .errors import CogVLCError, ScenarioError
from .mobility import LayoutTemplate, SimConfig
from .network import Hall
from .zones import IlluminationSpec, MobilitySpec


@dataclass(frozen=True)
class APTemplate:
    theta_deg: float = 60.0
    p_cell: float = 9.0
    b_cell: float = 20e6
    n_cell: int = 64
    i0: float | None = None  # None: centre illuminance pinned to e_max


@dataclass(frozen=True)
class ReceiverSection:
    a_d: float = 1e-4
    gamma: float = 0.53
    psi_c_deg: float = 90.0
    g: float = 1.0
    n_noise: float = 1e-21
    sigma_ratio: float = 1.0
    c_const: float = 1.0


@dataclass(frozen=True)
class HallSection:
    length: float = 30.0
    width: float = 10.0
    height: float = 3.5


@dataclass(frozen=True)
class IlluminationSection:
    e_min: float = 200.0
    e_max: float = 800.0


@dataclass(frozen=True)
class MobilitySection:
    epsilon: float = 0.4
    beta: float = 0.4
    b_ho: float = 10e3
    u_pu: int = 2


@dataclass(frozen=True)
class SimulationSection:
    users: int | None = None  # None: epsilon * hall area
    t_s: float = 0.5
    duration: float = 120.0
    v_max_zone0: float = 0.5
    v_max_zone1: float = 2.0
    seed: int = 0
    replications: int = 200


@dataclass(frozen=True)
class LayoutSection:
    k: int = 3
    overlap_width: float = 1.2


_SECTIONS = {
    "hall": HallSection,
    "access_point": APTemplate,
    "receiver": ReceiverSection,
    "illumination": IlluminationSection,
    "mobility": MobilitySection,
    "simulation": SimulationSection,
    "layout": LayoutSection,
}


def _section(cls, data: Any, name: str):
    if not isinstance(data, dict):
        raise ScenarioError(f"section {name!r} must be an object")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ScenarioError(f"unknown key(s) in {name!r}: {', '.join(unknown)}")
    for key, value in data.items():
        if value is None:
            continue
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(f"{name}.{key} must be a number, got {value!r}")
        if "int" in str(known[key].type) and value != int(value):
            raise ScenarioError(f"{name}.{key} must be an integer, got {value!r}")
    return cls(**{k: (int(v) if v is not None and "int" in str(known[k].type) else v)
                  for k, v in data.items()})


@dataclass(frozen=True)
class Scenario:
    hall: HallSection = field(default_factory=HallSection)
    access_point: APTemplate = field(default_factory=APTemplate)
    receiver: ReceiverSection = field(default_factory=ReceiverSection)
    illumination: IlluminationSection = field(default_factory=IlluminationSection)
    mobility: MobilitySection = field(default_factory=MobilitySection)
    simulation: SimulationSection = field(default_factory=SimulationSection)
    layout: LayoutSection = field(default_factory=LayoutSection)

    def __post_init__(self):
        # build every domain object once so bad values surface at load time
        try:
            self.hall_obj()
            self.ap()
            self.rx()
            self.illum()
            self.mob()
            self.sim_config()
            if self.layout.k < 1 or self.layout.overlap_width < 0:
                raise ScenarioError("layout needs k >= 1 and overlap_width >= 0")
        except ScenarioError:
            raise
        except (CogVLCError, TypeError, ValueError) as exc:
            raise ScenarioError(str(exc)) from exc

    @classmethod
    def from_dict(cls, data: Any) -> Scenario:
        if not isinstance(data, dict):
            raise ScenarioError("scenario must be a JSON object")
        unknown = sorted(set(data) - set(_SECTIONS))
        if unknown:
            raise ScenarioError(f"unknown section(s): {', '.join(unknown)}")
        return cls(**{name: _section(_SECTIONS[name], body, name) for name, body in data.items()})

    def to_dict(self) -> dict:
        return {name: asdict(getattr(self, name)) for name in _SECTIONS}

    @classmethod
    def load(cls, path: str | Path) -> Scenario:
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    # -- domain objects ---------------------------------------------------

    def hall_obj(self) -> Hall:
        return Hall(self.hall.length, self.hall.width, self.hall.height)

    def illum(self) -> IlluminationSpec:
        return IlluminationSpec(self.illumination.e_min, self.illumination.e_max)

    def ap(self) -> AccessPoint:
        a = self.access_point
        i0 = a.i0 if a.i0 is not None else self.illumination.e_max * self.hall.height ** 2
        return AccessPoint(theta=math.radians(a.theta_deg), d_v=self.hall.height, p_cell=a.p_cell,
                           b_cell=a.b_cell, n_cell=a.n_cell, i0=i0)

    def rx(self) -> ReceiverModel:
        r = self.receiver
        return ReceiverModel(a_d=r.a_d, gamma=r.gamma, psi_c=math.radians(r.psi_c_deg), g=r.g,
                             n_noise=r.n_noise, sigma_ratio=r.sigma_ratio, c_const=r.c_const)

    def mob(self, **overrides) -> MobilitySpec:
        m = self.mobility
        return replace(MobilitySpec(m.epsilon, m.beta, m.b_ho, m.u_pu), **overrides)

    def sim_config(self, **overrides) -> SimConfig:
        s = self.simulation
        users = s.users if s.users is not None else int(round(self.mobility.epsilon * self.hall_obj().area))
        cfg = SimConfig(users=users, beta=self.mobility.beta, t_s=s.t_s, duration=s.duration,
                        v_max_zone0=s.v_max_zone0, v_max_zone1=s.v_max_zone1, seed=s.seed,
                        replications=s.replications)
        return replace(cfg, **overrides)

    def layout_template(self) -> LayoutTemplate:
        return LayoutTemplate(hall=self.hall_obj(), k=self.layout.k,
                              theta=math.radians(self.access_point.theta_deg),
                              overlap_width=self.layout.overlap_width, ap=self.ap(), rx=self.rx(),
                              illum=self.illum(), mob=self.mob())
