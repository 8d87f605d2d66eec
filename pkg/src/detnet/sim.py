"""Discrete-event spatial simulation of one detection-network architecture.

The domain is a d-cube tiled into equal draining regions, one hub per region
at its center. Detector agents spawn at an infection site, carry the report
to their draining hub, the infected hub contacts peer hubs for responders,
and the activated pool doubles on a fixed tick until the output target is
met. Every run is fully determined by (configuration, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from detnet.scaling import (
    ArchitectureSpec,
    ModelParams,
    TimingBreakdown,
    activated_pool,
    antibody_requirement,
    check_feasible,
    hub_count,
    hub_size,
    recruitment_demand,
)

__all__ = [
    "Hub",
    "Detector",
    "EventRecord",
    "EventLog",
    "SimWorld",
    "SimulationInvariantError",
    "build_world",
    "spawn_infection",
    "run_detection",
    "run_recruitment",
    "run_expansion",
    "simulate",
]

EVENT_TIME_DIGITS = 9


class SimulationInvariantError(RuntimeError):
    """An internal simulation invariant was violated (a bug, not bad input)."""


@dataclass(frozen=True)
class Hub:
    ident: int
    position: np.ndarray
    size: float
    lower: np.ndarray  # region box, inclusive boundaries resolve to the lower index
    upper: np.ndarray

    def region_volume(self) -> float:
        return float(np.prod(self.upper - self.lower))


@dataclass
class Detector:
    ident: int
    position: np.ndarray
    state: str  # roaming | loaded | delivered
    hub_id: int


@dataclass(frozen=True)
class EventRecord:
    time: float
    kind: str
    subject: int
    hub: int

    def to_line(self) -> str:
        return f"{self.time:.{EVENT_TIME_DIGITS}f}\t{self.kind}\t{self.subject}\t{self.hub}"


class EventLog:
    """Time-ordered event records; ties keep insertion (sequence) order."""

    def __init__(self, records=()):
        self.records: list[EventRecord] = list(records)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __eq__(self, other):
        return isinstance(other, EventLog) and self.records == other.records

    def to_text(self) -> str:
        """Serialize as one `time<TAB>kind<TAB>subject<TAB>hub` line per event."""
        return "".join(r.to_line() + "\n" for r in self.records)


@dataclass
class SimWorld:
    mass: float
    arch: ArchitectureSpec
    params: ModelParams
    seed: int
    extent: float
    grid_shape: tuple[int, ...]
    hubs: list[Hub]
    detectors: list[Detector] = field(default_factory=list)
    clock: float = 0.0
    rng: np.random.Generator = None  # type: ignore[assignment]
    infected_hub: int | None = None
    pool: float | None = None
    _pending: list = field(default_factory=list)  # (time, seq, kind, subject, hub)
    _seq: int = 0

    def schedule(self, time: float, kind: str, subject: int, hub: int) -> None:
        self._pending.append((time, self._seq, kind, subject, hub))
        self._seq += 1

    def drain(self, since_seq: int = 0) -> EventLog:
        """Events scheduled at or after `since_seq`, ordered by (time, seq)."""
        picked = sorted(e for e in self._pending if e[1] >= since_seq)
        return EventLog(EventRecord(t, kind, subj, hub) for t, _, kind, subj, hub in picked)

    def cell_widths(self) -> np.ndarray:
        return self.extent / np.asarray(self.grid_shape, dtype=float)

    def region_of(self, point: np.ndarray) -> int:
        """Flat region index containing `point`; points on a shared boundary
        resolve to the lowest index."""
        widths = self.cell_widths()
        flat = 0
        for axis, cells in enumerate(self.grid_shape):
            x = point[axis]
            if not 0.0 <= x <= self.extent:
                raise SimulationInvariantError(
                    f"point {point} lies outside the domain [0, {self.extent}]^d"
                )
            idx = min(max(math.ceil(x / widths[axis]) - 1, 0), cells - 1)
            flat = flat * cells + idx
        return flat


def _divisors(n: int) -> list[int]:
    small, large = [], []
    for i in range(1, math.isqrt(n) + 1):
        if n % i == 0:
            small.append(i)
            large.append(n // i)
    if small and small[-1] == large[-1]:
        large.pop()
    return small + large[::-1]


def _grid_shape(n: int, dimension: int) -> tuple[int, ...]:
    """Factor n into `dimension` axis counts minimizing the cell aspect ratio
    (max factor over min factor); ties resolve to the lexicographically
    smallest descending tuple for determinism."""
    if dimension == 1:
        return (n,)
    best = None
    if dimension == 2:
        for f in _divisors(n):
            shape = tuple(sorted((f, n // f), reverse=True))
            cand = (shape[0] / shape[-1], shape)
            if best is None or cand < best:
                best = cand
        return best[1]
    for f1 in _divisors(n):
        for f2 in _divisors(n // f1):
            shape = tuple(sorted((f1, f2, n // f1 // f2), reverse=True))
            cand = (shape[0] / shape[-1], shape)
            if best is None or cand < best:
                best = cand
    return best[1]


def build_world(M: float, arch: ArchitectureSpec, params: ModelParams, seed: int) -> SimWorld:
    """Tile a d-cube of volume c_v * M into the rounded hub count of equal
    regions and place one hub of size S(M) at each region center."""
    check_feasible(arch, params)
    _, rounded = hub_count(M, arch)
    extent = (params.body_volume_coefficient * M) ** (1.0 / arch.dimension)
    shape = _grid_shape(rounded, arch.dimension)
    widths = extent / np.asarray(shape, dtype=float)
    size = hub_size(M, arch)

    hubs = []
    for flat in range(rounded):
        idx = []
        rem = flat
        for cells in reversed(shape):
            rem, i = divmod(rem, cells)
            idx.append(i)
        idx = np.asarray(idx[::-1], dtype=float)
        lower = idx * widths
        upper = (idx + 1.0) * widths
        hubs.append(Hub(flat, lower + widths / 2.0, size, lower, upper))

    return SimWorld(
        mass=M,
        arch=arch,
        params=params,
        seed=seed,
        extent=extent,
        grid_shape=shape,
        hubs=hubs,
        rng=np.random.default_rng(seed),
    )


def spawn_infection(world: SimWorld, site=None, n_detectors: int = 1) -> SimWorld:
    """Place loaded detectors at `site` (uniform random over the domain when
    None), each assigned to the hub whose region contains the site."""
    if n_detectors < 1:
        raise ValueError(f"n_detectors must be >= 1, got {n_detectors}")
    if site is None:
        site = world.rng.random(world.arch.dimension) * world.extent
    site = np.asarray(site, dtype=float)
    if site.shape != (world.arch.dimension,):
        raise ValueError(
            f"site must have {world.arch.dimension} coordinates, got {site.shape}"
        )
    if np.any(site < 0.0) or np.any(site > world.extent):
        raise ValueError(f"site {site} outside the domain [0, {world.extent}]^d")
    hub_id = world.region_of(site)
    for i in range(n_detectors):
        world.detectors.append(Detector(i, site.copy(), "loaded", hub_id))
        world.schedule(world.clock, "spawn", i, hub_id)
    return world


def _walk_arrival_steps(world: SimWorld, start: np.ndarray, hub_pos: np.ndarray,
                        step_length: float, max_steps: int = 1_000_000) -> int:
    """Steps until a fixed-length random walk enters the absorption radius
    (one step length) around the hub; reflects off domain walls."""
    pos = start.copy()
    d = world.arch.dimension
    for step in range(max_steps):
        if float(np.linalg.norm(pos - hub_pos)) <= step_length:
            return step
        if d == 1:
            direction = np.asarray([1.0 if world.rng.random() < 0.5 else -1.0])
        else:
            vec = world.rng.normal(size=d)
            norm = float(np.linalg.norm(vec))
            while norm == 0.0:
                vec = world.rng.normal(size=d)
                norm = float(np.linalg.norm(vec))
            direction = vec / norm
        pos = pos + step_length * direction
        for axis in range(d):
            while pos[axis] < 0.0 or pos[axis] > world.extent:
                if pos[axis] < 0.0:
                    pos[axis] = -pos[axis]
                else:
                    pos[axis] = 2.0 * world.extent - pos[axis]
    raise SimulationInvariantError(f"random walk not absorbed after {max_steps} steps")


def run_detection(world: SimWorld, movement: str = "straight",
                  step_length: float = 0.1) -> tuple[float, EventLog]:
    """Move every loaded detector to its hub; detection completes at the first
    arrival. Straight mode travels the exact distance at detector speed;
    random-walk mode takes fixed-length steps in uniform directions."""
    loaded = [det for det in world.detectors if det.state == "loaded"]
    if not loaded:
        raise SimulationInvariantError("run_detection called with no loaded detectors")
    if movement not in ("straight", "random_walk"):
        raise ValueError(f"unknown movement {movement!r}; expected 'straight' or 'random_walk'")
    if movement == "random_walk" and not step_length > 0.0:
        raise ValueError(f"step_length must be > 0, got {step_length}")

    start_seq = world._seq
    start_time = world.clock
    v = world.params.detector_speed
    first_arrival = None
    first_hub = None
    for det in loaded:
        hub_pos = world.hubs[det.hub_id].position
        if movement == "straight":
            travel = float(np.linalg.norm(det.position - hub_pos)) / v
        else:
            steps = _walk_arrival_steps(world, det.position, hub_pos, step_length)
            travel = steps * step_length / v
        arrival = start_time + travel
        det.state = "delivered"
        world.schedule(arrival, "arrival", det.ident, det.hub_id)
        if first_arrival is None or arrival < first_arrival:
            first_arrival = arrival
            first_hub = det.hub_id

    world.infected_hub = first_hub
    world.clock = first_arrival
    return first_arrival - start_time, world.drain(start_seq)


def run_recruitment(world: SimWorld) -> tuple[float, EventLog]:
    """Contact peer hubs in order of increasing center distance (ties by
    index) until the critical responder demand is covered; the empirical
    contact count is the shared analytic demand formula."""
    if world.infected_hub is None:
        raise SimulationInvariantError("run_recruitment called before detection completed")
    params = world.params
    start_seq = world._seq
    start_time = world.clock

    world.pool = activated_pool(world.mass, world.arch, params)
    if not params.recruitment_enabled:
        return 0.0, world.drain(start_seq)

    k = recruitment_demand(world.mass, world.arch, params)
    if k == 0:
        return 0.0, world.drain(start_seq)

    origin = world.hubs[world.infected_hub].position
    peers = sorted(
        (hub for hub in world.hubs if hub.ident != world.infected_hub),
        key=lambda hub: (float(np.linalg.norm(hub.position - origin)), hub.ident),
    )
    lam = params.contact_latency
    transit = params.recruit_transit_coefficient
    duration = 0.0
    for i, hub in enumerate(peers[:k]):
        if params.recruitment_composition == "parallel":
            waves = math.ceil(math.log2(i + 2))
            offset = lam * waves
        else:
            offset = lam * (i + 1)
        if transit > 0.0:
            offset += transit * float(np.linalg.norm(hub.position - origin))
        world.schedule(start_time + offset, "contact-complete", hub.ident, world.infected_hub)
        # durations are accumulated relative to the phase start, never as a
        # difference of absolute clocks, so they match the analytic values
        # bit for bit
        duration = max(duration, offset)

    world.clock = start_time + duration
    return duration, world.drain(start_seq)


def run_expansion(world: SimWorld) -> tuple[float, EventLog]:
    """Double the activated pool once per doubling period until its output
    meets the target; the tick count is the ceiling of the analytic time."""
    if world.pool is None:
        raise SimulationInvariantError("run_expansion called before recruitment completed")
    params = world.params
    start_seq = world._seq
    start_time = world.clock
    target = antibody_requirement(world.mass, params)
    population = world.pool
    ticks = 0
    while population * params.plasma_yield < target:
        ticks += 1
        population *= 2.0
        world.schedule(start_time + ticks * params.doubling_time, "doubling-tick",
                       ticks, world.infected_hub)
        if ticks > 10_000:
            raise SimulationInvariantError("expansion did not reach the target in 10000 ticks")
    duration = ticks * params.doubling_time
    world.clock = start_time + duration
    return duration, world.drain(start_seq)


def simulate(M: float, arch: ArchitectureSpec, params: ModelParams, seed: int,
             site=None, n_detectors: int = 1, movement: str = "straight",
             step_length: float = 0.1) -> tuple[TimingBreakdown, EventLog]:
    """Run the three phases end to end and return the empirical breakdown
    plus the full time-ordered event log."""
    world = build_world(M, arch, params, seed)
    spawn_infection(world, site, n_detectors)
    t_detect, _ = run_detection(world, movement, step_length)
    t_recruit, _ = run_recruitment(world)
    t_expand, _ = run_expansion(world)
    return TimingBreakdown(t_detect, t_recruit, t_expand), world.drain(0)
