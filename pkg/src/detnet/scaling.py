"""Closed-form scaling laws for hierarchical detection-and-response networks.

A network of size M (mass ratio relative to a baseline system) is organized
into N(M) = n0 * M^a hubs of size S(M) = s0 * M^(1-a) cells each, so that
total hub tissue N * S = n0 * s0 * M is conserved for every exponent a.
The exponent interpolates between three reference architectures:

    a = 1   fully modular (many fixed-size hubs, cheap detection)
    a = 0   non-modular (few growing hubs, cheap recruitment)
    0<a<1   sub-modular (both count and size grow sublinearly)

Response latency decomposes into three phases: detection (a mobile detector
carries the report to its draining hub), recruitment (the infected hub
contacts peer hubs for additional responders), and expansion (activated
responders double every `doubling_time` until the output target is met).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "ArchitectureSpec",
    "ModelParams",
    "TimingBreakdown",
    "InfeasibleParametersError",
    "BASELINE_RESPONSE_TIME",
    "RECRUITMENT_DISABLED",
    "mean_center_distance",
    "antibody_requirement",
    "hub_count",
    "hub_size",
    "dr_extent",
    "detection_time",
    "local_cognate_pool",
    "recruitment_demand",
    "recruitment_time",
    "activated_pool",
    "expansion_time",
    "total_response_time",
    "exponent_grid",
    "optimal_exponent",
    "sweep",
    "check_feasible",
]

# Expansion from the critical responder pool takes exactly this long under
# the default output calibration, independent of M and of the doubling time.
BASELINE_RESPONSE_TIME = 4.0

# Sentinel for `contact_latency`: recruitment switched off entirely, the
# infected hub expands from its local pool alone (fixed-pool regime).
RECRUITMENT_DISABLED = math.inf


class InfeasibleParametersError(ValueError):
    """The whole system holds fewer cognate responders than required."""


@dataclass(frozen=True)
class ArchitectureSpec:
    """How hub count and hub size scale with system mass.

    exponent:        a in [0, 1]; hub count grows as M^a, hub size as M^(1-a)
    base_hub_count:  n0 >= 1, hub count at M = 1
    base_hub_size:   s0 > 0, hub size in cell units at M = 1
    dimension:       spatial dimension of the domain, 1, 2 or 3
    """

    exponent: float = 0.5
    base_hub_count: float = 1.0
    base_hub_size: float = 1.0e6
    dimension: int = 2

    def __post_init__(self):
        if not 0.0 <= self.exponent <= 1.0:
            raise ValueError(f"exponent must be in [0, 1], got {self.exponent}")
        if self.base_hub_count < 1.0:
            raise ValueError(f"base_hub_count must be >= 1, got {self.base_hub_count}")
        if self.base_hub_size <= 0.0:
            raise ValueError(f"base_hub_size must be > 0, got {self.base_hub_size}")
        if self.dimension not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.dimension}")

    def with_exponent(self, a: float) -> "ArchitectureSpec":
        return replace(self, exponent=a)


def _calibrated_antibody_coefficient(plasma_yield, bcrit_coefficient, doubling_time):
    # Output target per unit mass such that expanding from the critical pool
    # B_crit = bcrit * M always takes BASELINE_RESPONSE_TIME, whatever M.
    return plasma_yield * bcrit_coefficient * 2.0 ** (BASELINE_RESPONSE_TIME / doubling_time)


@dataclass(frozen=True)
class ModelParams:
    """Rate constants of the detection/recruitment/expansion model.

    cognate_frequency:        fraction of cells specific to one target (1e-6)
    bcrit_coefficient:        required activated responders per unit mass
    antibody_coefficient:     output units required per unit mass; None means
                              calibrated so expansion from the critical pool
                              takes BASELINE_RESPONSE_TIME at every M
    plasma_yield:             output units produced per activated responder
    doubling_time:            responder population doubling period
    detector_speed:           detector travel speed
    contact_latency:          time per peer hub contacted during recruitment
                              (0 = free channel, math.inf = recruitment off)
    contention_coefficient:   time per detector sharing a hub (contention mode,
                              detector density folded in)
    body_volume_coefficient:  domain volume per unit mass
    recruit_transit_coefficient: optional time per unit distance for recruited
                              responders in the simulator (0 = instantaneous)
    recruitment_composition:  "serial" contacts one peer after another,
                              "parallel" fans out as a doubling tree
    """

    cognate_frequency: float = 1.0e-6
    bcrit_coefficient: float = 1.0
    antibody_coefficient: float | None = None
    plasma_yield: float = 1.0
    doubling_time: float = 1.0
    detector_speed: float = 1.0
    contact_latency: float = 0.2
    contention_coefficient: float = 0.1
    body_volume_coefficient: float = 1.0
    recruit_transit_coefficient: float = 0.0
    recruitment_composition: str = "serial"

    def __post_init__(self):
        for name in (
            "cognate_frequency",
            "bcrit_coefficient",
            "plasma_yield",
            "doubling_time",
            "detector_speed",
            "body_volume_coefficient",
        ):
            value = getattr(self, name)
            if not value > 0.0:
                raise ValueError(f"{name} must be > 0, got {value}")
        if self.antibody_coefficient is None:
            object.__setattr__(
                self,
                "antibody_coefficient",
                _calibrated_antibody_coefficient(
                    self.plasma_yield, self.bcrit_coefficient, self.doubling_time
                ),
            )
        elif not self.antibody_coefficient > 0.0:
            raise ValueError(f"antibody_coefficient must be > 0, got {self.antibody_coefficient}")
        for name in ("contact_latency", "contention_coefficient", "recruit_transit_coefficient"):
            value = getattr(self, name)
            if value < 0.0:
                raise ValueError(f"{name} must be >= 0, got {value}")
        if self.recruitment_composition not in ("serial", "parallel"):
            raise ValueError(
                "recruitment_composition must be 'serial' or 'parallel', "
                f"got {self.recruitment_composition!r}"
            )

    @property
    def recruitment_enabled(self) -> bool:
        return math.isfinite(self.contact_latency)


@dataclass(frozen=True)
class TimingBreakdown:
    """Three-phase latency decomposition; t_total is the exact float sum."""

    t_detect: float
    t_recruit: float
    t_expand: float
    t_total: float = None  # type: ignore[assignment]

    def __post_init__(self):
        for name in ("t_detect", "t_recruit", "t_expand"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        total = self.t_detect + self.t_recruit + self.t_expand
        if self.t_total is None:
            object.__setattr__(self, "t_total", total)
        elif self.t_total != total:
            raise ValueError("t_total must equal t_detect + t_recruit + t_expand")


def _require_positive_mass(M):
    if not M > 0.0:
        raise ValueError(f"mass ratio M must be > 0, got {M}")


def check_feasible(arch: ArchitectureSpec, params: ModelParams) -> None:
    """Raise InfeasibleParametersError if the system-wide cognate pool falls
    short of the critical responder requirement (both scale linearly in M,
    so feasibility is independent of M)."""
    total_per_mass = params.cognate_frequency * arch.base_hub_count * arch.base_hub_size
    if total_per_mass < params.bcrit_coefficient:
        raise InfeasibleParametersError(
            f"system-wide cognate pool {total_per_mass:g} per unit mass is below "
            f"the required {params.bcrit_coefficient:g} responders per unit mass"
        )


# ---------------------------------------------------------------------------
# geometry constant
# ---------------------------------------------------------------------------

_GEOMETRY_SEED = 180451
_GEOMETRY_SAMPLES = 4_000_000
_geometry_cache: dict[int, float] = {}


def mean_center_distance(dimension: int, samples: int = _GEOMETRY_SAMPLES,
                         seed: int = _GEOMETRY_SEED) -> float:
    """Mean Euclidean distance from a uniform point in the unit d-cube to the
    cube's center, estimated once by Monte Carlo and cached.

    The fixed seed makes the constant reproducible across runs and platforms.
    """
    if dimension not in (1, 2, 3):
        raise ValueError(f"dimension must be 1, 2 or 3, got {dimension}")
    key = dimension
    if samples == _GEOMETRY_SAMPLES and seed == _GEOMETRY_SEED and key in _geometry_cache:
        return _geometry_cache[key]
    rng = np.random.default_rng(seed + dimension)
    chunk = 1_000_000
    total = 0.0
    drawn = 0
    while drawn < samples:
        n = min(chunk, samples - drawn)
        pts = rng.random((n, dimension)) - 0.5
        total += float(np.sqrt((pts * pts).sum(axis=1)).sum())
        drawn += n
    value = total / samples
    if samples == _GEOMETRY_SAMPLES and seed == _GEOMETRY_SEED:
        _geometry_cache[key] = value
    return value


# ---------------------------------------------------------------------------
# scaling laws
# ---------------------------------------------------------------------------

def antibody_requirement(M: float, params: ModelParams) -> float:
    """Output units required at mass M: antibody_coefficient * M.

    A system 25000x the baseline needs 25000x the absolute output to hold the
    same output concentration in a volume proportional to M.
    """
    _require_positive_mass(M)
    return params.antibody_coefficient * M


def hub_count(M: float, arch: ArchitectureSpec) -> tuple[float, int]:
    """Hub count at mass M, as (continuous, rounded) pair.

    Analytic laws use the continuous value n0 * M^a; the simulator builds
    the rounded world (never fewer than one hub).
    """
    _require_positive_mass(M)
    continuous = arch.base_hub_count * M ** arch.exponent
    return continuous, max(1, round(float(continuous)))


def hub_size(M: float, arch: ArchitectureSpec) -> float:
    """Hub size in cell units at mass M: s0 * M^(1-a)."""
    _require_positive_mass(M)
    return arch.base_hub_size * M ** (1.0 - arch.exponent)


def dr_extent(M: float, arch: ArchitectureSpec, params: ModelParams) -> float:
    """Linear extent of one draining region.

    The domain is a d-cube of volume c_v * M split evenly over the continuous
    hub count, so each region has volume c_v * M / N(M).
    """
    continuous, _ = hub_count(M, arch)
    volume = params.body_volume_coefficient * M / continuous
    return volume ** (1.0 / arch.dimension)


def detection_time(M: float, arch: ArchitectureSpec, params: ModelParams,
                   mode: str = "spatial") -> float:
    """Expected time for the first detector report to reach its hub.

    spatial mode:    travel time over the draining region, mu_d * extent / v,
                     with mu_d the unit-cube mean center distance
    contention mode: queueing delay on the detector-to-hub channel, rho times
                     the detector population sharing one hub
    """
    _require_positive_mass(M)
    if mode == "spatial":
        mu = mean_center_distance(arch.dimension)
        return mu * dr_extent(M, arch, params) / params.detector_speed
    if mode == "contention":
        continuous, _ = hub_count(M, arch)
        return params.contention_coefficient * M / continuous
    raise ValueError(f"unknown detection mode {mode!r}; expected 'spatial' or 'contention'")


def local_cognate_pool(M: float, arch: ArchitectureSpec, params: ModelParams) -> float:
    """Cognate responders resident in a single hub: f * S(M)."""
    return params.cognate_frequency * hub_size(M, arch)


def recruitment_demand(M: float, arch: ArchitectureSpec, params: ModelParams) -> int:
    """Number of peer hubs the infected hub must contact to cover the
    critical responder requirement B_crit = bcrit * M.

    Each contacted peer contributes its own cognate pool f * S(M); the count
    is the ceiling of the deficit over that contribution, and can never
    exceed the rounded number of peers that exist.
    """
    _require_positive_mass(M)
    check_feasible(arch, params)
    local = local_cognate_pool(M, arch, params)
    deficit = params.bcrit_coefficient * M - local
    if deficit <= 0.0:
        return 0
    per_hub = local
    _, rounded = hub_count(M, arch)
    return min(math.ceil(deficit / per_hub), max(0, rounded - 1))


def recruitment_time(M: float, arch: ArchitectureSpec, params: ModelParams) -> float:
    """Time spent contacting peer hubs.

    Serial composition charges contact_latency per peer (the infected hub's
    outbound channel is the bottleneck); parallel composition fans out as a
    doubling tree, lambda * log2(k + 1).
    """
    if not params.recruitment_enabled:
        return 0.0
    k = recruitment_demand(M, arch, params)
    if params.recruitment_composition == "parallel":
        return params.contact_latency * math.log2(k + 1)
    return params.contact_latency * k


def activated_pool(M: float, arch: ArchitectureSpec, params: ModelParams) -> float:
    """Responders activated before expansion begins.

    Activation stops once the critical requirement bcrit * M is covered (the
    last contacted peer is used only partially), so the pool is exactly
    B_crit whenever local plus recruited cells can reach it. With recruitment
    disabled the hub expands from whatever its local pool holds.
    """
    _require_positive_mass(M)
    local = local_cognate_pool(M, arch, params)
    needed = params.bcrit_coefficient * M
    if not params.recruitment_enabled:
        return min(local, needed)
    k = recruitment_demand(M, arch, params)
    return min(needed, local + k * local)


def expansion_time(B_initial: float, B_target: float, doubling_time: float) -> float:
    """Time for a population doubling every `doubling_time` to grow from
    B_initial to B_target; zero when the target is already met."""
    if not B_initial > 0.0:
        raise ValueError(f"B_initial must be > 0, got {B_initial}")
    if not B_target > 0.0:
        raise ValueError(f"B_target must be > 0, got {B_target}")
    return max(0.0, doubling_time * math.log2(B_target / B_initial))


def total_response_time(M: float, arch: ArchitectureSpec, params: ModelParams,
                        mode: str = "spatial") -> TimingBreakdown:
    """Full three-phase latency at mass M for one architecture."""
    _require_positive_mass(M)
    check_feasible(arch, params)
    t_detect = detection_time(M, arch, params, mode)
    t_recruit = recruitment_time(M, arch, params)
    pool = activated_pool(M, arch, params)
    target = antibody_requirement(M, params) / params.plasma_yield
    t_expand = expansion_time(pool, target, params.doubling_time)
    return TimingBreakdown(t_detect, t_recruit, t_expand)


# ---------------------------------------------------------------------------
# optimizer and sweeps
# ---------------------------------------------------------------------------

def exponent_grid(resolution: float) -> list[float]:
    """Exponent grid {0, resolution, 2*resolution, ..., 1}.

    When 1/resolution is integral the points are computed as i/n so both
    endpoints are exact; otherwise the last step is clamped and 1.0 appended.
    """
    if not resolution > 0.0:
        raise ValueError(f"grid resolution must be > 0, got {resolution}")
    n = round(1.0 / resolution)
    if n >= 1 and abs(n * resolution - 1.0) < 1e-9:
        return [i / n for i in range(n + 1)]
    grid = []
    a = 0.0
    i = 0
    while a < 1.0:
        grid.append(a)
        i += 1
        a = min(i * resolution, 1.0)
    grid.append(1.0)
    return grid


def optimal_exponent(M: float, params: ModelParams, mode: str = "spatial",
                     grid_resolution: float = 0.01,
                     arch: ArchitectureSpec | None = None,
                     ) -> tuple[float, TimingBreakdown]:
    """Grid search for the exponent minimizing total response time at mass M.

    Scans the exponent grid in increasing order keeping the first strict
    minimum, so ties resolve toward the smaller exponent. `arch` supplies the
    base hub count/size and dimension (its own exponent is ignored).
    """
    if arch is None:
        arch = ArchitectureSpec()
    best_a = None
    best = None
    for a in exponent_grid(grid_resolution):
        breakdown = total_response_time(M, arch.with_exponent(a), params, mode)
        if best is None or breakdown.t_total < best.t_total:
            best_a = a
            best = breakdown
    return best_a, best


def sweep(M_list, a_list, params: ModelParams, mode: str = "spatial",
          arch: ArchitectureSpec | None = None,
          ) -> list[tuple[float, float, TimingBreakdown]]:
    """Evaluate total response time over the (M, a) product grid.

    Returns one row per pair in deterministic order, M-major then a-minor.
    """
    if not M_list or not a_list:
        raise ValueError("M_list and a_list must be non-empty")
    if arch is None:
        arch = ArchitectureSpec()
    rows = []
    for M in M_list:
        for a in a_list:
            rows.append((M, a, total_response_time(M, arch.with_exponent(a), params, mode)))
    return rows
