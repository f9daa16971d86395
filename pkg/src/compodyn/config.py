"""Central numeric defaults.

Every tolerance that shapes a verdict lives here so reports can echo the
exact configuration they were produced under.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
import hashlib
import json


@dataclass(frozen=True)
class Defaults:
    # jets
    max_order: int = 8
    base_point_rtol: float = 1e-9
    derivative_floor: float = 1e-12

    # orbits
    inversion_width: float = 1e-13
    newton_polish_steps: int = 2
    max_range: float = 1e12

    # probe grids
    probe_points_per_block: int = 257
    interval_samples: int = 65
    probe_radius: float = 20.0
    certificate_radius: float = 50.0

    # decay protocol
    decay_window: int = 5
    decay_tol: float = 1e-8
    blowup_cap: float = 1e6
    grow_slope_tol: float = 1e-3

    # schwartz
    tail_tol: float = 1e-12
    bound_cap: float = 1e9
    radius_exponents: int = 20
    weight_t_max: int = 6

    # abel
    abel_junction_order: int = 4
    abel_residual_tol: float = 1e-6
    abel_grid_lo: float = -20.0
    abel_grid_hi: float = 20.0
    abel_grid_points: int = 4001
    abel_seed_nodes: int = 129
    abel_limit_steps: int = 1024

    # hypvec
    k_cap: int = 100_000
    schedule_j_max: int = 2

    # classify
    default_a_grid: tuple[float, ...] = (-2.0, 0.0, 2.0)
    classify_n_max: int = 40
    classify_k_max: int = 3
    abel_growth_n_max: int = 30


DEFAULTS = Defaults()


@dataclass(frozen=True)
class RunConfig:
    """Effective parameters of one CLI/report run; hashed for reproducibility."""

    params: dict = field(default_factory=dict)

    def canonical_json(self) -> str:
        return json.dumps(self.params, sort_keys=True, separators=(",", ":"), default=repr)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]


def defaults_dict() -> dict:
    return asdict(DEFAULTS)
