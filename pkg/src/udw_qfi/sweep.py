"""Parameter sweeps, figure presets, and reproducible CSV/manifest output.

Sweeps evaluate the full QFI pipeline over a uniform, endpoint-inclusive
grid. Each emitted CSV carries a digest of its run manifest in a leading
comment line, and the manifest itself is written alongside as JSON; the
digest covers only run-defining fields (not the timestamp), so repeated runs
produce byte-identical CSV files.
"""

import dataclasses
import hashlib
import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .dynamics import DetectorParams
from .geometry import BoundaryConfig
from .metrology import qfi_record

__all__ = [
    "FixedParams",
    "SweepSpec",
    "SweepResult",
    "RunManifest",
    "run_sweep",
    "run_preset",
    "preset_parameters",
    "write_csv",
    "format_value",
    "PRESET_NAMES",
]

SWEEPABLE = ("a", "R", "alpha", "tau", "theta")

PRESET_NAMES = ("fig2", "fig3", "fig4")

ARTIFACT_VERSION = "0.1.0"

CSV_FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True)
class FixedParams:
    """Held-fixed quantities for a sweep; None means 'not supplied'."""

    omega0: float | None = None
    coupling: float | None = None
    a: float | None = None
    unbounded: bool | None = None
    R: float | None = None
    alpha: float | None = None
    theta: float | None = None
    phi: float | None = None
    tau: float | None = None
    omega_shift: float | None = None


# Fallbacks applied after explicit values and (in the CLI) config-file values.
FIXED_DEFAULTS = {
    "omega0": 10.0,
    "coupling": 1.0,
    "a": 1.0,
    "unbounded": False,
    "R": None,
    "alpha": None,
    "theta": 0.5 * math.pi,
    "phi": 0.0,
    "tau": 1.0,
    "omega_shift": 0.0,
}


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable over a uniform inclusive grid, everything else fixed."""

    swept: str
    start: float
    stop: float
    points: int
    fixed: FixedParams = field(default_factory=FixedParams)
    convention: str = "eq7"

    def __post_init__(self):
        if self.swept not in SWEEPABLE:
            raise ValueError(f"swept variable must be one of {SWEEPABLE}, got {self.swept!r}")
        if not self.start < self.stop:
            raise ValueError(f"sweep range needs start < stop, got [{self.start!r}, {self.stop!r}]")
        if self.points < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.points!r}")
        if getattr(self.fixed, self.swept) is not None:
            warnings.warn(
                f"fixed value supplied for swept variable {self.swept!r} is ignored",
                stacklevel=3,
            )

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepResult:
    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]


def _resolved_fixed(fixed: FixedParams) -> dict:
    resolved = {}
    for key, default in FIXED_DEFAULTS.items():
        value = getattr(fixed, key)
        resolved[key] = default if value is None else value
    return resolved


def _boundary_from(resolved: dict) -> BoundaryConfig:
    if resolved["unbounded"]:
        return BoundaryConfig.unbounded()
    if resolved["R"] is None or resolved["alpha"] is None:
        raise ValueError("mirror sweep needs R and alpha (or unbounded=True)")
    return BoundaryConfig.two_perpendicular_mirrors(resolved["R"], resolved["alpha"])


def _max_workers(requested: int | None) -> int:
    if requested is not None:
        return max(1, requested)
    return min(8, os.cpu_count() or 1)


def run_sweep(spec: SweepSpec, max_workers: int | None = None) -> SweepResult:
    """Evaluate the QFI pipeline along the swept grid.

    Grid points are computed concurrently; rows are assembled in grid order
    regardless of completion order.
    """
    base = _resolved_fixed(spec.fixed)

    def point(value: float) -> tuple[float, ...]:
        local = dict(base)
        local[spec.swept] = value
        if spec.swept in ("R", "alpha"):
            local["unbounded"] = False
        detector = DetectorParams(local["omega0"], local["coupling"], local["a"])
        boundary = _boundary_from(local)
        record = qfi_record(
            detector,
            boundary,
            theta=local["theta"],
            phi=local["phi"],
            tau=local["tau"],
            omega_shift=local["omega_shift"],
            gamma_z_convention=spec.convention,
        )
        return (value, record.F, record.F_closed, record.crb)

    grid = spec.grid()
    with ThreadPoolExecutor(max_workers=_max_workers(max_workers)) as pool:
        rows = tuple(pool.map(point, grid))
    return SweepResult(columns=(spec.swept, "F", "F_closed", "crb"), rows=rows)


def preset_parameters(name: str) -> dict:
    """Fixed physics of each figure preset (grid extents are separate knobs)."""
    if name == "fig2":
        return {
            "omega0": 10.0,
            "coupling": 1.0,
            "R": 0.1,
            "alpha": 0.1 * math.pi,
            "theta": 0.5 * math.pi,
            "phi": 0.0,
            "columns": [0.5, 1.0, 2.0, 4.0],  # accelerations
            "column_key": "a",
        }
    if name == "fig3":
        return {
            "omega0": 10.0,
            "coupling": 1.0,
            "a": 1.0,
            "alpha": 0.1 * math.pi,
            "theta": 0.5 * math.pi,
            "phi": 0.0,
            "columns": [0.001, 0.01, 0.1, 0.4, 1.0, 100.0],  # mirror distances
            "column_key": "R",
        }
    if name == "fig4":
        return {
            "omega0": 10.0,
            "coupling": 1.0,
            "a": 1.0,
            "R": 0.4,
            "theta": 0.5 * math.pi,
            "phi": 0.0,
            "tau": 0.4,
        }
    raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")


def run_preset(
    name: str,
    grid_start: float | None = None,
    grid_stop: float | None = None,
    points: int | None = None,
    columns: list[float] | None = None,
    convention: str = "eq7",
    max_workers: int | None = None,
) -> SweepResult:
    """Evaluate a figure preset.

    fig2 and fig3 emit proper-time rows against one equal-superposition QFI
    column per parameter value (plus an unbounded reference column for fig3);
    fig4 emits mirror-angle rows. Grid extents default to tau in [0, 1]
    (101 points) and, for fig4, a grid of 81 angles symmetric about pi/4.
    """
    params = preset_parameters(name)

    if name == "fig4":
        start = 0.05 * math.pi if grid_start is None else grid_start
        stop = 0.45 * math.pi if grid_stop is None else grid_stop
        n = 81 if points is None else points
        detector = DetectorParams(params["omega0"], params["coupling"], params["a"])
        tau = params["tau"]

        def point(alpha: float) -> tuple[float, ...]:
            boundary = BoundaryConfig.two_perpendicular_mirrors(params["R"], alpha)
            record = qfi_record(
                detector,
                boundary,
                theta=params["theta"],
                phi=params["phi"],
                tau=tau,
                gamma_z_convention=convention,
            )
            return (alpha, record.F)

        grid = np.linspace(start, stop, n)
        with ThreadPoolExecutor(max_workers=_max_workers(max_workers)) as pool:
            rows = tuple(pool.map(point, grid))
        return SweepResult(columns=("alpha", "F"), rows=rows)

    start = 0.0 if grid_start is None else grid_start
    stop = 1.0 if grid_stop is None else grid_stop
    n = 101 if points is None else points
    column_values = list(params["columns"] if columns is None else columns)
    column_key = params["column_key"]
    taus = np.linspace(start, stop, n)

    cases: list[tuple[str, DetectorParams, BoundaryConfig]] = []
    for value in column_values:
        if column_key == "a":
            detector = DetectorParams(params["omega0"], params["coupling"], value)
            boundary = BoundaryConfig.two_perpendicular_mirrors(params["R"], params["alpha"])
        else:
            detector = DetectorParams(params["omega0"], params["coupling"], params["a"])
            boundary = BoundaryConfig.two_perpendicular_mirrors(value, params["alpha"])
        cases.append((f"{column_key}={value:g}", detector, boundary))
    if name == "fig3":
        cases.append(
            ("unbounded", DetectorParams(params["omega0"], params["coupling"], params["a"]), BoundaryConfig.unbounded())
        )

    def row(tau: float) -> tuple[float, ...]:
        cells = [tau]
        for _, detector, boundary in cases:
            record = qfi_record(
                detector,
                boundary,
                theta=params["theta"],
                phi=params["phi"],
                tau=tau,
                gamma_z_convention=convention,
            )
            cells.append(record.F)
        return tuple(cells)

    with ThreadPoolExecutor(max_workers=_max_workers(max_workers)) as pool:
        rows = tuple(pool.map(row, taus))
    return SweepResult(columns=("tau", *(label for label, _, _ in cases)), rows=rows)


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to regenerate an emitted file."""

    command: str
    parameters: dict
    convention: str
    version: str
    timestamp: str
    outputs: tuple[str, ...]

    @classmethod
    def create(
        cls, command: str, parameters: dict, convention: str, outputs: tuple[str, ...]
    ) -> "RunManifest":
        return cls(
            command=command,
            parameters=parameters,
            convention=convention,
            version=ARTIFACT_VERSION,
            timestamp=datetime.now(timezone.utc).isoformat(),
            outputs=outputs,
        )

    def digest(self) -> str:
        # Timestamp and output paths are excluded so that regenerated files
        # are byte-identical for the same physics.
        payload = {
            "command": self.command,
            "parameters": self.parameters,
            "convention": self.convention,
            "version": self.version,
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_json(self) -> str:
        data = dataclasses.asdict(self)
        data["outputs"] = list(self.outputs)
        data["digest"] = self.digest()
        return json.dumps(data, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        data = json.loads(text)
        data.pop("digest", None)
        data["outputs"] = tuple(data["outputs"])
        return cls(**data)


def format_value(value) -> str:
    if isinstance(value, str):
        return value
    return CSV_FLOAT_FORMAT % value


def write_csv(path: str, columns: tuple[str, ...], rows, manifest: RunManifest) -> None:
    """Write a CSV with the manifest digest in a comment line, plus the
    manifest JSON alongside at <path>.manifest.json."""
    lines = [f"# manifest-digest: {manifest.digest()}"]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_value(cell) for cell in row))
    with open(path, "w") as handle:
        handle.write("\n".join(lines) + "\n")
    with open(f"{path}.manifest.json", "w") as handle:
        handle.write(manifest.to_json() + "\n")
