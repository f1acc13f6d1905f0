"""Search grids, indicator-map assembly, peak extraction, file export.

Maps are evaluated over a rectangular node grid and normalized by their
grid maximum. The sweep is organized in whole-row work units: the result
for a row depends only on that row's coordinates, so serial and threaded
sweeps produce bit-identical matrices regardless of worker count.

Exports: CSV (``x,y,value`` per node, 17 significant digits) and binary
PGM (P5, 16-bit big-endian samples, top row = y_max).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .forward import FarFieldData
from .indicator import contrast_factor
from .model import Scene, WaveContext
from .specfun import bessel_j1

GRID_EPS = 1e-9  # guards node counting against FP drift in (max-min)/step


@dataclass(frozen=True)
class SearchGrid:
    """Rectangular node grid: bounds plus a uniform step."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    step: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid bounds must satisfy min < max on both axes")
        if not (self.step > 0):
            raise ValueError("grid step must be positive")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2 nodes per axis")

    @property
    def nx(self) -> int:
        return int(math.floor((self.x_max - self.x_min) / self.step + 1 + GRID_EPS))

    @property
    def ny(self) -> int:
        return int(math.floor((self.y_max - self.y_min) / self.step + 1 + GRID_EPS))

    def x_nodes(self) -> np.ndarray:
        return self.x_min + self.step * np.arange(self.nx)

    def y_nodes(self) -> np.ndarray:
        return self.y_min + self.step * np.arange(self.ny)


@dataclass(frozen=True)
class IndicatorMap:
    """Real map over a grid; row i of ``values`` holds y node i (ascending)."""

    grid: SearchGrid
    values: np.ndarray
    normalization: str = "grid-max"  # "grid-max" | "raw"

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if v.shape != (self.grid.ny, self.grid.nx):
            raise ValueError("values shape must be (ny, nx)")
        if self.normalization not in ("grid-max", "raw"):
            raise ValueError("normalization must be 'grid-max' or 'raw'")


@dataclass(frozen=True)
class Peak:
    """A strict local maximum of the map, at node resolution."""

    position: np.ndarray
    value: float


def _data_row_values(psi: np.ndarray, phase_x: np.ndarray,
                     phase_y_row: np.ndarray, inv_denom: float) -> np.ndarray:
    # One row of |<psi, e(x_s)>| / (||psi|| ||e||); the test-vector phase
    # separates over the tensor grid as e^{ik x cos} * e^{ik y sin}.
    corr = phase_x @ (psi * phase_y_row)
    return np.abs(corr) * inv_denom


def _analytic_row_values(scene: Scene, wave: WaveContext, x_nodes: np.ndarray,
                         y: float) -> np.ndarray:
    k = wave.wavenumber
    d = wave.incident_direction
    mu0 = scene.background_permeability
    total = np.zeros(x_nodes.shape, dtype=complex)
    for inc in scene.inclusions:
        dx = inc.center[0] - x_nodes
        dy = inc.center[1] - y
        dist = np.hypot(dx, dy)
        safe = np.where(dist == 0.0, 1.0, dist)
        directional = (dx * d[0] + dy * d[1]) / safe
        weight = (inc.radius ** 2 * contrast_factor(inc.permeability, mu0)
                  * np.exp(1j * k * float(np.dot(d, inc.center))))
        term = weight * directional * bessel_j1(k * dist)
        total += np.where(dist == 0.0, 0.0, term)
    return np.abs(total)


def compute_map(source, grid: SearchGrid, *, wavenumber: float = None,
                threads: int = 1) -> IndicatorMap:
    """Evaluate the indicator at every grid node, then grid-max normalize.

    Parameters
    ----------
    source : FarFieldData or (Scene, WaveContext)
        Far-field data (requires ``wavenumber``) for the measured-data
        indicator, or a scene/wave pair for the closed-form map.
    grid : SearchGrid
    wavenumber : float, required for a FarFieldData source
    threads : int
        Worker threads for the row sweep. The output is bit-identical
        for every thread count.
    """
    xs = grid.x_nodes()
    ys = grid.y_nodes()

    if isinstance(source, FarFieldData):
        if wavenumber is None or not (wavenumber > 0):
            raise ValueError("a positive wavenumber is required with data sources")
        psi = source.samples
        norm_psi = float(np.linalg.norm(psi))
        if norm_psi == 0.0:
            raise ValueError("indicator undefined for all-zero data")
        theta = source.observation_set.directions
        phase_x = np.exp(1j * wavenumber * np.outer(xs, theta[:, 0]))
        phase_y = np.exp(1j * wavenumber * np.outer(ys, theta[:, 1]))
        inv_denom = 1.0 / (norm_psi * math.sqrt(source.observation_set.count))

        def row(iy: int) -> np.ndarray:
            return _data_row_values(psi, phase_x, phase_y[iy], inv_denom)
    else:
        scene, wave = source

        def row(iy: int) -> np.ndarray:
            return _analytic_row_values(scene, wave, xs, float(ys[iy]))

    values = np.empty((grid.ny, grid.nx))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for iy, res in enumerate(pool.map(row, range(grid.ny))):
                values[iy] = res
    else:
        for iy in range(grid.ny):
            values[iy] = row(iy)

    peak = values.max()
    if peak == 0.0:
        raise ValueError("degenerate all-zero indicator map")
    return IndicatorMap(grid=grid, values=values / peak, normalization="grid-max")


def extract_peaks(indicator_map: IndicatorMap, min_value: float,
                  min_separation: float) -> list:
    """Strict 8-neighborhood local maxima, thinned to a minimum spacing.

    Strictness is taken under the total order (value, row, col): an exact
    value tie between neighbors is broken toward the earlier node. Peaks
    whose true location falls mid-cell produce two nodes whose doubles
    can tie exactly, and a plain value-strict test would silently drop
    both; the tie-break keeps exactly one. A candidate must still exceed
    at least one neighbor by value, so constant maps yield no peaks.

    Candidates at or above ``min_value`` are kept greedily in order of
    descending value (ties broken by row, then column), dropping any
    within ``min_separation`` of an already-kept peak.
    """
    if not (0.0 < min_value < 1.0):
        raise ValueError("min_value must lie in (0, 1)")
    if not (min_separation > 0):
        raise ValueError("min_separation must be positive")
    v = indicator_map.values
    lo = np.full((v.shape[0] + 2, v.shape[1] + 2), -np.inf)
    lo[1:-1, 1:-1] = v
    hi = np.full_like(lo, np.inf)
    hi[1:-1, 1:-1] = v
    dominates = np.ones(v.shape, dtype=bool)
    exceeds_one = np.zeros(v.shape, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            neighbor = lo[1 + di:1 + di + v.shape[0],
                          1 + dj:1 + dj + v.shape[1]]
            node_precedes = di > 0 or (di == 0 and dj > 0)
            if node_precedes:
                dominates &= v >= neighbor
            else:
                dominates &= v > neighbor
            real = hi[1 + di:1 + di + v.shape[0],
                      1 + dj:1 + dj + v.shape[1]]
            exceeds_one |= v > real  # inf padding: borders never count
    rows, cols = np.nonzero(dominates & exceeds_one & (v >= min_value))
    order = np.lexsort((cols, rows, -v[rows, cols]))

    xs = indicator_map.grid.x_nodes()
    ys = indicator_map.grid.y_nodes()
    kept: list = []
    for idx in order:
        i, j = int(rows[idx]), int(cols[idx])
        pos = np.array([xs[j], ys[i]])
        if all(np.hypot(*(pos - p.position)) >= min_separation for p in kept):
            kept.append(Peak(position=pos, value=float(v[i, j])))
    return kept


def export_map(indicator_map: IndicatorMap, path, fmt: str) -> None:
    """Write a map to disk as ``csv`` or 16-bit binary ``pgm``.

    CSV rows run y ascending (outer) and x ascending (inner), values with
    17 significant digits. PGM is P5 with maxval 65535, big-endian
    samples round(65535 * v), and its top row holds y_max.
    """
    path = Path(path)
    v = indicator_map.values
    if fmt == "csv":
        xs = indicator_map.grid.x_nodes()
        ys = indicator_map.grid.y_nodes()
        lines = ["x,y,value"]
        for i, y in enumerate(ys):
            for j, x in enumerate(xs):
                lines.append(f"{x:.17g},{y:.17g},{v[i, j]:.17g}")
        try:
            path.write_text("\n".join(lines) + "\n")
        except OSError as exc:
            raise OSError(f"failed writing map CSV to {path}: {exc}") from exc
    elif fmt == "pgm":
        if v.min() < 0.0 or v.max() > 1.0:
            raise ValueError("PGM export requires values in [0, 1]; "
                             "normalize the map first")
        pixels = np.rint(np.flipud(v) * 65535.0).astype(">u2")
        header = f"P5\n{v.shape[1]} {v.shape[0]}\n65535\n".encode("ascii")
        try:
            path.write_bytes(header + pixels.tobytes())
        except OSError as exc:
            raise OSError(f"failed writing map PGM to {path}: {exc}") from exc
    else:
        raise ValueError(f"unknown export format {fmt!r} (use 'csv' or 'pgm')")


def read_map_csv(path) -> np.ndarray:
    """Reload an exported CSV map as an (n_nodes, 3) array of x, y, value."""
    rows = Path(path).read_text().strip().splitlines()
    if not rows or rows[0] != "x,y,value":
        raise ValueError(f"{path}: expected header 'x,y,value'")
    return np.array([[float(t) for t in row.split(",")] for row in rows[1:]])
