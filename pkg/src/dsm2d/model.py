"""Domain types for scenes, incident waves, and observation geometry.

A scene is a homogeneous 2D background of relative permeability ``mu_0``
containing small circular inclusions, each with its own permeability.
The incident field is a plane wave of wavelength ``lambda`` travelling
along a unit direction ``d``; far-field samples are taken at uniformly
spaced unit observation directions.

All types are frozen dataclasses with read-only array fields, safe to
share across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

# Minimum admissible k-scaled pairwise separation between inclusion
# centers before a warning is raised. The single-scattering picture needs
# k*|x_m - x_m'| well above 0.75; one order of magnitude is a
# conservative margin that the shipped scenes clear easily.
DEFAULT_SEPARATION_THRESHOLD = 7.5

UNIT_TOL = 1e-12


def _readonly(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Inhomogeneity:
    """A small disk scatterer: center, radius, relative permeability."""

    center: np.ndarray
    radius: float
    permeability: float

    def __post_init__(self):
        object.__setattr__(self, "center", _readonly(self.center))
        if self.center.shape != (2,) or not np.all(np.isfinite(self.center)):
            raise ValueError("center must be a finite 2D point")
        if not (self.radius > 0):
            raise ValueError("radius must be positive")
        if not (self.permeability > 0):
            raise ValueError("permeability must be positive")


@dataclass(frozen=True)
class Scene:
    """Background permeability plus an ordered list of inclusions.

    Centers must be pairwise distinct; coincident inclusions are rejected
    outright since no separation threshold can rescue a zero distance.
    """

    background_permeability: float
    inclusions: tuple

    def __post_init__(self):
        object.__setattr__(self, "inclusions", tuple(self.inclusions))
        if not (self.background_permeability > 0):
            raise ValueError("background permeability must be positive")
        if len(self.inclusions) < 1:
            raise ValueError("scene needs at least one inclusion")
        for m, a in enumerate(self.inclusions):
            for b in self.inclusions[m + 1:]:
                if np.array_equal(a.center, b.center):
                    raise ValueError(
                        "inclusion centers must be pairwise distinct "
                        f"(duplicate at {a.center.tolist()})")

    @property
    def centers(self) -> np.ndarray:
        return np.array([inc.center for inc in self.inclusions])


@dataclass(frozen=True)
class WaveContext:
    """Incident plane wave: wavelength, derived wavenumber, unit direction."""

    wavelength: float
    incident_direction: np.ndarray
    wavenumber: float = field(init=False)

    def __post_init__(self):
        if not (self.wavelength > 0 and math.isfinite(self.wavelength)):
            raise ValueError("wavelength must be positive and finite")
        d = _readonly(self.incident_direction)
        object.__setattr__(self, "incident_direction", d)
        if d.shape != (2,):
            raise ValueError("incident direction must be a 2D vector")
        if abs(float(np.hypot(d[0], d[1])) - 1.0) > UNIT_TOL:
            raise ValueError("incident direction must be a unit vector")
        object.__setattr__(self, "wavenumber", wavenumber_from_wavelength(self.wavelength))

    @classmethod
    def from_degrees(cls, wavelength: float, angle_deg: float) -> "WaveContext":
        """Build from a propagation angle in degrees (0 = +x axis)."""
        ang = math.radians(angle_deg)
        return cls(wavelength, np.array([math.cos(ang), math.sin(ang)]))


@dataclass(frozen=True)
class ObservationSet:
    """N uniformly spaced unit observation directions on the circle."""

    count: int
    directions: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "directions", _readonly(self.directions))
        if self.directions.shape != (self.count, 2):
            raise ValueError("directions must have shape (count, 2)")


def make_observation_set(count: int) -> ObservationSet:
    """Directions theta_n = [cos(2*pi*n/N), sin(2*pi*n/N)] for n = 1..N.

    The angle is reduced mod N before the trig call, so the n = N entry is
    exactly (1, 0) and the set is exactly invariant under n -> n + N.
    """
    if not isinstance(count, (int, np.integer)) or count < 1:
        raise ValueError("count must be a positive integer")
    n = np.arange(1, count + 1) % count
    ang = 2.0 * np.pi * n / count
    return ObservationSet(count=int(count),
                          directions=np.column_stack([np.cos(ang), np.sin(ang)]))


def wavenumber_from_wavelength(wavelength: float) -> float:
    """k = 2*pi / lambda."""
    if not (wavelength > 0 and math.isfinite(wavelength)):
        raise ValueError("wavelength must be positive and finite")
    return 2.0 * math.pi / wavelength


def wavelength_from_wavenumber(wavenumber: float) -> float:
    """Inverse of :func:`wavenumber_from_wavelength`."""
    if not (wavenumber > 0 and math.isfinite(wavenumber)):
        raise ValueError("wavenumber must be positive and finite")
    return 2.0 * math.pi / wavenumber


@dataclass(frozen=True)
class ValidationEntry:
    severity: str  # "warning" | "error"
    message: str


@dataclass(frozen=True)
class ValidationReport:
    entries: tuple

    @property
    def ok(self) -> bool:
        return len(self.entries) == 0

    @property
    def warnings(self):
        return [e for e in self.entries if e.severity == "warning"]

    @property
    def errors(self):
        return [e for e in self.entries if e.severity == "error"]


def validate_scene(scene: Scene, wave: WaveContext,
                   threshold: float = DEFAULT_SEPARATION_THRESHOLD) -> ValidationReport:
    """Check the standing assumptions: separation and small-radius bounds.

    Emits a warning for every inclusion pair with k*|x_m - x_m'| below
    ``threshold`` (an error if the distance is zero) and for every radius
    exceeding lambda/2. Warnings do not block imaging.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    entries = []
    k = wave.wavenumber
    incs = scene.inclusions
    for m in range(len(incs)):
        for mp in range(m + 1, len(incs)):
            dist = float(np.hypot(*(incs[m].center - incs[mp].center)))
            if dist == 0.0:
                entries.append(ValidationEntry(
                    "error", f"inclusions {m} and {mp} share a center"))
            elif k * dist < threshold:
                entries.append(ValidationEntry(
                    "warning",
                    f"inclusions {m} and {mp}: k*distance = {k * dist:.4g} "
                    f"below threshold {threshold:.4g}"))
    for m, inc in enumerate(incs):
        if inc.radius > wave.wavelength / 2.0:
            entries.append(ValidationEntry(
                "warning",
                f"inclusion {m}: radius {inc.radius:.4g} exceeds half the "
                f"wavelength {wave.wavelength:.4g}"))
    return ValidationReport(entries=tuple(entries))


def load_scene_config(path) -> dict:
    """Parse a scene JSON document into constructed domain objects.

    Expected keys: ``background_permeability``, ``inclusions`` (array of
    ``{center: [x, y], radius, permeability}``), ``wavelength``,
    ``incident_direction_degrees``, ``num_observation_directions``.

    Returns a dict with keys ``scene``, ``wave``, ``observations`` plus
    the raw document under ``raw``.
    """
    path = Path(path)
    with open(path) as fh:
        doc = json.load(fh)
    try:
        inclusions = tuple(
            Inhomogeneity(center=np.asarray(item["center"], dtype=float),
                          radius=float(item["radius"]),
                          permeability=float(item["permeability"]))
            for item in doc["inclusions"])
        scene = Scene(background_permeability=float(doc["background_permeability"]),
                      inclusions=inclusions)
        wave = WaveContext.from_degrees(float(doc["wavelength"]),
                                        float(doc["incident_direction_degrees"]))
        obs = make_observation_set(int(doc["num_observation_directions"]))
    except KeyError as exc:
        raise ValueError(f"scene file {path} is missing key {exc}") from exc
    except TypeError as exc:
        raise ValueError(f"scene file {path} is malformed: {exc}") from exc
    return {"scene": scene, "wave": wave, "observations": obs, "raw": doc}


def scene_config_document(scene: Scene, wave: WaveContext, obs: ObservationSet) -> dict:
    """Inverse of :func:`load_scene_config`: domain objects to a JSON document."""
    angle = math.degrees(math.atan2(wave.incident_direction[1],
                                    wave.incident_direction[0]))
    return {
        "background_permeability": scene.background_permeability,
        "inclusions": [
            {"center": inc.center.tolist(), "radius": inc.radius,
             "permeability": inc.permeability}
            for inc in scene.inclusions],
        "wavelength": wave.wavelength,
        "incident_direction_degrees": angle,
        "num_observation_directions": obs.count,
    }
