"""Single-incident-wave far-field correlation imaging of small 2D scatterers.

Pipeline: build a scene of small permeability-contrast disks, synthesize
its far-field pattern for one incident plane wave, correlate the samples
against plane-wave test vectors over a search grid, and read target
locations off the normalized map. The map's structure is governed by the
first-order Bessel function J1, which is why each scatterer shows up as a
peak pair straddling its true center rather than a single spot.
"""

from .forward import (FarFieldData, NoiseSpec, add_noise, far_field_asymptotic,
                      polarizability_factor, read_far_field,
                      synthesize_far_field, write_far_field)
from .imaging import (IndicatorMap, Peak, SearchGrid, compute_map, export_map,
                      extract_peaks)
from .indicator import (PeakPrediction, SamplingPoint, closed_form_magnitude,
                        closed_form_residual, contrast_factor,
                        dsm_indicator_raw, inner_product, predicted_peaks,
                        test_vector)
from .model import (Inhomogeneity, ObservationSet, Scene, ValidationReport,
                    WaveContext, load_scene_config, make_observation_set,
                    validate_scene, wavelength_from_wavenumber,
                    wavenumber_from_wavelength)
from .specfun import (J1_FIRST_MAX, BesselEvaluation, bessel_j0,
                      bessel_j0_oracle, bessel_j1, bessel_j1_oracle,
                      bessel_j_oracle)

__version__ = "0.1.0"

__all__ = [
    "BesselEvaluation", "FarFieldData", "IndicatorMap", "Inhomogeneity",
    "J1_FIRST_MAX", "NoiseSpec", "ObservationSet", "Peak", "PeakPrediction",
    "SamplingPoint", "Scene", "SearchGrid", "ValidationReport",
    "WaveContext", "add_noise", "bessel_j0", "bessel_j0_oracle", "bessel_j1",
    "bessel_j1_oracle", "bessel_j_oracle", "closed_form_magnitude",
    "closed_form_residual", "compute_map", "contrast_factor",
    "dsm_indicator_raw", "export_map", "extract_peaks",
    "far_field_asymptotic", "inner_product", "load_scene_config",
    "make_observation_set", "polarizability_factor", "predicted_peaks",
    "read_far_field", "synthesize_far_field", "test_vector",
    "validate_scene", "wavelength_from_wavenumber",
    "wavenumber_from_wavelength", "write_far_field",
]
