"""
Mean models and array geometries

- manifold: ManifoldModel, NoiseKind, MismatchPair, differences and derivatives
- geometry: ArrayGeometry, the 11-sensor reference array, UCA/ULA builders, file loader
- arrays: Far-field, near-field, ULA, single-tone and identity models
- beampattern: Bartlett beampattern and sidelobe scan
"""

from .manifold import (
    ManifoldModel, NoiseKind, MismatchPair, Derivative, mtilde,
    manifold_derivative, manifold_second_derivative, fix_parameters
)
from .geometry import ArrayGeometry, reference_array, uca_geometry, ula_geometry, load_geometry
from .arrays import (
    far_field_manifold, near_field_manifold, ula_manifold, frequency_manifold,
    identity_manifold, AZIMUTH_SUPPORT, ELEVATION_SUPPORT
)
from .beampattern import BeampatternScan, beampattern, beampattern_grid

__all__ = [
    'ManifoldModel',
    'NoiseKind',
    'MismatchPair',
    'Derivative',
    'mtilde',
    'manifold_derivative',
    'manifold_second_derivative',
    'fix_parameters',
    'ArrayGeometry',
    'reference_array',
    'uca_geometry',
    'ula_geometry',
    'load_geometry',
    'far_field_manifold',
    'near_field_manifold',
    'ula_manifold',
    'frequency_manifold',
    'identity_manifold',
    'AZIMUTH_SUPPORT',
    'ELEVATION_SUPPORT',
    'BeampatternScan',
    'beampattern',
    'beampattern_grid',
]
