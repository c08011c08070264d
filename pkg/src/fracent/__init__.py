"""Entanglement, quench dynamics and OTOCs of the harmonic chain with a fractional Laplacian."""

__version__ = "0.1.0"

from fracent.chain import ChainSpec, QuenchSpec, dispersion, group_velocity, max_velocity
from fracent.correlators import mode_correlators, realspace_correlators
from fracent.gaussian import (
    entanglement_entropy,
    log_negativity,
    mutual_information,
    symplectic_spectrum,
)
from fracent.otoc import otoc_b, otoc_series
from fracent.quasiparticle import (
    UNBOUNDED,
    dip_height,
    entropy_prediction_finite,
    occupations,
    revival_time,
)

__all__ = [
    "ChainSpec",
    "QuenchSpec",
    "UNBOUNDED",
    "dip_height",
    "dispersion",
    "entanglement_entropy",
    "entropy_prediction_finite",
    "group_velocity",
    "log_negativity",
    "max_velocity",
    "mode_correlators",
    "mutual_information",
    "occupations",
    "otoc_b",
    "otoc_series",
    "realspace_correlators",
    "revival_time",
    "symplectic_spectrum",
]
