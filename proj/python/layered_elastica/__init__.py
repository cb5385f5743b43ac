"""Two-layered elastodynamic Green tensors and rough-interface scattering."""

from ._core import (
    ElasticMedium,
    LayeredElasticaError,
    ScatterSolution,
    beta,
    coefficient_keys3d,
    far_field2d,
    far_field3d,
    green2d,
    green3d,
    run_suite,
    solve,
    suite_names,
    transcription_summary,
)

__all__ = [
    "ElasticMedium",
    "LayeredElasticaError",
    "ScatterSolution",
    "beta",
    "coefficient_keys3d",
    "far_field2d",
    "far_field3d",
    "green2d",
    "green3d",
    "run_suite",
    "solve",
    "suite_names",
    "transcription_summary",
]
