"""Secrecy degrees of freedom of MIMO wiretap channels with a full-duplex active eavesdropper."""
__version__ = "0.1.0"

from .dof import (  # noqa: E402
    BACKEND,
    AntennaConfig,
    DofResult,
    HelperConfig,
    sdof_active,
    sdof_active_max,
    worst_case_sdof,
)

__all__ = [
    "__version__",
    "BACKEND",
    "AntennaConfig",
    "HelperConfig",
    "DofResult",
    "sdof_active",
    "sdof_active_max",
    "worst_case_sdof",
]
