"""Floquet simulator for ancilla-stabilized subharmonic response in
non-interacting spin ensembles.

Three models share one protocol (bath rotation by pi - epsilon, then an
interval of ancilla-mediated evolution, repeated stroboscopically):

- ``central_spin``: spins coupled uniformly (or per-site) to one driven
  ancilla qubit; collective (N+1)-dimensional and full 2^N backends.
- ``spin_mech``: the ancilla degree of freedom is a bosonic mode with a
  closed-form factored propagator checked against dense exponentiation.
- ``remote``: two baths, each with its own ancilla, synchronized through
  an ancilla-ancilla flip-flop coupling.

``spectral`` quantifies the period-doubled response; ``runner`` and ``cli``
handle spec files, artifacts, sweeps, and validation.
"""

__version__ = "0.1.0"

from .central_spin import (
    CentralSpinConfig,
    FloquetResult,
    cross_validate_backends,
    floquet_operator,
    floquet_run,
)
from .collective import CollectiveBasis
from .errors import CapacityError, ConfigError, CutoffError, DomainError
from .remote import RemoteConfig, floquet_run_remote, sync_metric
from .spectral import (
    PeakReport,
    Spectrum,
    SweepTable,
    dtc_signature,
    epsilon_sweep,
    parameter_sweep,
    peak_report,
    power_spectrum,
)
from .spin_mech import SpinMechConfig, closed_form_unitary, floquet_run_mech

__all__ = [
    "__version__",
    "CapacityError",
    "CentralSpinConfig",
    "CollectiveBasis",
    "ConfigError",
    "CutoffError",
    "DomainError",
    "FloquetResult",
    "PeakReport",
    "RemoteConfig",
    "Spectrum",
    "SpinMechConfig",
    "SweepTable",
    "closed_form_unitary",
    "cross_validate_backends",
    "dtc_signature",
    "epsilon_sweep",
    "floquet_operator",
    "floquet_run",
    "floquet_run_mech",
    "floquet_run_remote",
    "parameter_sweep",
    "peak_report",
    "power_spectrum",
    "sync_metric",
]
