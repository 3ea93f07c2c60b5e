"""Photonic quantum information simulator: Fock-space linear optics, Gaussian CV, QKD and tomography."""

__version__ = "0.1.0"

from . import (  # noqa: E402
    capacity,
    cluster,
    cv,
    fock,
    gates,
    grover,
    linear_optics,
    measurement,
    parity,
    qkd,
    qubits,
    tomography,
)

__all__ = [
    "capacity",
    "cluster",
    "cv",
    "fock",
    "gates",
    "grover",
    "linear_optics",
    "measurement",
    "parity",
    "qkd",
    "qubits",
    "tomography",
    "__version__",
]
