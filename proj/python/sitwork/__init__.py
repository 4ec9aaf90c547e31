"""Work statistics of sudden impurity quenches in the attractive Hubbard chain."""

from sitwork._core import (
    __version__,
    eigenvalues,
    entanglement,
    sector_dimension,
    sweep_concentration,
    sweep_potential,
    work_distribution,
    work_moments,
)

__all__ = [
    "__version__",
    "eigenvalues",
    "entanglement",
    "sector_dimension",
    "sweep_concentration",
    "sweep_potential",
    "work_distribution",
    "work_moments",
]
