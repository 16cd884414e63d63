"""Finite-sum series solutions of second-order difference equations."""

from ._spps import (  # noqa: F401
    BoundaryCondition,
    CoefficientSet,
    SeedSolution,
    bounded_certificate,
    build_seed,
    eigenvalues,
    falling_factorial,
    laguerre_closed_form,
    max_relative_residual,
    oracle_solution,
    run_command,
    seed_from_values,
    shooting_eigen_real,
    solve_pair,
)

__all__ = [
    "BoundaryCondition",
    "CoefficientSet",
    "SeedSolution",
    "bounded_certificate",
    "build_seed",
    "eigenvalues",
    "falling_factorial",
    "laguerre_closed_form",
    "max_relative_residual",
    "oracle_solution",
    "run_command",
    "seed_from_values",
    "shooting_eigen_real",
    "solve_pair",
]
