"""
Services module for the periodic orbit solver.

This module contains the computational services that handle:
- Coefficient parsing, spec-file loading and hypothesis checks
- Green kernels, quadrature and cone radii
- The resolving operator and its damped Picard iteration
- Poincare shooting with a batched Dormand-Prince integrator
- Trajectory export

Exports:
    - OrbitService: Command pipeline shared by the CLI and the API
    - get_orbit_service: Dependency provider for the API routes
"""

from .orbit_service import OperatorSolution, OrbitService, get_orbit_service

__all__ = ["OperatorSolution", "OrbitService", "get_orbit_service"]
