"""
Cone Periodic Orbits

Positive periodic solutions of periodic Leslie-Gower (S1), Holling-Tanner (S2)
and type-3 response (S3) predator-prey systems, computed two ways:

- as the fixed point of a Green-kernel operator on a cone of positive
  periodic functions (damped Picard iteration)
- as a fixed point of the period map (Newton shooting with a batched
  Dormand-Prince integrator)

The package ships a command-line front end (``app.cli``) and a FastAPI
service (``app.main``) over the same pipeline.
"""

__version__ = "1.0.0"
__description__ = "Positive periodic solutions of periodic predator-prey systems"
