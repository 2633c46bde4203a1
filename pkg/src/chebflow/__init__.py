"""Stabilized explicit Runge-Kutta methods for the 2D incompressible
Navier-Stokes equations.

The package couples the Chebyshev-type integrators RKC and ROCK2 (and the
partitioned PIROCK scheme) to the incompressibility constraint in two ways: a
classical fractional-step projection (one Poisson solve per step) and an
index-2 differential-algebraic formulation that projects every internal stage.
Space is discretized on a uniform MAC staggered grid on the unit square; the
Neumann Poisson problems are solved directly with a fast discrete cosine
transform.

Main entry points:

- :mod:`chebflow.grid` -- staggered fields, boundary data, norms
- :mod:`chebflow.spatial` -- divergence / gradient / momentum operators
- :mod:`chebflow.dct` -- DCT-II/III with naive, iterative, recursive and
  hybrid algorithms
- :mod:`chebflow.poisson` -- direct Neumann Poisson solver
- :mod:`chebflow.integrators` -- RKC / ROCK2 / PIROCK / RK4 steppers and the
  adaptive step controller
- :mod:`chebflow.coupling` -- PM1, PM1V, PM3 projections and the DAE stage
  algorithm with the AP1 / AP2 / AP2W pressure recoveries
- :mod:`chebflow.problems` -- benchmark problems (forced flow, Green-Taylor
  vortex, lid-driven cavity)
- :mod:`chebflow.bench` -- simulation driver and experiment studies
"""

__version__ = "0.1.0"
