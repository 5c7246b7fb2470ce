"""Exact arithmetic for piecewise-linear function algebras on [0,1]^n.

Submodules:
  rationals -- gmpy2-backed exact scalar helpers
  geometry  -- simplicial complexes, clipping, refinement, polytopes
  pwl       -- piecewise-linear functions and their connectives
  terms     -- term grammar, parsing, and function construction
  homeo     -- unimodular piecewise-affine homeomorphisms of the cube
  measures  -- states: Lebesgue, Farey counting, mixtures, push-forwards
  dynamics  -- square/rhombus twists conjugated to disk rotations
  ellgroup  -- the planar lattice-group automorphism and its interval dual
  cli       -- command-line interface
"""

from . import rationals, geometry, pwl, terms, homeo, measures
from . import dynamics, ellgroup

__all__ = [
    "rationals", "geometry", "pwl", "terms", "homeo", "measures",
    "dynamics", "ellgroup",
]
