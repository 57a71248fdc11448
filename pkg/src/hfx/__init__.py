"""Numerical verification engine for hypercomplex function theory.

Subpackages cover the Clifford algebra core, Clifford-valued field
calculus, the Cauchy integral machinery on spheres and balls, the
mass-term (intertwined) function theory, the Moebius group of the unit
ball, and the unit-disk group-representation construction of the Cauchy
and Bergman kernels, plus a CLI harness that runs named verification
suites and emits JSON/CSV reports.
"""

__version__ = "0.1.0"
