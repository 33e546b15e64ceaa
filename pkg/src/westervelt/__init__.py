"""Verification lab for Westervelt's nonlinear acoustic wave equation.

Submodules
----------
jetspace
    Exact rational functions of jet coordinates.
calculus
    Total derivatives, Euler operators, reduction on solutions.
catalog
    Encoded symmetries, multipliers, currents, operators and maps.
verify
    Exact checks built on the above.
pde, observables
    Finite-difference solver and conserved-integral monitors.
exact
    Exact solutions and their group transformations.
cli
    Command-line entry point.
"""

__version__ = "0.1.0"
