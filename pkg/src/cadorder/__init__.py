"""Choosing variable orderings for cylindrical algebraic decomposition.

Submodules are imported on demand so that backend subprocesses such as
:mod:`cadorder.mockcad` start quickly.
"""

__version__ = "0.1.0"
