"""Backbones of propositional formulas, transparent machine reductions, and
the gadget families that make backbone values hard to compute."""

__version__ = "0.1.0"
