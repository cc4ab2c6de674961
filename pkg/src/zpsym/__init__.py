"""Exact invariants of prime-order cyclic actions on 4-manifolds.

Signature defects and Dedekind sums (``defects``), the G-signature
feasibility problem (``gsig``), local fixed-point data (``localrep``),
(-2)-sphere configurations and the equivariant plumbing recursion
(``plumbing``), and end-to-end replays (``scenarios``, ``replay``).
"""
__version__ = "0.1.0"
