"""Verification lab for secure network coding on one-hop relay networks.

Exact-arithmetic implementations of the relay code families, wiretap
attack simulation and classification, anti-Latin square search, and
wiretap network capacity formulas.
"""

__version__ = "0.1.0"
