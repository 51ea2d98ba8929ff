"""Equivariant sliceness certificates for strongly invertible knots.

Submodules:

- ``linkdiag``: planar link diagrams (PD codes) and diagram moves
- ``invariants``: Kauffman bracket / Jones, Goeritz determinant and
  signature, Arf, bounded unknot recognition
- ``symdiag``: strongly invertible diagrams in axis-normal form, quotient
  knots, symmetric crossing changes, equivariant unknotting search
- ``eqtree``: locally bipartitioned trees and associated links
- ``plumbing``: symmetric plumbing trees and ambient descriptors
- ``certify``: sliceness certificates and non-sliceness verdicts
- ``cli``: batch command-line front end
"""

from importlib import resources


def data_path(name):
    """Path to a bundled corpus file."""
    return resources.files(__package__).joinpath("data", name)


def data_text(name):
    return data_path(name).read_text(encoding="utf-8")


__all__ = ["data_path", "data_text"]
__version__ = "0.1.0"
