"""Repair-bandwidth toolkit for two-parity MDS array codes (two symbols per node)."""

from .gf2m import GF2m, field_new
from .blockmat import Block, BlockClass, BlockTag, RepairMat, classify, enumerate_row_spaces

__all__ = [
    "GF2m",
    "field_new",
    "Block",
    "BlockClass",
    "BlockTag",
    "RepairMat",
    "classify",
    "enumerate_row_spaces",
]

__version__ = "0.1.0"
