"""
Pydantic models for instance files and reports.
"""

from .instance import *
from .report import *

__all__ = [
    # Instance models
    "InstanceKind",
    "InstanceFile",
    "BasisEntry",
    "MapEntry",
    "OutputTerm",

    # Report models
    "CheckVerdict",
    "ResidualWitness",
    "Report",
]
