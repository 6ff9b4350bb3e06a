"""Exact series engine for elliptic toroidal algebra representations and instanton sums."""

from .partition import EMPTY, Partition, enumerate_partitions, enumerate_tuples
from .qseries.params import DEFAULT, ParamPoint

__all__ = ["EMPTY", "Partition", "enumerate_partitions", "enumerate_tuples",
           "DEFAULT", "ParamPoint"]
__version__ = "0.1.0"
