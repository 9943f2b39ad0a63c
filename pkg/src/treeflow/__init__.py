"""Maximum integral multiterminal flow on capacitated trees, with certificates."""

from treeflow.certificate import (
    CutCertificate,
    PathDecomposition,
    VerificationReport,
    certify,
    decompose_solution,
    verify_solution,
)
from treeflow.instance import Instance, normalize, parse_instance, read_instance
from treeflow.interval import ParityInterval, otimes, split
from treeflow.oracle import GenParams, brute_force_value, random_instance
from treeflow.solver import Solution, solve

__all__ = [
    "CutCertificate",
    "GenParams",
    "Instance",
    "ParityInterval",
    "PathDecomposition",
    "Solution",
    "VerificationReport",
    "brute_force_value",
    "certify",
    "decompose_solution",
    "normalize",
    "otimes",
    "parse_instance",
    "random_instance",
    "read_instance",
    "solve",
    "split",
    "verify_solution",
]
