"""Algebraic counting and detection of Hamiltonian cycles and out-branchings.

The package is organised around a weighted-Laplacian toolbox:

- graph: digraph parsing, the cycle-to-path vertex split, independent-set
  partitions of the vertex set.
- algebra: binary fields GF(2^m), prime fields, residue rings Z/p^k, group
  algebras of (Z/2)^k, truncated polynomials, CRT, interpolation.
- matrixtree: symbolic Laplacians and determinant kernels (Gaussian,
  division-free, fraction-free integer), out-branching counting.
- hamcount: Hamiltonian-cycle counts modulo prime powers via an
  inclusion-exclusion determinant sieve, with meet-in-the-middle pruning and
  CRT boosting to exact counts under a degree cap.
- hamdetect: one-sided randomized Hamiltonicity detection driven by a
  port matrix indexed by an independent-set partition of the vertices.
- branchings: detectors for out-branchings with many internal vertices or
  many leaves, via group-algebra sieves and degree-window divisibility tests.
- oracle: small-instance brute-force reference implementations.
"""

from .branchings import (
    DvConfig,
    InternalSieveConfig,
    detect_k_internal,
    detect_k_leaf,
    solve_nk_dv,
)
from .errors import CapExceededError, GuardError, ParseError
from .graph import (
    Digraph,
    IndependentPartition,
    VertexSplit,
    find_independent_partition,
    parse_digraph,
    split_vertex,
)
from .hamcount import (
    SieveParams,
    count_avg_degree,
    count_exact_capped,
    count_hc_mod,
    crt_count,
)
from .hamdetect import detect_hamiltonian_cycle
from .matrixtree import count_out_branchings
from .report import DetectionReport

__all__ = [
    "CapExceededError",
    "GuardError",
    "ParseError",
    "Digraph",
    "IndependentPartition",
    "VertexSplit",
    "find_independent_partition",
    "parse_digraph",
    "split_vertex",
    "SieveParams",
    "count_hc_mod",
    "crt_count",
    "count_exact_capped",
    "count_avg_degree",
    "count_out_branchings",
    "detect_hamiltonian_cycle",
    "detect_k_internal",
    "detect_k_leaf",
    "solve_nk_dv",
    "InternalSieveConfig",
    "DvConfig",
    "DetectionReport",
]

__version__ = "0.1.0"
