"""Exact construction and checking of common fundamental domains ``N[0,1)^d``
for pairs of full-rank lattices."""
from .boxenum import EnumerationResult, Parallelepiped, PointEnumerator, Topology, enumerate_points, integer_bounding_box, membership
from .constructors import (
    CascadeParams,
    ConstructedPair,
    CoprimeParams,
    DiagParams,
    cascade_pair,
    coprime_pair,
    diagonal_pair,
    direct_sum_pair,
    perm_similarity,
    tensor_pair,
    unipotent_pair,
)
from .errors import *  # noqa: F401,F403
from .exactlin import ExactScalar, Matrix, det, extended_gcd, hnf, inverse, is_unimodular_integral, sqrt_of
from .goodpair import CheckReport, WitnessCandidate, check_single, check_witness, minkowski_boundary_report, transport_witness
from .lattice import Lattice, LatticePair, covolume, lattices_equal, normalize_pair
from .oracle import CornerSystem, McConfig, corner_system_check, mc_tiling_check, notgood_scan, random_unimodular
from .textio import parse_matrix, parse_pair, parse_scalar

__version__ = "0.1.0"
