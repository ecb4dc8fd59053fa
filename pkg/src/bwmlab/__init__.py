"""Numerical laboratory for BWM algebra representations, the spin-1 chain
built on them, and Wigner D-function solutions of the Yang-Baxter equation."""
from .algebra import ChainOperator, Tolerance, eig_hermitian, embed_pair, kron, matexp, residual
from .params import BwmaParams, RelationReport, check_bwma, e_from_s, from_q, make_params
from .topo import TopoRep, build_rep, gram_matrix, q1_limit_rep, standardize, topo_coeffs

__version__ = "0.1.0"
