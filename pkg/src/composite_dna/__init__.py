"""Constrained coding for composite DNA alphabets.

Verifiers for run-length and GC-balance constraints over every synthesis
realization, capacity of the run-length constraint, and encoders/decoders
for run-length, GC-balance, and joint constraints.
"""

from composite_dna.alphabet import (
    SIGMA0,
    SIGMA1_AC,
    SIGMA2_ATGC,
    CompositeAlphabet,
    parse_alphabet,
)
from composite_dna.capacity import (
    Constraint,
    ForbiddenRule,
    brute_count,
    build_graph,
    count_exact,
    dominant_eigenvalue,
    forbidden_set,
    one_redundancy_bound,
    rll_capacity,
)
from composite_dna.combined_codec import CombinedParams, combined_decode, combined_encode
from composite_dna.rll_codec import RllParams, rll_decode, rll_encode
from composite_dna.verifier import BalanceMode, gc_bounds, is_eps_balanced, is_rll

__version__ = "0.1.0"
