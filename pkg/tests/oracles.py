"""Independent reference checks used by the tests.

Everything here works on explicit realizations (pure words) and shares no
logic with the library's window and weight arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

import numpy as np

from composite_dna.verifier import realizations


def max_run(word) -> int:
    best = run = 0
    prev = None
    for s in word:
        run = run + 1 if s == prev else 1
        prev = s
        best = max(best, run)
    return best


def gc_count(pure_word) -> int:
    return sum(1 for s in pure_word if s in (2, 3))  # C, G


def rll_by_realizations(alphabet, x, l) -> bool:
    return all(max_run(w) <= l for w in realizations(alphabet, x))


def gc_range_by_realizations(alphabet, x) -> tuple[int, int]:
    counts = [gc_count(w) for w in realizations(alphabet, x)]
    return min(counts), max(counts)


def balanced_by_realizations(alphabet, x, eps, lenient=False) -> bool:
    n = len(x)
    lo = Fraction(n, 2) - Fraction(eps) * n
    hi = Fraction(n, 2) + Fraction(eps) * n
    if lenient:
        lo, hi = math.floor(lo), math.ceil(hi)
    return all(lo <= gc_count(w) <= hi for w in realizations(alphabet, x))


def window_forbidden_by_realizations(alphabet, w) -> bool:
    return any(len(set(r)) == 1 for r in realizations(alphabet, w))


def forbidden_by_realizations(alphabet, l):
    q = len(alphabet)
    return sorted(w for w in product(range(q), repeat=l + 1) if window_forbidden_by_realizations(alphabet, w))


def dense_adjacency(alphabet, l) -> np.ndarray:
    """Adjacency built from the definition: u -> v iff they overlap and the spanned window is allowed."""
    q = len(alphabet)
    nodes = list(product(range(q), repeat=l))
    index = {u: i for i, u in enumerate(nodes)}
    D = np.zeros((len(nodes), len(nodes)))
    for u in nodes:
        for s in range(q):
            if not window_forbidden_by_realizations(alphabet, u + (s,)):
                D[index[u], index[u[1:] + (s,)]] = 1
    return D


def perron_eigenvalue(D) -> float:
    return float(max(np.linalg.eigvals(D).real))
