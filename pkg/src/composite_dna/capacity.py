"""Forbidden windows, the run-length constraint graph, and its capacity.

The capacity of the l-RLL constraint over a composite alphabet is log2 of
the spectral radius of the constraint graph's adjacency matrix. Nodes are
all words of length ``l``; an edge ``u -> v`` exists when ``v`` is ``u``
shifted by one symbol and the spanned ``(l + 1)``-window is not forbidden.

Exact codebook sizes are counted with arbitrary-precision integers, either
by dynamic programming (:func:`count_exact`) or by brute force
(:func:`brute_count`), which only calls the predicates in
:mod:`composite_dna.verifier` and serves as the independent oracle.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.sparse as sps

from composite_dna.alphabet import GC_MASK, CompositeAlphabet, Seq
from composite_dna.verifier import (
    BalanceMode,
    as_fraction,
    balance_window,
    is_eps_balanced,
    is_rll,
)

DEFAULT_NODE_CAP = 10**6
DEFAULT_BRUTE_CAP = 10**8
DEFAULT_STATE_CAP = 10**6


class CapacityError(RuntimeError):
    pass


class ForbiddenRule(enum.Enum):
    """How a window is judged forbidden.

    COMMON_BASE: the window admits a constant realization (all symbols share a
    base). This is the correct rule for constraining every realization.

    PURE_ANCHORED: COMMON_BASE windows that also contain a pure base or repeat
    a single symbol. It omits windows built only from two or more different
    composite letters sharing a base, so it under-constrains; it is kept
    because it reproduces the reference capacity figures for alphabets whose
    composites overlap.
    """

    COMMON_BASE = "common-base"
    PURE_ANCHORED = "pure-anchored"


def window_forbidden(
    alphabet: CompositeAlphabet, w: Sequence[int], rule: ForbiddenRule = ForbiddenRule.COMMON_BASE
) -> bool:
    common = 0b1111
    for s in w:
        common &= alphabet.masks[s]
    if not common:
        return False
    if rule is ForbiddenRule.PURE_ANCHORED:
        return any(s < 4 for s in w) or len(set(w)) == 1
    return True


@dataclass(frozen=True)
class ForbiddenSet:
    l: int
    words: tuple[Seq, ...]
    rank: dict = field(repr=False, compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, w) -> bool:
        return tuple(w) in self.rank


def forbidden_set(
    l: int, alphabet: CompositeAlphabet, rule: ForbiddenRule = ForbiddenRule.COMMON_BASE
) -> ForbiddenSet:
    """All forbidden ``(l + 1)``-windows, sorted lexicographically by symbol index."""
    if l < 1:
        raise ValueError("l must be >= 1")
    words: set[Seq] = set()
    for b in range(4):
        carriers = [s for s in range(len(alphabet)) if alphabet.masks[s] >> b & 1]
        for w in itertools.product(carriers, repeat=l + 1):
            if rule is ForbiddenRule.COMMON_BASE or window_forbidden(alphabet, w, rule):
                words.add(w)
    ordered = tuple(sorted(words))
    return ForbiddenSet(l, ordered, {w: i for i, w in enumerate(ordered)})


@dataclass(frozen=True)
class ConstraintGraph:
    """De Bruijn-style graph on words of length ``l``; node id = base-q value."""

    l: int
    q: int
    adjacency: sps.csr_matrix = field(repr=False, compare=False)

    @property
    def n_nodes(self) -> int:
        return self.adjacency.shape[0]

    @property
    def n_edges(self) -> int:
        return int(self.adjacency.nnz)

    def node_word(self, node: int) -> Seq:
        digits = []
        for _ in range(self.l):
            node, d = divmod(node, self.q)
            digits.append(d)
        return tuple(reversed(digits))

    def node_id(self, word: Sequence[int]) -> int:
        v = 0
        for s in word:
            v = v * self.q + s
        return v


def build_graph(
    l: int,
    alphabet: CompositeAlphabet,
    rule: ForbiddenRule = ForbiddenRule.COMMON_BASE,
    node_cap: int = DEFAULT_NODE_CAP,
) -> ConstraintGraph:
    q = len(alphabet)
    n_nodes = q**l
    if n_nodes > node_cap:
        raise CapacityError(f"{n_nodes} nodes exceed the node cap of {node_cap}")
    masks = np.asarray(alphabet.masks, dtype=np.int64)
    nodes = np.arange(n_nodes, dtype=np.int64)
    digits = np.empty((n_nodes, l), dtype=np.int64)
    rest = nodes.copy()
    for i in range(l - 1, -1, -1):
        rest, digits[:, i] = np.divmod(rest, q)
    common = np.bitwise_and.reduce(masks[digits], axis=1)
    has_pure = (digits < 4).any(axis=1)
    constant = (digits == digits[:, :1]).all(axis=1)
    shifted = (nodes % q ** (l - 1)) * q
    rows, cols = [], []
    for s in range(q):
        bad = (common & masks[s]) != 0
        if rule is ForbiddenRule.PURE_ANCHORED:
            bad &= has_pure | (s < 4) | (constant & (digits[:, 0] == s))
        ok = np.nonzero(~bad)[0]
        rows.append(ok)
        cols.append(shifted[ok] + s)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    data = np.ones(len(rows), dtype=np.float64)
    adj = sps.csr_matrix((data, (rows, cols)), shape=(n_nodes, n_nodes))
    adj.sort_indices()
    return ConstraintGraph(l, q, adj)


@dataclass(frozen=True)
class CapacityResult:
    lam: float
    capacity_bits: float
    iterations: int
    residual: float


def dominant_eigenvalue(
    graph: ConstraintGraph | sps.spmatrix | np.ndarray,
    tol: float = 1e-9,
    max_iter: int = 100_000,
) -> CapacityResult:
    """Perron eigenvalue of a nonnegative matrix by power iteration.

    Starts from the all-ones vector, normalizes every step, and stops once
    successive Rayleigh quotients differ by less than ``tol``.
    """
    A = graph.adjacency if isinstance(graph, ConstraintGraph) else graph
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = A.shape[0]
    if n == 0:
        raise ValueError("empty graph")
    x = np.ones(n) / math.sqrt(n)
    prev = None
    for it in range(1, max_iter + 1):
        y = A @ x
        lam = float(x @ y)
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            return CapacityResult(0.0, 0.0, it, 0.0)
        if prev is not None and abs(lam - prev) < tol:
            residual = float(np.linalg.norm(y - lam * x))
            return CapacityResult(lam, math.log2(lam), it, residual)
        prev = lam
        x = y / norm
    residual = float(np.linalg.norm(A @ x - prev * x))
    raise CapacityError(
        f"power iteration did not converge in {max_iter} steps (residual {residual:.3g})"
    )


def rll_capacity(
    l: int,
    alphabet: CompositeAlphabet,
    tol: float = 1e-9,
    rule: ForbiddenRule = ForbiddenRule.COMMON_BASE,
    max_iter: int = 100_000,
) -> CapacityResult:
    return dominant_eigenvalue(build_graph(l, alphabet, rule), tol=tol, max_iter=max_iter)


def one_redundancy_bound(l: int, alphabet: CompositeAlphabet) -> int:
    """Largest n with ``(n - l) * |F| <= (q - 1) * q**l``.

    This is the longest codeword for which the single-symbol sequence
    replacement encoder has enough distinct markers.
    """
    q = len(alphabet)
    return (q - 1) * q**l // len(forbidden_set(l, alphabet)) + l


@dataclass(frozen=True)
class Constraint:
    """Run-length limit, GC balance, or both.

    Build with :meth:`rll`, :meth:`bal` or :meth:`both`.
    """

    l: int | None = None
    eps: Fraction | None = None
    mode: BalanceMode = BalanceMode.STRICT

    @classmethod
    def rll(cls, l: int) -> "Constraint":
        return cls(l=l)

    @classmethod
    def bal(cls, eps, mode: BalanceMode = BalanceMode.STRICT) -> "Constraint":
        return cls(eps=as_fraction(eps), mode=mode)

    @classmethod
    def both(cls, l: int, eps, mode: BalanceMode = BalanceMode.STRICT) -> "Constraint":
        return cls(l=l, eps=as_fraction(eps), mode=mode)

    def accepts(self, alphabet: CompositeAlphabet, x: Sequence[int]) -> bool:
        if self.l is not None and not is_rll(alphabet, x, self.l):
            return False
        if self.eps is not None and not is_eps_balanced(alphabet, x, self.eps, self.mode):
            return False
        return True


def count_exact(
    n: int,
    constraint: Constraint,
    alphabet: CompositeAlphabet,
    state_cap: int = DEFAULT_STATE_CAP,
) -> int:
    """Number of words in ``alphabet**n`` satisfying ``constraint`` for every realization.

    Dynamic programming over (per-base run lengths, min GC, max GC). The run
    state is equivalent to remembering the last ``l`` symbols but much smaller.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    l = constraint.l
    track_gc = constraint.eps is not None
    q = len(alphabet)
    masks = alphabet.masks
    gc_lo = [1 if masks[s] & GC_MASK == masks[s] else 0 for s in range(q)]
    gc_hi = [1 if masks[s] & GC_MASK else 0 for s in range(q)]

    states: dict[tuple, int] = {((0, 0, 0, 0), 0, 0): 1}
    for _ in range(n):
        nxt: dict[tuple, int] = {}
        for (runs, lo, hi), count in states.items():
            for s in range(q):
                m = masks[s]
                if l is not None:
                    new_runs = tuple(r + 1 if m >> b & 1 else 0 for b, r in enumerate(runs))
                    if max(new_runs) > l:
                        continue
                else:
                    new_runs = runs
                if track_gc:
                    key = (new_runs, lo + gc_lo[s], hi + gc_hi[s])
                else:
                    key = (new_runs, 0, 0)
                nxt[key] = nxt.get(key, 0) + count
        if len(nxt) > state_cap:
            raise CapacityError(f"{len(nxt)} DP states exceed the cap of {state_cap}")
        states = nxt

    if not track_gc:
        return sum(states.values())
    wlo, whi = balance_window(n, constraint.eps, constraint.mode)
    return sum(c for (_, lo, hi), c in states.items() if wlo <= lo and hi <= whi)


def count_paths(graph: ConstraintGraph, n: int) -> int:
    """Number of length-``n`` words (``n >= l``) generated by paths in ``graph``."""
    if n < graph.l:
        raise ValueError("n must be at least the node length")
    adj = graph.adjacency
    indptr, indices = adj.indptr, adj.indices
    counts = [1] * graph.n_nodes
    for _ in range(n - graph.l):
        nxt = [0] * graph.n_nodes
        for u, c in enumerate(counts):
            if c:
                for v in indices[indptr[u] : indptr[u + 1]]:
                    nxt[v] += c
        counts = nxt
    return sum(counts)


def brute_count(
    n: int,
    constraint: Constraint,
    alphabet: CompositeAlphabet,
    cap: int = DEFAULT_BRUTE_CAP,
    prefix: Sequence[int] = (),
) -> int:
    """Exhaustive count of accepted words of length ``n`` that start with ``prefix``.

    Summing over a partition of prefixes gives the full count, so callers may
    split the enumeration across workers.
    """
    q = len(alphabet)
    prefix = tuple(prefix)
    free = n - len(prefix)
    if free < 0:
        raise ValueError("prefix longer than n")
    if q**free > cap:
        raise CapacityError(f"{q}**{free} words exceed the brute-force cap of {cap}")
    return sum(
        1
        for tail in itertools.product(range(q), repeat=free)
        if constraint.accepts(alphabet, prefix + tail)
    )
