"""Joint run-length and GC-content codec over the alphabet M=A|T, N=C|G.

Pipeline: run-length encode the data, flip a prefix (index from the sparse
grid) to balance GC content, then insert two pure, exactly half-GC buffers,
four symbols at the flip boundary and two before the index suffix:

    flip(y[:t]) + g1 + y[t:] + g2 + (u || complement(u))

Flipping this alphabet permutes bases (A<->C, T<->G), so it maps
run-length-clean words to clean words; only the junctions need repair and
the buffers do that. Because each buffer is exactly half GC, the balance
target of ``y`` does not depend on which buffers are chosen.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from composite_dna.alphabet import SIGMA2_ATGC, CompositeAlphabet, Seq, flip_prefix, log4_ceil
from composite_dna.capacity import one_redundancy_bound
from composite_dna.gc_codec import (
    BalanceTarget,
    _read_suffix,
    _suffix,
    check_atgc,
    knuth_index_search,
    lset_grid,
    lset_size_bound,
)
from composite_dna.rll_codec import (
    CodecError,
    RllParams,
    join_blocks,
    rll_decode,
    rll_encode,
    split_blocks,
)
from composite_dna.verifier import (
    BalanceMode,
    as_fraction,
    first_run_violation,
    gc_bounds,
    is_eps_balanced,
    is_rll,
)

BUFFER_WIDTHS = (4, 2)


class BufferError(CodecError):
    pass


class ConstructionError(RuntimeError):
    """An encoder produced a word that fails its own constraints."""


def _buffer_candidates(width: int) -> list[Seq]:
    return [
        w for w in itertools.product(range(4), repeat=width)
        if sum(1 for s in w if s >= 2) * 2 == width
    ]


_CANDIDATES = {w: _buffer_candidates(w) for w in BUFFER_WIDTHS}


def select_buffer(
    alphabet: CompositeAlphabet,
    left: Sequence[int],
    right: Sequence[int],
    width: int,
    l: int,
) -> Seq:
    """First half-GC pure word (lexicographic) that joins ``left`` and ``right`` cleanly."""
    if width not in _CANDIDATES:
        raise ValueError(f"buffer width must be one of {BUFFER_WIDTHS}")
    left = tuple(left[len(left) - l :]) if len(left) > l else tuple(left)
    right = tuple(right[:l])
    for cand in _CANDIDATES[width]:
        if is_rll(alphabet, left + cand + right, l):
            return cand
    raise BufferError(
        f"no width-{width} buffer joins {alphabet.text(left)!r} and {alphabet.text(right)!r}"
    )


def _split_sizes(m: int, bound: int, l: int) -> list[int]:
    """Block lengths for a run-length stage of total length ``m`` (2-symbol separators)."""
    if m <= bound:
        return [m]
    count = -(-(m + 2) // (bound + 2))
    content = m - 2 * (count - 1)
    base, extra = divmod(content, count)
    sizes = [base + 1] * extra + [base] * (count - extra)
    if min(sizes) < l + 2:
        raise ValueError(f"run-length stage of length {m} cannot be split into valid blocks")
    return sizes


@dataclass(frozen=True)
class CombinedParams:
    n: int
    l: int
    eps: Fraction
    alphabet: CompositeAlphabet = SIGMA2_ATGC

    def __post_init__(self) -> None:
        check_atgc(self.alphabet)
        object.__setattr__(self, "eps", as_fraction(self.eps))
        if self.l < 2:
            raise ValueError("l must be >= 2 (the index suffix may contain runs of two)")
        if self.slack < 1:
            raise ValueError("need floor(eps * n) >= 1")
        if self.payload_length < 1:
            raise ValueError(f"n={self.n} leaves no room for data")

    @property
    def slack(self) -> int:
        return math.floor(self.eps * self.n)

    @property
    def r_eps(self) -> int:
        return 2 * log4_ceil(lset_size_bound(self.slack, self.n))

    @property
    def rll_length(self) -> int:
        return self.n - self.r_eps - sum(BUFFER_WIDTHS)

    @cached_property
    def block_sizes(self) -> tuple[int, ...]:
        bound = one_redundancy_bound(self.l, self.alphabet)
        return tuple(_split_sizes(self.rll_length, bound, self.l))

    @cached_property
    def block_params(self) -> tuple[RllParams, ...]:
        return tuple(RllParams(self.alphabet, self.l, size) for size in self.block_sizes)

    @property
    def payload_length(self) -> int:
        return sum(size - 1 for size in self.block_sizes)

    @property
    def r_l(self) -> int:
        return self.rll_length - self.payload_length

    @property
    def redundancy(self) -> int:
        return self.n - self.payload_length

    @property
    def rate(self) -> float:
        """Information rate in bits per symbol."""
        return self.payload_length * math.log2(len(self.alphabet)) / self.n

    def grid(self) -> tuple[int, ...]:
        m = self.rll_length
        return lset_grid(self.slack, m, odd=bool(m % 2))


def combined_encode(x: Sequence[int], params: CombinedParams) -> Seq:
    a, l = params.alphabet, params.l
    if len(x) != params.payload_length:
        raise ValueError(f"data word must have length {params.payload_length}, got {len(x)}")
    a.validate(x)
    blocks = []
    pos = 0
    for bp in params.block_params:
        blocks.append(rll_encode(x[pos : pos + bp.n - 1], bp))
        pos += bp.n - 1
    y = join_blocks(a, blocks, l)
    grid = params.grid()
    t = knuth_index_search(a, y, grid, BalanceTarget(len(y), 0, params.slack))
    c = assemble(y, t, params)

    hit = first_run_violation(a, c, l)
    if hit is not None:
        raise ConstructionError(f"run violation at {hit.start}: {a.text(hit.window)}")
    if not is_eps_balanced(a, c, params.eps, BalanceMode.LENIENT):
        raise ConstructionError(f"GC bounds {gc_bounds(a, c)} outside the eps window")
    return c


def assemble(y: Sequence[int], t: int, params: CombinedParams) -> Seq:
    """Frame a run-length stage word ``y`` around flip index ``t`` (a grid point)."""
    a, l = params.alphabet, params.l
    suffix = _suffix(a, params.grid().index(t), params.r_eps // 2)
    z1 = flip_prefix(a, y[:t], t)
    z2 = y[t:]
    g1 = select_buffer(a, z1, z2, 4, l)
    mid = z1 + g1 + z2
    g2 = select_buffer(a, mid, suffix, 2, l)
    return mid + g2 + suffix


def combined_decode(c: Sequence[int], params: CombinedParams) -> Seq:
    a = params.alphabet
    if len(c) != params.n:
        raise CodecError(f"codeword must have length {params.n}, got {len(c)}")
    a.validate(c)
    grid = params.grid()
    rank = _read_suffix(a, c, params.r_eps // 2)
    if rank >= len(grid):
        raise CodecError(f"flip rank {rank} outside a grid of {len(grid)} points")
    t = grid[rank]
    body = tuple(c[: params.n - params.r_eps - 2])
    if any(s >= 4 for s in body[t : t + 4]) or any(s >= 4 for s in c[len(body) : len(body) + 2]):
        raise CodecError("buffer positions hold composite symbols")
    y = flip_prefix(a, body[:t], t) + body[t + 4 :]
    out: list[int] = []
    for block, bp in zip(split_blocks(y, params.block_sizes), params.block_params):
        out.extend(rll_decode(block, bp))
    return tuple(out)
