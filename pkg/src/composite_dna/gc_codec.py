"""GC-balanced codecs for composite alphabets based on prefix flipping.

Every symbol is either *flippable* (pure bases, and composites that the
alphabet pairs with another composite) or *fixed* (unpaired composites,
which prefix flipping leaves alone). The balance statistic of a word is
the number of flippable positions holding a GC-class symbol. Flipping one
more position moves it by exactly one, and flipping everything reflects it
about half the flippable count, so some prefix length hits that midpoint.
The chosen prefix length is stored in a suffix ``u || complement(u)`` that
is itself exactly half GC.

Two code families live here:

* :func:`gc_encode_composite` for alphabets whose composites are all fixed
  (``M`` any mixture, or ``M`` and ``N`` any mixtures). The rarest symbols of
  the data are swapped with the composites first, which caps the composite
  count and hence the GC slack a composite can contribute.
* :func:`gc_encode_atgc` for the alphabet with ``M = A|T`` and ``N = C|G``
  paired under flipping. Every realization then has the same GC count, so
  exact balance is reachable for any ``eps >= 0``.

Frame layout: ``[body][pad 0-1][disclosed symbols][u || complement(u)]``,
where everything before the suffix is flipped together. Only the
fixed-composite family uses the pad and disclosed symbols. With an odd
flippable count the sparse grid spacing drops to ``2s - 1`` (or the full
grid accepts a distance of 1/2) instead of padding.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from composite_dna.alphabet import (
    SIGMA1_AC,
    SIGMA2_ATGC,
    CompositeAlphabet,
    Seq,
    complement,
    dna_representation,
    dna_value,
    flip_prefix,
    interleave,
    log4_ceil,
)
from composite_dna.rll_codec import CodecError
from composite_dna.verifier import as_fraction

PAD = 0  # A


class GridMode(enum.Enum):
    FULL = "full"
    LSET = "lset"


@dataclass(frozen=True)
class BalanceTarget:
    """Balance goal for a working word of length ``m``.

    ``wt_fixed`` counts flip-invariant symbols; the statistic must land within
    ``slack`` of ``(m - wt_fixed) / 2``. With an odd flippable count the
    target is a half-integer and a slack of at least 1/2 is required.
    """

    m: int
    wt_fixed: int
    slack: Fraction | int = 0

    @property
    def target(self) -> Fraction:
        return Fraction(self.m - self.wt_fixed, 2)


def full_grid(m: int) -> range:
    return range(m + 1)


def lset_grid(slack: int, m: int, odd: bool = False) -> tuple[int, ...]:
    """Flip indices ``0, 2s, 4s, ...`` below ``m``, closed off with ``m`` itself.

    Consecutive points are at most ``2s`` apart, so a balancing index exists
    within ``s`` of some point. For an ``odd`` flippable count the exact
    balance point only gets within 1/2 of the target, so the spacing shrinks
    to ``2s - 1``.
    """
    if slack < 1:
        raise ValueError("sparse grid needs slack >= 1")
    return tuple(range(0, m, 2 * slack - odd)) + (m,)


def lset_size_bound(slack: int, n: int) -> int:
    """Upper bound on ``len(lset_grid(slack, m, odd))`` for every ``m <= n``."""
    return -(-n // max(1, 2 * slack - 1)) + 1


def _flip_classes(alphabet: CompositeAlphabet) -> list[int | None]:
    """GC class per symbol for flippable symbols, ``None`` for fixed ones."""
    classes: list[int | None] = []
    for s in range(len(alphabet)):
        if alphabet.is_flip_fixed(s):
            classes.append(None)
            continue
        c, fc = alphabet.gc_class(s), alphabet.gc_class(alphabet.flip[s])
        if c is None or fc is None or c == fc:
            raise ValueError(
                f"flip pair {alphabet.names[s]}~{alphabet.names[alphabet.flip[s]]} "
                "does not toggle a definite GC class"
            )
        classes.append(c)
    return classes


def balance_statistic(alphabet: CompositeAlphabet, z: Sequence[int]) -> int:
    classes = _flip_classes(alphabet)
    return sum(classes[s] for s in z if classes[s] is not None)


def knuth_index_search(
    alphabet: CompositeAlphabet,
    z: Sequence[int],
    grid: Sequence[int],
    target: BalanceTarget,
) -> int:
    """Smallest grid index ``t`` such that flipping the first ``t`` symbols balances ``z``."""
    if target.m != len(z):
        raise ValueError("target length does not match the word")
    if (target.m - target.wt_fixed) % 2 and target.slack < Fraction(1, 2):
        raise ValueError("odd flippable count cannot be balanced exactly")
    classes = _flip_classes(alphabet)
    flip = alphabet.flip
    goal = target.target
    stat = sum(classes[s] for s in z if classes[s] is not None)
    pos = 0
    for t in sorted(grid):
        if t > len(z):
            raise ValueError(f"grid point {t} beyond word length {len(z)}")
        while pos < t:
            s = z[pos]
            if classes[s] is not None:
                stat += classes[flip[s]] - classes[s]
            pos += 1
        if abs(stat - goal) <= target.slack:
            return t
    raise AssertionError("no balancing index on the grid; the grid does not cover the word")


# --- composite alphabets with fixed composites ----------------------------


def _composite_swap(alphabet: CompositeAlphabet, chosen: Sequence[int]) -> list[int]:
    """Involution exchanging the ``chosen`` symbols with the composite letters."""
    composites = list(range(4, len(alphabet)))
    perm = list(range(len(alphabet)))
    incoming = [a for a in chosen if a not in composites]
    outgoing = [c for c in composites if c not in chosen]
    for a, c in zip(incoming, outgoing):
        perm[a], perm[c] = c, a
    return perm


def _rarest(x: Sequence[int], q: int, count: int) -> list[int]:
    weights = [0] * q
    for s in x:
        weights[s] += 1
    return sorted(range(q), key=lambda s: (weights[s], s))[:count]


@dataclass(frozen=True)
class CompositeGcParams:
    """Layout of a fixed-composite GC codec with codeword length ``n``."""

    alphabet: CompositeAlphabet
    n: int
    eps: Fraction
    grid: GridMode = GridMode.FULL

    def __post_init__(self) -> None:
        a = self.alphabet
        object.__setattr__(self, "eps", as_fraction(self.eps))
        if a.k < 1 or any(not a.is_flip_fixed(s) for s in range(4, len(a))):
            raise ValueError("alphabet must have only unpaired composite letters")
        floor_eps = Fraction(a.k, 2 * len(a))
        if self.eps < floor_eps:
            raise ValueError(f"eps must be at least {floor_eps} for this alphabet size")
        if self.payload_length < 1:
            raise ValueError(f"n={self.n} leaves no room for data")
        # The rarest k symbols appear at most floor(k * len / q) times, plus
        # up to k composites among the disclosed symbols.
        if Fraction(self.max_fixed, 2) + self.slack > self.eps * self.n:
            raise ValueError(f"n={self.n} is too small for eps={self.eps}")

    @property
    def slack(self) -> int:
        if self.grid is GridMode.FULL:
            return 0
        a = self.alphabet
        s = math.floor((self.eps - Fraction(a.k, 2 * len(a))) * self.n)
        if s < 1:
            raise ValueError("sparse grid needs (eps - k/(2q)) * n >= 1")
        return s

    @property
    def half_suffix(self) -> int:
        if self.grid is GridMode.FULL:
            return log4_ceil(self.n)
        return log4_ceil(lset_size_bound(self.slack, self.n))

    @property
    def payload_length(self) -> int:
        return self.n - 2 * self.half_suffix - self.alphabet.k

    @property
    def max_fixed(self) -> int:
        a = self.alphabet
        return a.k * self.payload_length // len(a) + a.k


def _grid_for(mode: GridMode, slack: int, m: int, odd: bool) -> Sequence[int]:
    return full_grid(m) if mode is GridMode.FULL else lset_grid(slack, m, odd)


def _suffix(alphabet: CompositeAlphabet, code: int, width: int) -> Seq:
    u = dna_representation(code, width)
    return interleave(u, complement(alphabet, u))


def _read_suffix(alphabet: CompositeAlphabet, c: Sequence[int], width: int) -> int:
    suffix = tuple(c[len(c) - 2 * width :])
    u, v = suffix[0::2], suffix[1::2]
    if any(s >= 4 for s in u) or complement(alphabet, u) != v:
        raise CodecError("index suffix is not a word followed by its complement")
    return dna_value(u)


def _balance_and_frame(
    alphabet: CompositeAlphabet, z: Sequence[int], mode: GridMode, slack: int, width: int
) -> tuple[Seq, int]:
    wt_fixed = sum(1 for s in z if alphabet.is_flip_fixed(s))
    odd = bool((len(z) - wt_fixed) % 2)
    grid = _grid_for(mode, slack, len(z), odd)
    if odd and mode is GridMode.FULL:
        slack = Fraction(1, 2)
    t = knuth_index_search(alphabet, z, grid, BalanceTarget(len(z), wt_fixed, slack))
    code = t if mode is GridMode.FULL else grid.index(t)
    return flip_prefix(alphabet, z, t) + _suffix(alphabet, code, width), t


def _unframe(
    alphabet: CompositeAlphabet, c: Sequence[int], mode: GridMode, slack: int, width: int
) -> Seq:
    code = _read_suffix(alphabet, c, width)
    body = tuple(c[: len(c) - 2 * width])
    # flipping preserves the number of fixed symbols, so parity is readable here
    odd = bool(sum(1 for s in body if not alphabet.is_flip_fixed(s)) % 2)
    if mode is GridMode.FULL:
        t = code
        if t > len(body):
            raise CodecError(f"flip index {t} beyond body length {len(body)}")
    else:
        grid = lset_grid(slack, len(body), odd)
        if code >= len(grid):
            raise CodecError(f"flip rank {code} outside a grid of {len(grid)} points")
        t = grid[code]
    return flip_prefix(alphabet, body, t)


def gc_encode_composite(x: Sequence[int], params: CompositeGcParams) -> Seq:
    """Encode ``x`` so every realization is ``eps``-balanced.

    Output length is ``n``, or ``n + 1`` when a parity pad was needed.
    """
    a = params.alphabet
    if len(x) != params.payload_length:
        raise ValueError(f"data word must have length {params.payload_length}, got {len(x)}")
    a.validate(x)
    chosen = _rarest(x, len(a), a.k)
    perm = _composite_swap(a, chosen)
    z = [perm[s] for s in x]
    wt_fixed = sum(1 for s in z + chosen if s >= 4)
    if (len(z) + a.k - wt_fixed) % 2:
        z.append(PAD)
    z += chosen
    return _balance_and_frame(a, z, params.grid, params.slack, params.half_suffix)[0]


def gc_decode_composite(c: Sequence[int], params: CompositeGcParams) -> Seq:
    a = params.alphabet
    if len(c) not in (params.n, params.n + 1):
        raise CodecError(f"codeword length {len(c)} is neither {params.n} nor {params.n + 1}")
    a.validate(c)
    z = list(_unframe(a, c, params.grid, params.slack, params.half_suffix))
    chosen = z[-a.k :]
    del z[-a.k :]
    if len(set(chosen)) != a.k:
        raise CodecError("disclosed symbols are not distinct")
    if len(c) == params.n + 1:
        if z[-1] != PAD:
            raise CodecError("parity pad missing")
        z.pop()
    perm = _composite_swap(a, chosen)
    return tuple(perm[s] for s in z)


def gc_encode_sigma1(
    x: Sequence[int], n: int, eps=Fraction(1, 10), alphabet: CompositeAlphabet = SIGMA1_AC,
    grid: GridMode = GridMode.FULL,
) -> Seq:
    if alphabet.k != 1:
        raise ValueError("expected a five-symbol alphabet")
    if n < 16:
        raise ValueError("n must be at least 16")
    return gc_encode_composite(x, CompositeGcParams(alphabet, n, eps, grid))


def gc_decode_sigma1(
    c: Sequence[int], n: int, eps=Fraction(1, 10), alphabet: CompositeAlphabet = SIGMA1_AC,
    grid: GridMode = GridMode.FULL,
) -> Seq:
    return gc_decode_composite(c, CompositeGcParams(alphabet, n, eps, grid))


def gc_encode_sigma2(
    x: Sequence[int], n: int, eps, alphabet: CompositeAlphabet, grid: GridMode = GridMode.FULL
) -> Seq:
    if alphabet.k != 2:
        raise ValueError("expected a six-symbol alphabet")
    return gc_encode_composite(x, CompositeGcParams(alphabet, n, eps, grid))


def gc_decode_sigma2(
    c: Sequence[int], n: int, eps, alphabet: CompositeAlphabet, grid: GridMode = GridMode.FULL
) -> Seq:
    return gc_decode_composite(c, CompositeGcParams(alphabet, n, eps, grid))


# --- M = A|T, N = C|G ------------------------------------------------------


def check_atgc(alphabet: CompositeAlphabet) -> None:
    if (
        len(alphabet) != 6
        or alphabet.masks[4:] != (0b0011, 0b1100)
        or alphabet.flip[4:] != (5, 4)
    ):
        raise ValueError("alphabet must be M=AT~N=CG (composites paired under flipping)")


@dataclass(frozen=True)
class AtgcParams:
    n: int
    eps: Fraction = Fraction(0)
    grid: GridMode = GridMode.FULL
    alphabet: CompositeAlphabet = SIGMA2_ATGC

    def __post_init__(self) -> None:
        check_atgc(self.alphabet)
        object.__setattr__(self, "eps", as_fraction(self.eps))
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")
        if self.grid is GridMode.LSET and math.floor(self.eps * self.n) < 1:
            raise ValueError("sparse grid needs eps * n >= 1")
        if self.n % 2 and self.eps * self.n < Fraction(1, 2):
            raise ValueError("an odd n needs eps * n >= 1/2; exact balance needs an even n")
        if self.payload_length < 1:
            raise ValueError(f"n={self.n} leaves no room for data")

    @property
    def slack(self) -> int:
        return 0 if self.grid is GridMode.FULL else math.floor(self.eps * self.n)

    @property
    def half_suffix(self) -> int:
        if self.grid is GridMode.FULL:
            return log4_ceil(self.n)
        return log4_ceil(lset_size_bound(self.slack, self.n))

    @property
    def payload_length(self) -> int:
        return self.n - 2 * self.half_suffix


def gc_encode_atgc(x: Sequence[int], params: AtgcParams) -> Seq:
    a = params.alphabet
    if len(x) != params.payload_length:
        raise ValueError(f"data word must have length {params.payload_length}, got {len(x)}")
    a.validate(x)
    return _balance_and_frame(a, tuple(x), params.grid, params.slack, params.half_suffix)[0]


def gc_decode_atgc(c: Sequence[int], params: AtgcParams) -> Seq:
    a = params.alphabet
    if len(c) != params.n:
        raise CodecError(f"codeword must have length {params.n}, got {len(c)}")
    a.validate(c)
    return _unframe(a, c, params.grid, params.slack, params.half_suffix)


def phi_projection(alphabet: CompositeAlphabet, x: Sequence[int]) -> tuple[int, ...]:
    """GC-class bit per symbol: 0 for A, T, M(A|T); 1 for C, G, N(C|G).

    Its weight equals the GC count of every realization of ``x``, so balancing
    this binary word balances all realizations at once.
    """
    classes = [alphabet.gc_class(s) for s in range(len(alphabet))]
    if any(c is None for c in classes):
        raise ValueError("every symbol must realize only A/T or only C/G")
    return tuple(classes[s] for s in x)
