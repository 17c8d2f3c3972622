"""Constraint checks that hold for every synthesis realization of a word.

A composite word stands for the set of pure words obtained by independently
choosing one base per position from each symbol's realization set. The
checks here decide run-length and GC-balance properties for that whole set
without enumerating it; :func:`realizations` enumerates it explicitly and is
used as an independent cross-check in the tests.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from composite_dna.alphabet import GC_MASK, CompositeAlphabet, Seq

DEFAULT_REALIZATION_CAP = 2**20


class RealizationLimitError(RuntimeError):
    pass


class BalanceMode(enum.Enum):
    STRICT = "strict"
    LENIENT = "lenient"


@dataclass(frozen=True)
class GcBounds:
    min_gc: int
    max_gc: int


@dataclass(frozen=True)
class RunViolation:
    """A length-(l+1) window whose symbols share a realizable base."""

    start: int
    window: Seq
    bases: int  # mask of the shared bases


def as_fraction(value: Fraction | int | float | str) -> Fraction:
    """Convert eps-like input to an exact rational (``0.1`` -> ``1/10``)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def realizations(
    alphabet: CompositeAlphabet, x: Sequence[int], cap: int = DEFAULT_REALIZATION_CAP
) -> list[Seq]:
    """All pure words obtainable from ``x``, in lexicographic order."""
    choices = []
    total = 1
    for s in x:
        m = alphabet.masks[s]
        opts = tuple(i for i in range(4) if m >> i & 1)
        choices.append(opts)
        total *= len(opts)
    if total > cap:
        raise RealizationLimitError(f"{total} realizations exceed the cap of {cap}")
    return [tuple(w) for w in itertools.product(*choices)]


def first_run_violation(
    alphabet: CompositeAlphabet, x: Sequence[int], l: int, start: int = 0
) -> RunViolation | None:
    """Leftmost window of ``l + 1`` symbols (starting at or after ``start``) with a common base."""
    if l < 1:
        raise ValueError("l must be >= 1")
    masks = alphabet.masks
    runs = [0, 0, 0, 0]
    for j in range(start, len(x)):
        m = masks[x[j]]
        hit = 0
        for b in range(4):
            if m >> b & 1:
                runs[b] += 1
                if runs[b] > l:
                    hit |= 1 << b
            else:
                runs[b] = 0
        if hit:
            s = j - l
            return RunViolation(s, tuple(x[s : j + 1]), hit)
    return None


def is_rll(alphabet: CompositeAlphabet, x: Sequence[int], l: int) -> bool:
    """True iff every realization of ``x`` has all runs of length <= ``l``."""
    return first_run_violation(alphabet, x, l) is None


def gc_bounds(alphabet: CompositeAlphabet, x: Sequence[int]) -> GcBounds:
    lo = hi = 0
    masks = alphabet.masks
    for s in x:
        m = masks[s]
        if m & GC_MASK:
            hi += 1
            if m & GC_MASK == m:
                lo += 1
    return GcBounds(lo, hi)


def balance_window(n: int, eps, mode: BalanceMode = BalanceMode.STRICT) -> tuple[Fraction, Fraction]:
    """Accepted GC-count interval for words of length ``n``."""
    eps = as_fraction(eps)
    lo = Fraction(n, 2) - eps * n
    hi = Fraction(n, 2) + eps * n
    if mode is BalanceMode.LENIENT:
        return Fraction(math.floor(lo)), Fraction(math.ceil(hi))
    return lo, hi


def is_eps_balanced(
    alphabet: CompositeAlphabet,
    x: Sequence[int],
    eps,
    mode: BalanceMode = BalanceMode.STRICT,
) -> bool:
    """True iff the GC count of every realization lies in the ``eps`` window."""
    b = gc_bounds(alphabet, x)
    lo, hi = balance_window(len(x), eps, mode)
    return lo <= b.min_gc and b.max_gc <= hi
