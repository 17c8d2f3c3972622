"""Single-redundancy run-length-limited codec by sequence replacement.

Encoding appends a sentinel ``A`` to the data word, then repeatedly cuts the
leftmost forbidden window out of the current word and appends a marker
``R + alpha`` (``alpha != A``) that records the window and where it was. The
word length never changes, so a codeword is one symbol longer than the data
word. Decoding replays the markers right to left until the sentinel shows up.

The marker index is ``(p - 1) * |F| + rank(f)`` where ``p`` is the 1-based
position of the removed window ``f`` in the current word and ``rank`` is its
position in the sorted forbidden set. ``alpha`` carries the high digit and
``R`` the low ``l`` base-``q`` digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from composite_dna.alphabet import CompositeAlphabet, Seq, dna_representation, dna_value
from composite_dna.capacity import ForbiddenSet, forbidden_set, one_redundancy_bound
from composite_dna.verifier import first_run_violation, is_rll

SENTINEL = 0  # the pure base A


class CodecError(ValueError):
    """Input is not a codeword of the codec it was handed to."""


@dataclass(frozen=True)
class ReplacementMarker:
    R: Seq
    alpha: int


@dataclass(frozen=True)
class RllParams:
    """Codec parameters: run limit ``l`` and codeword length ``n``."""

    alphabet: CompositeAlphabet
    l: int
    n: int

    def __post_init__(self) -> None:
        if self.l < 1:
            raise ValueError("l must be >= 1")
        if self.n < self.l + 2:
            raise ValueError(f"n={self.n} is below the minimum l + 2 = {self.l + 2}")
        bound = one_redundancy_bound(self.l, self.alphabet)
        if self.n > bound:
            raise ValueError(f"n={self.n} exceeds the single-redundancy bound {bound} for l={self.l}")

    @cached_property
    def forbidden(self) -> ForbiddenSet:
        return forbidden_set(self.l, self.alphabet)

    @property
    def q(self) -> int:
        return len(self.alphabet)

    @property
    def marker_count(self) -> int:
        return (self.q - 1) * self.q**self.l


def marker_encode(p: int, f: Sequence[int], params: RllParams) -> ReplacementMarker:
    if not 1 <= p <= params.n - params.l:
        raise ValueError(f"position {p} outside [1, {params.n - params.l}]")
    try:
        rank = params.forbidden.rank[tuple(f)]
    except KeyError:
        raise ValueError(f"{tuple(f)} is not a forbidden window") from None
    index = (p - 1) * len(params.forbidden) + rank
    if index >= params.marker_count:
        raise ValueError("marker index out of range; n exceeds the single-redundancy bound")
    q, l = params.q, params.l
    high, low = divmod(index, q**l)
    R = [0] * l
    for i in range(l - 1, -1, -1):
        low, R[i] = divmod(low, q)
    return ReplacementMarker(tuple(R), high + 1)  # skip A at index 0


def marker_decode(marker: ReplacementMarker, params: RllParams) -> tuple[int, Seq]:
    """Inverse of :func:`marker_encode`: returns ``(p, f)``."""
    q = params.q
    if not 1 <= marker.alpha < q or len(marker.R) != params.l:
        raise CodecError("malformed marker")
    low = 0
    for s in marker.R:
        low = low * q + s
    index = (marker.alpha - 1) * q**params.l + low
    p0, rank = divmod(index, len(params.forbidden))
    if p0 >= params.n - params.l:
        raise CodecError(f"marker points at position {p0 + 1} beyond {params.n - params.l}")
    return p0 + 1, params.forbidden.words[rank]


def _replace(y: list[int], params: RllParams) -> int:
    """Run the replacement loop in place; returns the number of iterations."""
    alphabet, l = params.alphabet, params.l
    iterations = 0
    start = 0
    while True:
        hit = first_run_violation(alphabet, y, l, start)
        if hit is None:
            return iterations
        marker = marker_encode(hit.start + 1, hit.window, params)
        del y[hit.start : hit.start + l + 1]
        y.extend(marker.R)
        y.append(marker.alpha)
        iterations += 1
        # the prefix before the removed window is still clean
        start = max(0, hit.start - l)


def rll_encode_counted(x: Sequence[int], params: RllParams) -> tuple[Seq, int]:
    """Encode and also report how many replacements were needed."""
    if len(x) != params.n - 1:
        raise ValueError(f"data word must have length {params.n - 1}, got {len(x)}")
    params.alphabet.validate(x)
    y = list(x)
    y.append(SENTINEL)
    iterations = _replace(y, params)
    return tuple(y), iterations


def rll_encode(x: Sequence[int], params: RllParams) -> Seq:
    return rll_encode_counted(x, params)[0]


def rll_decode(c: Sequence[int], params: RllParams, max_steps: int = 100_000) -> Seq:
    if len(c) != params.n:
        raise CodecError(f"codeword must have length {params.n}, got {len(c)}")
    params.alphabet.validate(c)
    l = params.l
    y = list(c)
    for _ in range(max_steps):
        if y[-1] == SENTINEL:
            return tuple(y[:-1])
        marker = ReplacementMarker(tuple(y[-l - 1 : -1]), y[-1])
        p, f = marker_decode(marker, params)
        del y[-l - 1 :]
        y[p - 1 : p - 1] = f
    raise CodecError(f"no sentinel reached after {max_steps} marker replays")


# --- concatenation of short codewords -------------------------------------

SEPARATORS: tuple[tuple[int, int], ...] = tuple(
    (a, b) for a in range(4) for b in range(4) if a != b
)


class SeparatorError(CodecError):
    pass


def choose_separator(
    alphabet: CompositeAlphabet, left: Sequence[int], right: Sequence[int], l: int
) -> tuple[int, int]:
    """First ordered pair of distinct pure bases that joins ``left`` and ``right`` cleanly."""
    left = tuple(left[-l:])
    right = tuple(right[:l])
    for sep in SEPARATORS:
        if is_rll(alphabet, left + sep + right, l):
            return sep
    raise SeparatorError(
        f"no pure separator joins {alphabet.text(left)!r} and {alphabet.text(right)!r}"
    )


def join_blocks(alphabet: CompositeAlphabet, blocks: Sequence[Seq], l: int) -> Seq:
    out: list[int] = list(blocks[0]) if blocks else []
    for block in blocks[1:]:
        out.extend(choose_separator(alphabet, out, block, l))
        out.extend(block)
    return tuple(out)


def split_blocks(c: Sequence[int], sizes: Sequence[int]) -> list[Seq]:
    if len(c) != sum(sizes) + 2 * (len(sizes) - 1):
        raise CodecError("concatenated word has the wrong length")
    blocks = []
    pos = 0
    for i, size in enumerate(sizes):
        if i:
            pos += 2
        blocks.append(tuple(c[pos : pos + size]))
        pos += size
    return blocks


def rll_encode_long(x: Sequence[int], params: RllParams) -> Seq:
    """Encode an arbitrary-length word as separator-joined codewords of length ``params.n``.

    A word of exactly ``n - 1`` symbols is encoded as a single codeword.
    Otherwise the stream is a length header (the DNA representation of
    ``len(x)`` over ``n - 1`` digits, itself encoded) followed by the data in
    blocks of ``n - 1`` symbols, the last one padded with ``A``.
    """
    n = params.n
    width = n - 1
    x = tuple(x)
    if len(x) == width:
        return rll_encode(x, params)
    if len(x) >= 4**width:
        raise ValueError(f"word of length {len(x)} does not fit a {width}-digit length header")
    chunks = [dna_representation(len(x), width)]
    for i in range(0, len(x), width):
        chunk = x[i : i + width]
        chunks.append(chunk + (SENTINEL,) * (width - len(chunk)))
    if not x:
        chunks.append((SENTINEL,) * width)
    blocks = [rll_encode(chunk, params) for chunk in chunks]
    return join_blocks(params.alphabet, blocks, params.l)


def rll_decode_long(c: Sequence[int], params: RllParams) -> Seq:
    n = params.n
    if len(c) == n:
        return rll_decode(c, params)
    if len(c) < 2 * n + 2 or (len(c) + 2) % (n + 2):
        raise CodecError(f"stream length {len(c)} is not a whole number of blocks")
    count = (len(c) + 2) // (n + 2)
    blocks = [rll_decode(b, params) for b in split_blocks(c, [n] * count)]
    length = dna_value(blocks[0])
    payload = tuple(s for b in blocks[1:] for s in b)
    if length > len(payload) or len(payload) - length >= n - 1 + (length == 0):
        raise CodecError("length header inconsistent with payload")
    return payload[:length]
