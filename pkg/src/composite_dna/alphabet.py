"""Composite alphabets, words over them, and small symbol-level helpers.

A composite alphabet always starts with the four pure bases in the order
A, T, C, G (indices 0..3) followed by composite letters. A composite letter
is modelled only by the set of bases it may realize during synthesis; the
mixing ratio is irrelevant to every constraint handled in this package.

Words are plain tuples of symbol indices. Because the pure bases occupy
indices 0..3 in the order A, T, C, G, the index of a pure base is also its
base-4 digit value (A=0, T=1, C=2, G=3).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

BASES = "ATCG"
GC_MASK = 0b1100  # bit i set <=> base BASES[i] realizable; C and G are bits 2, 3
AT_MASK = 0b0011
PURE_FLIP = (2, 3, 0, 1)  # A<->C, T<->G

Seq = tuple[int, ...]


class AlphabetError(ValueError):
    """Raised for malformed alphabet specs or symbols outside an alphabet."""


def base_mask(bases: Iterable[str]) -> int:
    mask = 0
    for b in bases:
        mask |= 1 << BASES.index(b)
    return mask


@dataclass(frozen=True)
class CompositeAlphabet:
    """Ordered symbol table: four pure bases followed by composite letters.

    Attributes:
        names: one printable character per symbol.
        masks: 4-bit realization set per symbol (bit i <=> base ``BASES[i]``).
        flip: involution on symbol indices used by prefix flipping.
    """

    names: tuple[str, ...]
    masks: tuple[int, ...]
    flip: tuple[int, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.names[:4] != tuple(BASES) or self.masks[:4] != (1, 2, 4, 8):
            raise AlphabetError("pure bases must lead the alphabet in order A,T,C,G")
        if len(set(self.names)) != len(self.names):
            raise AlphabetError("duplicate symbol name")
        if len(self.masks) != len(self.names) or len(self.flip) != len(self.names):
            raise AlphabetError("names, masks and flip must have equal length")
        for i, j in enumerate(self.flip):
            if self.flip[j] != i:
                raise AlphabetError("flip pairing is not an involution")
        if self.flip[:4] != PURE_FLIP:
            raise AlphabetError("flip pairing must map A<->C and T<->G")
        for m in self.masks[4:]:
            if bin(m).count("1") < 2 or m > 0b1111:
                raise AlphabetError("composite letters need 2-4 distinct bases")
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(self.names)})

    def __len__(self) -> int:
        return len(self.names)

    @property
    def k(self) -> int:
        """Number of composite letters."""
        return len(self.names) - 4

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise AlphabetError(f"symbol {name!r} not in alphabet {self.spec()!r}") from None

    def word(self, text: str) -> Seq:
        """Parse a text word (one character per symbol) into a tuple of indices."""
        return tuple(self.index(c) for c in text)

    def text(self, seq: Sequence[int]) -> str:
        return "".join(self.names[i] for i in seq)

    def bases_of(self, symbol: int) -> str:
        m = self.masks[symbol]
        return "".join(b for i, b in enumerate(BASES) if m >> i & 1)

    def is_pure(self, symbol: int) -> bool:
        return symbol < 4

    def gc_class(self, symbol: int) -> int | None:
        """1 if the symbol always realizes C/G, 0 if always A/T, None if mixed."""
        m = self.masks[symbol]
        if m & GC_MASK == m:
            return 1
        if m & AT_MASK == m:
            return 0
        return None

    def is_flip_fixed(self, symbol: int) -> bool:
        return self.flip[symbol] == symbol

    def validate(self, seq: Sequence[int]) -> None:
        q = len(self.names)
        for s in seq:
            if not 0 <= s < q:
                raise AlphabetError(f"symbol index {s} out of range for alphabet of size {q}")

    def spec(self) -> str:
        """Inverse of :func:`parse_alphabet` (canonical text form)."""
        parts = []
        seen = set()
        for i in range(4, len(self.names)):
            if i in seen:
                continue
            entry = f"{self.names[i]}={self.bases_of(i)}"
            j = self.flip[i]
            if j != i:
                entry += f"~{self.names[j]}={self.bases_of(j)}"
                seen.add(j)
            parts.append(entry)
        return ",".join(parts)


def make_alphabet(
    composites: Sequence[tuple[str, str]] = (),
    pairs: Sequence[tuple[str, str]] = (),
) -> CompositeAlphabet:
    """Build an alphabet from ``(name, bases)`` composites and flip ``pairs``."""
    names = list(BASES)
    masks = [1, 2, 4, 8]
    for name, bases in composites:
        if len(name) != 1 or not name.isupper() or name in BASES:
            raise AlphabetError(f"invalid composite name {name!r}")
        if not bases or any(b not in BASES for b in bases) or len(set(bases)) != len(bases):
            raise AlphabetError(f"invalid base set {bases!r} for {name}")
        if not 2 <= len(bases) <= 4:
            raise AlphabetError(f"composite {name} needs 2-4 distinct bases, got {bases!r}")
        names.append(name)
        masks.append(base_mask(bases))
    if len(set(names)) != len(names):
        raise AlphabetError("duplicate symbol name")
    flip = list(PURE_FLIP) + list(range(4, len(names)))
    index = {c: i for i, c in enumerate(names)}
    for a, b in pairs:
        i, j = index[a], index[b]
        if i == j or flip[i] != i or flip[j] != j:
            raise AlphabetError(f"invalid flip pair {a}~{b}")
        flip[i], flip[j] = j, i
    return CompositeAlphabet(tuple(names), tuple(masks), tuple(flip))


def parse_alphabet(spec: str) -> CompositeAlphabet:
    """Parse an alphabet spec such as ``"M=AC"`` or ``"M=AT~N=CG"``.

    Entries are separated by commas; ``X=..~Y=..`` declares the two composites
    and makes them a flip pair. The empty string gives the pure alphabet.
    """
    spec = spec.strip()
    composites: list[tuple[str, str]] = []
    pairs: list[tuple[str, str]] = []
    if not spec:
        return make_alphabet()
    for group in spec.split(","):
        members = [m.strip() for m in group.split("~")]
        if len(members) > 2:
            raise AlphabetError(f"flip group {group!r} has more than two members")
        group_names = []
        for entry in members:
            name, sep, bases = entry.partition("=")
            if not sep:
                raise AlphabetError(f"entry {entry!r} is not of the form NAME=BASES")
            composites.append((name.strip(), bases.strip().upper()))
            group_names.append(name.strip())
        if len(group_names) == 2:
            pairs.append((group_names[0], group_names[1]))
    return make_alphabet(composites, pairs)


def dna_representation(value: int, length: int) -> Seq:
    """Base-4 digits of ``value`` as pure bases, most significant first."""
    if length < 1:
        raise ValueError("length must be positive")
    if not 0 <= value < 4**length:
        raise ValueError(f"{value} does not fit in {length} base-4 digits")
    digits = [0] * length
    for i in range(length - 1, -1, -1):
        value, digits[i] = divmod(value, 4)
    return tuple(digits)


def dna_value(word: Sequence[int]) -> int:
    """Inverse of :func:`dna_representation`; every symbol must be pure."""
    value = 0
    for s in word:
        if not 0 <= s < 4:
            raise ValueError("DNA representation contains a non-pure symbol")
        value = value * 4 + s
    return value


def flip_prefix(alphabet: CompositeAlphabet, x: Sequence[int], t: int) -> Seq:
    if not 0 <= t <= len(x):
        raise ValueError(f"flip length {t} outside [0, {len(x)}]")
    f = alphabet.flip
    return tuple(f[s] for s in x[:t]) + tuple(x[t:])


def complement(alphabet: CompositeAlphabet, x: Sequence[int]) -> Seq:
    f = alphabet.flip
    return tuple(f[s] for s in x)


def interleave(u: Sequence[int], v: Sequence[int]) -> Seq:
    if len(u) != len(v):
        raise ValueError(f"cannot interleave words of lengths {len(u)} and {len(v)}")
    out: list[int] = []
    for a, b in zip(u, v):
        out.append(a)
        out.append(b)
    return tuple(out)


def log4_ceil(n: int) -> int:
    """Smallest L >= 1 with 4**L >= n."""
    length = 1
    while 4**length < n:
        length += 1
    return length


SIGMA0 = make_alphabet()
SIGMA1_AC = parse_alphabet("M=AC")
SIGMA2_ATGC = parse_alphabet("M=AT~N=CG")
