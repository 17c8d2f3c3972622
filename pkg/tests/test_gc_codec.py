import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from composite_dna.alphabet import SIGMA0, SIGMA1_AC, SIGMA2_ATGC, flip_prefix, log4_ceil, parse_alphabet
from composite_dna.gc_codec import (
    AtgcParams,
    BalanceTarget,
    CompositeGcParams,
    GridMode,
    balance_statistic,
    full_grid,
    gc_decode_atgc,
    gc_decode_composite,
    gc_decode_sigma1,
    gc_decode_sigma2,
    gc_encode_atgc,
    gc_encode_composite,
    gc_encode_sigma1,
    gc_encode_sigma2,
    knuth_index_search,
    lset_grid,
    lset_size_bound,
    phi_projection,
)
from composite_dna.rll_codec import CodecError
from composite_dna.verifier import BalanceMode, gc_bounds, is_eps_balanced

from oracles import gc_range_by_realizations

A1, A2 = SIGMA1_AC, SIGMA2_ATGC
SIGMA2_GENERAL = parse_alphabet("M=AG,N=ATC")


def test_grids():
    assert lset_grid(30, 300) == (0, 60, 120, 180, 240, 300)
    assert len(lset_grid(30, 300)) <= math.floor(1 / (2 * Fraction(1, 10))) + 1
    assert lset_grid(2, 9, odd=True) == (0, 3, 6, 9)
    assert list(full_grid(3)) == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        lset_grid(0, 10)


def test_lset_size_bound_holds():
    for s in range(1, 6):
        for n in range(1, 80):
            for m in range(n + 1):
                for odd in (False, True):
                    assert len(lset_grid(s, m, odd)) <= lset_size_bound(s, n)


def test_search_already_balanced():
    z = SIGMA0.word("ACTG")
    assert knuth_index_search(SIGMA0, z, full_grid(4), BalanceTarget(4, 0)) == 0


def test_search_all_a():
    for m in (2, 6, 10):
        z = (0,) * m
        assert knuth_index_search(SIGMA0, z, full_grid(m), BalanceTarget(m, 0)) == m // 2


def test_search_odd_needs_slack():
    with pytest.raises(ValueError):
        knuth_index_search(SIGMA0, (0, 0, 0), full_grid(3), BalanceTarget(3, 0))


def test_search_exact_exhaustive():
    # class patterns with fixed and paired composites
    for m in range(1, 9):
        for z in itertools.product((0, 2, 4, 5), repeat=m):
            if m % 2:
                continue
            t = knuth_index_search(A2, z, full_grid(m), BalanceTarget(m, 0))
            assert balance_statistic(A2, flip_prefix(A2, z, t)) == m // 2
    for m in range(1, 10):
        for z in itertools.product((0, 2, 4), repeat=m):
            fixed = z.count(4)
            if (m - fixed) % 2:
                continue
            t = knuth_index_search(A1, z, full_grid(m), BalanceTarget(m, fixed))
            assert 2 * balance_statistic(A1, flip_prefix(A1, z, t)) == m - fixed


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=80), st.integers(1, 8))
def test_search_sparse_grid(z, s):
    m = len(z)
    grid = lset_grid(s, m, odd=bool(m % 2))
    t = knuth_index_search(A2, z, grid, BalanceTarget(m, 0, s))
    assert t in grid
    assert abs(balance_statistic(A2, flip_prefix(A2, z, t)) - Fraction(m, 2)) <= s


def test_sigma1_identity_path():
    # T and M tie at weight zero, T wins on index; disclosing T keeps six GC among twelve
    x = A1.word("CCCGGGAAAAA")
    c = gc_encode_sigma1(x, 16)
    assert A1.text(c) == "CCCGGGAAAAA" + "T" + "ACAC"  # t = 0
    assert gc_decode_sigma1(c, 16) == x


@pytest.mark.parametrize("n", [16, 17, 40, 101])
def test_sigma1_randomized(n):
    rng = random.Random(n)
    p = CompositeGcParams(A1, n, Fraction(1, 10))
    assert p.payload_length == n - 2 * log4_ceil(n) - 1
    for _ in range(2000):
        x = tuple(rng.randrange(5) for _ in range(p.payload_length))
        c = gc_encode_sigma1(x, n)
        N = len(c)
        assert N in (n, n + 1)
        b = gc_bounds(A1, c)
        assert Fraction(2, 5) * N <= b.min_gc and b.max_gc <= Fraction(3, 5) * N
        assert is_eps_balanced(A1, c, Fraction(1, 10), BalanceMode.LENIENT)
        assert gc_decode_sigma1(c, n) == x


def test_sigma1_realizations_cross_check():
    rng = random.Random(5)
    p = CompositeGcParams(A1, 16, Fraction(1, 10))
    for _ in range(200):
        x = tuple(rng.randrange(5) for _ in range(p.payload_length))
        c = gc_encode_sigma1(x, 16)
        assert gc_range_by_realizations(A1, c) == tuple(vars(gc_bounds(A1, c)).values())


def test_sigma1_sparse_grid():
    rng = random.Random(1)
    p = CompositeGcParams(A1, 100, Fraction(1, 5), GridMode.LSET)
    assert p.slack == 10
    for _ in range(1000):
        x = tuple(rng.randrange(5) for _ in range(p.payload_length))
        c = gc_encode_sigma1(x, 100, Fraction(1, 5), grid=GridMode.LSET)
        assert is_eps_balanced(A1, c, Fraction(1, 5))
        assert gc_decode_sigma1(c, 100, Fraction(1, 5), grid=GridMode.LSET) == x


def test_sigma1_preconditions():
    with pytest.raises(ValueError):
        gc_encode_sigma1((0,) * 5, 15)
    with pytest.raises(ValueError):
        CompositeGcParams(A1, 40, Fraction(1, 20))
    with pytest.raises(ValueError):
        CompositeGcParams(A2, 40, Fraction(1, 5))  # paired composites


def test_sigma2_general():
    rng = random.Random(2)
    n, eps = 64, Fraction(1, 6)
    p = CompositeGcParams(SIGMA2_GENERAL, n, eps)
    assert p.payload_length == n - 2 * log4_ceil(n) - 2
    for _ in range(3000):
        x = tuple(rng.randrange(6) for _ in range(p.payload_length))
        c = gc_encode_sigma2(x, n, eps, SIGMA2_GENERAL)
        N = len(c)
        b = gc_bounds(SIGMA2_GENERAL, c)
        assert Fraction(N, 2) - Fraction(N, 6) - 1 <= b.min_gc and b.max_gc <= Fraction(N, 2) + Fraction(N, 6) + 1
        assert is_eps_balanced(SIGMA2_GENERAL, c, eps, BalanceMode.LENIENT)
        assert gc_decode_sigma2(c, n, eps, SIGMA2_GENERAL) == x


def test_sigma2_identity_path():
    p = CompositeGcParams(SIGMA2_GENERAL, 64, Fraction(1, 6))
    x = SIGMA2_GENERAL.word("ACGT" * 14)
    c = gc_encode_composite(x, p)
    assert gc_decode_composite(c, p) == x


def test_atgc_exact_balance_exhaustive():
    p = AtgcParams(8, 0)
    assert p.payload_length == 4
    for x in itertools.product(range(6), repeat=4):
        c = gc_encode_atgc(x, p)
        assert len(c) == 8
        assert gc_range_by_realizations(A2, c) == (4, 4)
        assert sum(phi_projection(A2, c)) == 4
        assert gc_decode_atgc(c, p) == x


@pytest.mark.parametrize("n,eps,grid", [(16, 0, "full"), (64, 0, "full"), (65, Fraction(1, 20), "full"),
                                        (17, Fraction(1, 10), "lset"), (31, Fraction(1, 10), "lset"),
                                        (300, Fraction(1, 10), "lset")])
def test_atgc_randomized(n, eps, grid):
    p = AtgcParams(n, eps, GridMode(grid))
    rng = random.Random(n)
    for _ in range(1000):
        x = tuple(rng.randrange(6) for _ in range(p.payload_length))
        c = gc_encode_atgc(x, p)
        assert len(c) == n
        assert is_eps_balanced(A2, c, eps, BalanceMode.STRICT)
        assert gc_decode_atgc(c, p) == x


def test_atgc_widths():
    assert AtgcParams(300, Fraction(1, 10), GridMode.LSET).half_suffix == 2
    assert AtgcParams(64, 0).payload_length == 64 - 2 * log4_ceil(64)


def test_atgc_preconditions():
    with pytest.raises(ValueError):
        AtgcParams(15, 0)
    with pytest.raises(ValueError):
        AtgcParams(20, Fraction(1, 40), GridMode.LSET)
    with pytest.raises(ValueError):
        AtgcParams(16, 0, alphabet=parse_alphabet("M=AT,N=CG"))


def test_decode_rejects_bad_suffix():
    p = AtgcParams(16, 0)
    c = list(gc_encode_atgc((0,) * p.payload_length, p))
    c[-1] = 4
    with pytest.raises(CodecError):
        gc_decode_atgc(c, p)


def test_phi_projection():
    W = A2.word
    assert phi_projection(A2, W("ATMATM")) == (0,) * 6
    assert phi_projection(A2, W("CGNCGN")) == (1,) * 6
    assert phi_projection(A2, W("ACMGNT")) == (0, 1, 0, 1, 1, 0)
    with pytest.raises(ValueError):
        phi_projection(A1, A1.word("AM"))
