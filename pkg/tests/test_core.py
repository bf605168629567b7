from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dilatesums import (
    AffineMap,
    DilationPair,
    IntSet,
    SetParseError,
    SpanOverflowError,
    affine_image,
    canonicalize,
    coprime_pairs,
    dilated_sumset,
    dilated_sumset_size,
    parse_set_literal,
    read_set_file,
    sumset,
    to_literal,
)
from dilatesums.core import _bitset_conv_path, _bitset_or_path

from conftest import PAIRS8, brute_dilated

sets_strategy = st.builds(
    IntSet.from_values,
    st.lists(st.integers(-(10**6), 10**6), min_size=1, max_size=30, unique=True),
)
pairs_strategy = st.sampled_from(PAIRS8)


class TestIntSet:
    def test_strictly_increasing_enforced(self):
        with pytest.raises(ValueError):
            IntSet((0, 0, 1))
        with pytest.raises(ValueError):
            IntSet((3, 1))

    def test_rejects_non_integers(self):
        with pytest.raises(TypeError):
            IntSet((0, 1.5))
        with pytest.raises(TypeError):
            IntSet((True, 2))

    def test_rejects_out_of_range(self):
        with pytest.raises(SpanOverflowError):
            IntSet((0, 2**63))

    def test_accessors(self):
        s = IntSet((-5, 0, 7))
        assert len(s) == 3 and s.min == -5 and s.max == 7 and s.span == 12
        assert list(s) == [-5, 0, 7] and s[1] == 0
        assert 7 in s and 3 not in s and "x" not in s

    def test_empty_allowed_but_no_extrema(self):
        s = IntSet(())
        assert len(s) == 0
        with pytest.raises(ValueError):
            s.min

    def test_from_values_sorts_and_dedupes(self):
        assert IntSet.from_values([4, 1, 1, 0, 3]).elements == (0, 1, 3, 4)

    def test_ordering_is_lexicographic(self):
        assert IntSet((0, 1, 2)) < IntSet((0, 1, 3)) < IntSet((0, 2, 3))


class TestDilationPair:
    def test_validation(self):
        DilationPair(1, 2)
        with pytest.raises(ValueError):
            DilationPair(2, 2)
        with pytest.raises(ValueError):
            DilationPair(3, 1)
        with pytest.raises(ValueError):
            DilationPair(2, 4)
        with pytest.raises(ValueError):
            DilationPair(0, 3)

    def test_coprime_pairs_grid(self):
        got = [(d.p, d.q) for d in coprime_pairs(8)]
        assert got == [
            (1, 2), (1, 3), (1, 4), (2, 3), (1, 5),
            (1, 6), (2, 5), (3, 4), (1, 7), (3, 5),
        ]


class TestAffineImage:
    def test_pure_translation(self):
        assert affine_image(IntSet((1, 3)), c=2, d=1).elements == (3, 5)

    def test_identity(self):
        assert affine_image(IntSet((0, 1, 3)), c=0, d=1).elements == (0, 1, 3)

    def test_dilate_translate(self):
        assert affine_image(IntSet((0, 1, 2)), c=1, d=3).elements == (1, 4, 7)

    def test_errors(self):
        with pytest.raises(ValueError):
            affine_image(IntSet(()), 0, 1)
        with pytest.raises(ValueError):
            affine_image(IntSet((1,)), 0, 0)
        with pytest.raises(SpanOverflowError):
            affine_image(IntSet((2**62,)), 0, 4)

    def test_large_set_numpy_path(self):
        s = IntSet(tuple(range(5000)))
        out = affine_image(s, c=-3, d=7)
        assert out.elements[0] == -3 and out.elements[-1] == 7 * 4999 - 3
        assert len(out) == 5000


class TestSumset:
    def test_examples(self):
        assert sumset(IntSet((0, 1)), IntSet((0, 2))).elements == (0, 1, 2, 3)
        assert sumset(IntSet((5,)), IntSet((7,))).elements == (12,)
        s = sumset(IntSet((0, 1, 2)), IntSet((0, 1, 2)))
        assert s.elements == (0, 1, 2, 3, 4) and len(s) == 3 + 3 - 1

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            sumset(IntSet(()), IntSet((1,)))
        with pytest.raises(ValueError):
            sumset(IntSet((1,)), IntSet(()))

    @settings(deadline=None)
    @given(
        st.lists(st.integers(-(10**6), 10**6), min_size=1, max_size=25, unique=True),
        st.lists(st.integers(-(10**6), 10**6), min_size=1, max_size=25, unique=True),
    )
    def test_superadditivity(self, a, b):
        s = sumset(IntSet.from_values(a), IntSet.from_values(b))
        assert len(s) >= len(set(a)) + len(set(b)) - 1


class TestDilatedSumset:
    def test_examples(self):
        assert dilated_sumset(IntSet((0, 1)), DilationPair(1, 2)).elements == (0, 1, 2, 3)
        assert dilated_sumset(IntSet((0, 1)), DilationPair(2, 3)).elements == (0, 2, 3, 5)
        out = dilated_sumset(IntSet((0, 1, 3, 4)), DilationPair(1, 3))
        assert out.elements == (0, 1, 3, 4, 6, 7, 9, 10, 12, 13, 15, 16)
        assert len(out) == 12

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            dilated_sumset(IntSet(()), DilationPair(1, 2))

    def test_span_overflow_detected(self):
        big = IntSet((0, 2**62))
        with pytest.raises(SpanOverflowError):
            dilated_sumset(big, DilationPair(2, 3))
        with pytest.raises(SpanOverflowError):
            dilated_sumset_size(big, DilationPair(2, 3))

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError):
            dilated_sumset(IntSet((0, 1)), DilationPair(1, 2), backend="fft")

    @settings(deadline=None, max_examples=60)
    @given(sets_strategy, pairs_strategy)
    def test_backend_equivalence(self, A, pq):
        ref = brute_dilated(A.elements, pq.p, pq.q)
        for backend in ("merge", "hash", "bitset", "auto"):
            got = dilated_sumset(A, pq, backend)
            assert list(got.elements) == ref
            assert dilated_sumset_size(A, pq, backend) == len(ref)

    @settings(deadline=None, max_examples=40)
    @given(
        sets_strategy,
        pairs_strategy,
        st.integers(-(10**5), 10**5),
        st.integers(1, 50),
    )
    def test_affine_invariance(self, A, pq, c, d):
        moved = affine_image(A, c, d)
        assert dilated_sumset_size(moved, pq) == dilated_sumset_size(A, pq)

    @settings(deadline=None, max_examples=40)
    @given(sets_strategy, pairs_strategy)
    def test_base_lower_bound(self, A, pq):
        assert dilated_sumset_size(A, pq) >= 3 * len(A) - 2

    @settings(deadline=None, max_examples=40)
    @given(sets_strategy, pairs_strategy)
    def test_reflection_invariance(self, A, pq):
        neg = IntSet.from_values(-x for x in A)
        assert dilated_sumset_size(neg, pq) == dilated_sumset_size(A, pq)


class TestBitsetInternals:
    def _case(self, rng, n, stretch):
        vals = sorted(rng.sample(range(0, 4000), n))
        u = np.array(vals, dtype=np.int64) - vals[0]
        v = stretch * u
        nbits = int(u[-1]) + int(v[-1]) + 1
        ref = sorted({int(a) + int(b) for a in u for b in v})
        return u, v, nbits, ref

    def test_or_and_conv_paths_agree_with_brute_force(self, rng):
        for n, stretch in [(2, 1), (17, 3), (64, 5), (200, 2)]:
            u, v, nbits, ref = self._case(rng, n, stretch)
            assert _bitset_or_path(u, v, nbits, False).tolist() == ref
            assert _bitset_conv_path(u, v, nbits, False).tolist() == ref
            assert _bitset_or_path(u, v, nbits, True) == len(ref)
            assert _bitset_conv_path(u, v, nbits, True) == len(ref)

    def test_bitset_span_cap(self):
        A = IntSet((0, 10**12))
        with pytest.raises(ValueError):
            dilated_sumset(A, DilationPair(1, 2), backend="bitset")

    def test_or_path_variant_batching(self, rng, monkeypatch):
        # shrink the batch budget so the shifted-mask table is built in many
        # slices; results must not depend on the slicing
        import dilatesums.core as core

        u, v, nbits, ref = self._case(rng, 50, 7)
        monkeypatch.setattr(core, "_VARIANT_BATCH_BYTES", 1)
        assert _bitset_or_path(u, v, nbits, False).tolist() == ref
        assert _bitset_or_path(u, v, nbits, True) == len(ref)

    def test_or_path_wide_span_sparse(self):
        # tiny sets across a huge span: only a few shifted rows may be built
        u = np.array([0, 63, 10**8 + 1], dtype=np.int64)
        v = np.array([0, 1, 3 * 10**8 + 7], dtype=np.int64)
        nbits = int(u[-1]) + int(v[-1]) + 1
        ref = sorted({int(a) + int(b) for a in u for b in v})
        assert _bitset_or_path(u, v, nbits, False).tolist() == ref
        assert _bitset_or_path(u, v, nbits, True) == len(ref)


class TestCanonicalize:
    def test_shift_and_scale(self):
        C, m = canonicalize(IntSet((5, 7, 11)))
        assert C.elements == (0, 1, 3) and (m.shift, m.scale) == (5, 2)
        assert m.invert(C).elements == (5, 7, 11)

    def test_already_canonical(self):
        C, m = canonicalize(IntSet((0, 1, 3)))
        assert C.elements == (0, 1, 3) and m.is_identity

    def test_reflection_picks_lex_smaller(self):
        C, m = canonicalize(IntSet((0, 2, 3)), use_reflection=True)
        assert C.elements == (0, 1, 3)
        assert m.scale < 0 and m.invert(C).elements == (0, 2, 3)

    def test_singleton(self):
        C, m = canonicalize(IntSet((42,)))
        assert C.elements == (0,) and (m.shift, m.scale) == (42, 1)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            canonicalize(IntSet(()))

    @settings(deadline=None, max_examples=60)
    @given(sets_strategy, st.booleans())
    def test_idempotent_and_invertible(self, A, reflect):
        C, m = canonicalize(A, use_reflection=reflect)
        assert C.min == 0
        assert m.invert(C) == A
        C2, m2 = canonicalize(C, use_reflection=reflect)
        assert C2 == C and m2.is_identity
        if len(C) > 1:
            g = 0
            for x in C:
                g = np.gcd(g, x)
            assert g == 1

    @settings(deadline=None, max_examples=40)
    @given(sets_strategy, pairs_strategy, st.booleans())
    def test_preserves_dilated_size(self, A, pq, reflect):
        C, _ = canonicalize(A, use_reflection=reflect)
        assert dilated_sumset_size(C, pq) == dilated_sumset_size(A, pq)


class TestAffineMap:
    def test_zero_scale_rejected(self):
        with pytest.raises(ValueError):
            AffineMap(shift=0, scale=0)

    def test_non_divisible_rejected(self):
        with pytest.raises(ValueError):
            AffineMap(shift=0, scale=2).apply(IntSet((1, 3)))

    def test_apply_invert_round_trip(self):
        m = AffineMap(shift=5, scale=-3)
        A = IntSet((2, 5, 8))
        assert m.apply(m.invert(A)) == A


class TestTextFormats:
    def test_literal_examples(self):
        s, dups = parse_set_literal("0,1,3,4")
        assert s.elements == (0, 1, 3, 4) and dups == 0
        s, dups = parse_set_literal("4, 1,1, 0 , 3")
        assert s.elements == (0, 1, 3, 4) and dups == 1

    def test_malformed_token(self):
        with pytest.raises(SetParseError, match="token 2"):
            parse_set_literal("0,x")

    def test_empty_literal(self):
        with pytest.raises(SetParseError):
            parse_set_literal("")
        with pytest.raises(SetParseError):
            parse_set_literal("1,,2")

    def test_out_of_range_literal(self):
        with pytest.raises(SpanOverflowError):
            parse_set_literal("0,9223372036854775808")

    def test_file_format(self):
        lines = ["# header", "4", " 1 ", "1  # dup", "", "0", "3"]
        s, dups = read_set_file(lines)
        assert s.elements == (0, 1, 3, 4) and dups == 1

    def test_file_errors(self):
        with pytest.raises(SetParseError, match="line 2"):
            read_set_file(["1", "abc"])
        with pytest.raises(SetParseError):
            read_set_file(["# nothing", ""])

    @settings(deadline=None, max_examples=60)
    @given(sets_strategy)
    def test_round_trip(self, A):
        s, dups = parse_set_literal(to_literal(A))
        assert s == A and dups == 0
