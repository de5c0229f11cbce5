import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rado_localization.rado_core import (
    DISJOINT,
    H_PART,
    SMALL_BIT_LIMIT,
    WHOLE_GRAPH,
    Cone,
    SparseNat,
    adjacent,
    bit_length,
    canonical,
    check_vertex,
    classify_vertex,
    compact_witness,
    cone_equal,
    cone_intersection,
    cone_member,
    cone_subset,
    cones_intersect,
    describe_set,
    describe_vertex,
    from_bits,
    has_bit,
    least_witness,
    parse_vertex_token,
    successor,
    vertex_token,
    witness,
)

# Every membership question about cones over H < 5 is decided below 64
SMALL_LIMIT = 64


def small_cones():
    for size in range(3):
        for H in itertools.combinations(range(5), size):
            for r in range(len(H) + 1):
                for K in itertools.combinations(H, r):
                    yield Cone(H, K)


cone_patterns = st.dictionaries(st.integers(0, 60), st.booleans(), max_size=8)


def cone_from_pattern(pattern):
    return Cone(pattern, [h for h, inside in pattern.items() if inside])


def wide_cones():
    """Every cone with |H| <= 4 over the vertices below 16."""
    for size in range(5):
        for H in itertools.combinations(range(16), size):
            for r in range(len(H) + 1):
                for K in itertools.combinations(H, r):
                    yield Cone(H, K)


wide_patterns = st.dictionaries(st.integers(0, 15), st.booleans(), max_size=4)


def cell_representatives(a, b):
    """One vertex from every cell of the partition over H_a + H_b, plus H_a + H_b itself.

    Membership in a and in b is constant on each cell.
    """
    H = a.H | b.H
    yield from H
    for r in range(len(H) + 1):
        for K in itertools.combinations(sorted(H), r):
            yield witness(Cone(H, K))


class TestAdjacency:
    def test_bit_rule(self):
        """u < v are adjacent iff bit u of v is set."""
        assert adjacent(0, 1)
        assert adjacent(1, 2)
        assert not adjacent(0, 2)
        assert adjacent(2, 13)
        assert not adjacent(1, 13)

    def test_irreflexive(self):
        """No vertex is adjacent to itself."""
        assert not any(adjacent(v, v) for v in range(64))

    @given(st.integers(0, 1 << 20), st.integers(0, 1 << 20))
    def test_symmetric(self, u, v):
        assert adjacent(u, v) == adjacent(v, u)


class TestSparseNat:
    def test_canonical_representation(self):
        """Wide naturals become SparseNat, narrow ones stay int."""
        assert canonical(1 << 100) == 1 << 100
        wide = canonical(1 << 5000)
        assert isinstance(wide, SparseNat)
        assert wide == from_bits({5000})
        assert hash(wide) == hash(from_bits([5000]))

    def test_sparse_nat_needs_wide_bit(self):
        with pytest.raises(ValueError):
            SparseNat(frozenset({3}))

    def test_order_agrees_with_numeric_order(self):
        """Every int is below every SparseNat; SparseNats compare by bits."""
        big = from_bits({5000})
        bigger = from_bits({5000, 0})
        assert (1 << 4000) < big
        assert big > (1 << 4000)
        assert big < bigger
        assert big != 1 << 4000

    def test_successor_crosses_the_limit(self):
        top = (1 << SMALL_BIT_LIMIT) - 1
        assert isinstance(top, int)
        nxt = successor(top)
        assert nxt == from_bits({SMALL_BIT_LIMIT})
        assert isinstance(nxt, SparseNat)
        assert bit_length(nxt) == SMALL_BIT_LIMIT + 1

    def test_successor_inside_sparse(self):
        v = from_bits({5000, 0, 1})
        assert successor(v) == from_bits({5000, 2})

    def test_bits_and_adjacency(self):
        v = from_bits({5000, 3})
        assert has_bit(v, 5000)
        assert has_bit(v, 3)
        assert not has_bit(v, 4)
        assert adjacent(3, v)
        assert adjacent(5000, v)
        assert not adjacent(2, v)

    def test_tokens(self):
        """Tokens parse back to the same vertex."""
        v = from_bits({5000, 7})
        assert parse_vertex_token(vertex_token(v)) == v
        assert vertex_token(13) == "13"
        assert parse_vertex_token("13") == 13

    def test_invalid_tokens(self):
        with pytest.raises(ValueError):
            parse_vertex_token("-1")
        with pytest.raises(ValueError):
            parse_vertex_token({"bits": ["3"]})
        with pytest.raises(ValueError):
            parse_vertex_token(12)

    def test_describe(self):
        assert describe_vertex(13) == "13"
        assert describe_vertex(from_bits({5000, 0})) == "<2^5000+1>"
        assert describe_set({2, 0}) == "{0,2}"

    def test_check_vertex(self):
        assert check_vertex(3) == 3
        with pytest.raises(ValueError):
            check_vertex(-1)
        with pytest.raises(ValueError):
            check_vertex(True)


class TestCones:
    def test_k_must_be_subset_of_h(self):
        with pytest.raises(ValueError):
            Cone({0}, {1})

    def test_witness_formula(self):
        """Sum of 2^k over K plus 2^(max H + 1)."""
        c = Cone({0, 1, 2}, {0, 2})
        assert witness(c) == 13
        assert cone_member(13, c)
        assert witness(WHOLE_GRAPH) == 1

    def test_members_of_h_are_outside(self):
        assert not cone_member(0, Cone({0}, {0}))

    def test_classify(self):
        assert classify_vertex(2, {0, 1}) == frozenset({1})
        assert classify_vertex(0, {0, 1}) is H_PART
        assert classify_vertex(7, set()) == frozenset()

    def test_intersection(self):
        a = Cone({0}, {0})
        assert cone_intersection(a, Cone({0}, set())) is DISJOINT
        assert not DISJOINT
        assert cone_intersection(a, Cone({1}, set())) == Cone({0, 1}, {0})

    def test_subset_and_equality(self):
        assert cone_subset(Cone({0, 1}, {0}), Cone({0}, {0}))
        assert not cone_subset(Cone({0}, {0}), Cone({0, 1}, {0}))
        assert cone_subset(Cone({0}), WHOLE_GRAPH)
        assert cone_equal(Cone({0, 1}, {1}), Cone({1, 0}, {1}))

    def test_str(self):
        assert str(Cone({0, 2}, {2})) == "R^{0,2}_{2}"

    def test_calculus_against_brute_force(self):
        """Intersection, inclusion and equality agree with member sets."""
        cones = list(small_cones())

        def member_set(c):
            return frozenset(v for v in range(SMALL_LIMIT) if cone_member(v, c))

        members = {c: member_set(c) for c in cones}
        for a, b in itertools.product(cones, repeat=2):
            assert cones_intersect(a, b) == bool(members[a] & members[b])
            meet = cone_intersection(a, b)
            if meet is not DISJOINT:
                assert member_set(meet) == members[a] & members[b]
            assert cone_subset(a, b) == (members[a] <= members[b])
            assert cone_equal(a, b) == (members[a] == members[b])

    def test_h_must_hold_vertices(self):
        with pytest.raises(ValueError):
            Cone({-1})
        with pytest.raises(ValueError):
            Cone({True}, {True})
        with pytest.raises(ValueError):
            Cone({"3"})
        with pytest.raises(ValueError):
            Cone({0, -2}, {0})

    def test_witnesses_of_every_wide_cone(self):
        """Both witnesses lie in every cone with |H| <= 4 over 0..15."""
        count = 0
        for c in wide_cones():
            assert cone_member(witness(c), c)
            assert cone_member(compact_witness(c), c)
            count += 1
        assert count == 34113

    def test_partition_over_small_h(self):
        """Each vertex below 2^(max H + 2) is in H or in exactly one cone over H."""
        for size in range(5):
            for H in itertools.combinations(range(8), size):
                H = frozenset(H)
                cones = [
                    Cone(H, K)
                    for r in range(size + 1)
                    for K in itertools.combinations(sorted(H), r)
                ]
                limit = 1 << (max(H, default=-1) + 2)
                for v in range(limit):
                    part = classify_vertex(v, H)
                    containing = [c for c in cones if cone_member(v, c)]
                    if part is H_PART:
                        assert v in H
                        assert containing == []
                    else:
                        assert containing == [Cone(H, part)]

    @settings(max_examples=300)
    @given(wide_patterns, st.integers(0, 1 << 17))
    def test_classify_agrees_with_membership(self, pattern, v):
        H = frozenset(pattern)
        part = classify_vertex(v, H)
        if part is H_PART:
            assert v in H
        else:
            assert part <= H
            assert cone_member(v, Cone(H, part))

    @settings(max_examples=1000)
    @given(wide_patterns, wide_patterns)
    def test_calculus_on_wide_cones(self, p, r):
        """Intersection, inclusion and equality agree with membership on every cell."""
        a, b = cone_from_pattern(p), cone_from_pattern(r)
        reps = list(cell_representatives(a, b))
        in_a = {v for v in reps if cone_member(v, a)}
        in_b = {v for v in reps if cone_member(v, b)}
        assert cones_intersect(a, b) == bool(in_a & in_b)
        meet = cone_intersection(a, b)
        if meet is not DISJOINT:
            assert {v for v in reps if cone_member(v, meet)} == in_a & in_b
        assert cone_subset(a, b) == (in_a <= in_b)
        assert cone_equal(a, b) == (in_a == in_b)

    def test_least_witness(self):
        assert least_witness(Cone({0, 1, 2}, {0, 2}), 100) == 5
        assert least_witness(Cone({0}, {0}), 1) is None

    @settings(max_examples=1000)
    @given(cone_patterns)
    def test_witness_is_member(self, pattern):
        c = cone_from_pattern(pattern)
        assert cone_member(witness(c), c)
        assert cone_member(compact_witness(c), c)

    def test_compact_witness_skips_h(self):
        """The top bit is the least position above H that is not in H."""
        assert compact_witness(Cone({0, 1, 2, 3}, {1})) == 2 + (1 << 4)
        assert compact_witness(Cone({0, 1, 2, 3, 4}, set())) == 1 << 5
