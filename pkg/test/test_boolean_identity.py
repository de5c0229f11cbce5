import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rado_localization.boolean_identity import (
    ValueMatrix,
    atom_witnesses,
    check_identity,
    disjointify,
    element_str,
    lhs,
    random_matrix,
    rhs_atomwise,
    rhs_exhaustive_trees,
    rhs_tree_lower_bound,
    tree_value,
)
from rado_localization.exceptions import IndexOutOfRange
from rado_localization.fuzz_pool import run_batch
from rado_localization.trees import FiniteTree, random_binary_tree, upward_closure


@st.composite
def matrices(draw, max_atoms=3, max_rows=4, max_cols=4):
    atoms = draw(st.integers(1, max_atoms))
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    entry = st.integers(0, (1 << atoms) - 1)
    entries = draw(
        st.lists(
            st.lists(entry, min_size=cols, max_size=cols), min_size=rows, max_size=rows
        )
    )
    return ValueMatrix(atoms, entries)


def all_matrices(atoms, rows, cols):
    top = 1 << atoms
    for flat in itertools.product(range(top), repeat=rows * cols):
        yield ValueMatrix(
            atoms, [flat[n * cols : (n + 1) * cols] for n in range(rows)]
        )


def project(mat, a):
    """The 1-atom matrix of which entries contain atom a."""
    return ValueMatrix(1, [[(b >> a) & 1 for b in row] for row in mat.entries])


def permute_atoms(element, perm):
    return sum(1 << perm[a] for a in range(len(perm)) if (element >> a) & 1)


class TestValueMatrix:
    def test_shape(self):
        mat = ValueMatrix(2, [[1, 2, 0], [3, 0, 1]])
        assert mat.rows == 2
        assert mat.cols == 3
        assert mat.top == 3
        assert mat[1, 0] == 3

    def test_invalid(self):
        with pytest.raises(ValueError):
            ValueMatrix(1, [[2]])
        with pytest.raises(ValueError):
            ValueMatrix(2, [[1, 2], [3]])
        with pytest.raises(ValueError):
            ValueMatrix(0, [[0]])
        with pytest.raises(ValueError):
            ValueMatrix(1, [])

    def test_element_str(self):
        assert element_str(5, 3) == "{a0,a2}"
        assert element_str(0, 3) == "{}"


class TestIdentity:
    def test_small_example(self):
        mat = ValueMatrix(2, [[1, 2], [3, 0]])
        assert lhs(mat) == 3
        assert rhs_atomwise(mat) == 3
        assert atom_witnesses(mat) == {0: (0, 0), 1: (1, 0)}

    def test_missing_atom(self):
        """An atom absent from some row is in neither side."""
        mat = ValueMatrix(2, [[1, 2], [1, 0]])
        assert lhs(mat) == 1
        assert rhs_atomwise(mat) == 1
        assert atom_witnesses(mat)[1] is None

    @settings(max_examples=1000)
    @given(matrices())
    def test_atomwise_rhs_equals_lhs(self, mat):
        assert rhs_atomwise(mat) == lhs(mat)
        assert rhs_atomwise(mat, exhaustive=True) == lhs(mat)

    @settings(max_examples=200)
    @given(matrices(), st.integers(0, 1 << 16))
    def test_sampled_trees_stay_below_lhs(self, mat, seed):
        rng = random.Random(seed)
        trees = [random_binary_tree(rng, mat.rows, mat.cols) for _ in range(20)]
        bound = rhs_tree_lower_bound(mat, trees)
        assert bound & ~lhs(mat) == 0

    def test_tree_value(self):
        mat = ValueMatrix(2, [[1, 2], [3, 1]])
        both = upward_closure({(0, 0), (1, 0)})
        assert tree_value(mat, both) == 3
        single = upward_closure({(1, 1)})
        assert tree_value(mat, single) == 0

    def test_empty_sample(self):
        assert rhs_tree_lower_bound(ValueMatrix(1, [[1]]), []) == 0

    def test_out_of_range_tree(self):
        mat = ValueMatrix(1, [[1, 1], [1, 1]])
        with pytest.raises(IndexOutOfRange):
            rhs_tree_lower_bound(mat, [upward_closure({(5,)})])
        with pytest.raises(IndexOutOfRange):
            rhs_tree_lower_bound(mat, [upward_closure({(0, 0, 0)})])

    def test_non_binary_tree(self):
        mat = ValueMatrix(1, [[1, 1, 1]])
        with pytest.raises(IndexOutOfRange):
            rhs_tree_lower_bound(mat, [FiniteTree(frozenset({(), (0,), (1,), (2,)}))])

    @pytest.mark.parametrize("rows,cols", [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)])
    def test_exhaustive_trees_two_atoms(self, rows, cols):
        """Every 2-atom matrix: the join over all binary trees is lhs."""
        for mat in all_matrices(2, rows, cols):
            assert rhs_exhaustive_trees(mat) == lhs(mat)

    @settings(max_examples=30, deadline=None)
    @given(matrices(max_atoms=2, max_rows=3, max_cols=3))
    def test_exhaustive_trees_sampled(self, mat):
        assert rhs_exhaustive_trees(mat) == lhs(mat)

    def test_exhaustive_trees_three_by_three(self):
        """Every 1-atom 3x3 matrix: the join over all binary trees is lhs."""
        for mat in all_matrices(1, 3, 3):
            assert rhs_exhaustive_trees(mat) == lhs(mat)

    @settings(max_examples=200)
    @given(matrices(max_atoms=3, max_rows=3, max_cols=3), st.integers(0, 1 << 16))
    def test_tree_values_are_atomwise(self, mat, seed):
        """A tree's value holds atom a iff it holds in the projection onto a."""
        rng = random.Random(seed)
        tree = random_binary_tree(rng, mat.rows, mat.cols)
        value = tree_value(mat, tree)
        for a in range(mat.atoms):
            assert (value >> a) & 1 == tree_value(project(mat, a), tree)

    @settings(max_examples=1000)
    @given(matrices(), st.data())
    def test_raising_entries_never_lowers_either_side(self, mat, data):
        extra = data.draw(
            st.lists(
                st.lists(
                    st.integers(0, mat.top), min_size=mat.cols, max_size=mat.cols
                ),
                min_size=mat.rows,
                max_size=mat.rows,
            )
        )
        raised = ValueMatrix(
            mat.atoms,
            [[b | e for b, e in zip(row, more)] for row, more in zip(mat.entries, extra)],
        )
        assert lhs(mat) & ~lhs(raised) == 0
        assert rhs_atomwise(mat) & ~rhs_atomwise(raised) == 0
        rng = random.Random(data.draw(st.integers()))
        tree = random_binary_tree(rng, mat.rows, mat.cols)
        assert tree_value(mat, tree) & ~tree_value(raised, tree) == 0

    @settings(max_examples=1000)
    @given(matrices(), st.data())
    def test_permuting_atoms_commutes_with_both_sides(self, mat, data):
        perm = data.draw(st.permutations(range(mat.atoms)))
        permuted = ValueMatrix(
            mat.atoms, [[permute_atoms(b, perm) for b in row] for row in mat.entries]
        )
        assert lhs(permuted) == permute_atoms(lhs(mat), perm)
        assert rhs_atomwise(permuted) == permute_atoms(rhs_atomwise(mat), perm)
        witnesses = atom_witnesses(mat)
        assert atom_witnesses(permuted) == {perm[a]: w for a, w in witnesses.items()}


class TestDisjointify:
    def test_example(self):
        mat = ValueMatrix(2, [[3, 1], [2, 3]])
        assert disjointify(mat).entries == ((3, 0), (2, 1))

    @given(matrices())
    def test_rows_disjoint_and_lhs_kept(self, mat):
        out = disjointify(mat)
        assert lhs(out) == lhs(mat)
        for row in out.entries:
            for a, b in itertools.combinations(row, 2):
                assert a & b == 0


class TestCheckIdentity:
    def test_report(self):
        mat = ValueMatrix(2, [[1, 2], [3, 0]])
        report = check_identity(mat, exhaustive=True)
        assert report.passed
        assert report.data["lhs"] == "{a0,a1}"
        assert report.data["witnesses"] == {"a0": [0, 0], "a1": [1, 0]}

    @pytest.mark.parametrize(
        "atoms,rows,cols", [(1, 3, 3), (2, 4, 3), (3, 4, 4), (8, 5, 5)]
    )
    def test_fuzzed_matrices(self, atoms, rows, cols):
        """1000 seeded cases per configuration, 100 sampled trees each."""
        verdicts = run_batch(7, 0, 1000, atoms, rows, cols, 100)
        assert len(verdicts) == 1000
        assert [i for i, passed, _ in verdicts if not passed] == []

    def test_random_matrix_is_seeded(self):
        a = random_matrix(random.Random(5), 3, 2, 2)
        b = random_matrix(random.Random(5), 3, 2, 2)
        assert a == b
