"""The lattice law of binary localization on finite Boolean algebras.

Elements of the algebra with `atoms` atoms are int bitmasks; join is |,
meet is & and the top is (1 << atoms) - 1. A value matrix is truncated to
rows x cols, and trees are subtrees of the depth-rows, branching-cols tree.
"""

import functools
import itertools
import logging
from dataclasses import dataclass

from .exceptions import IndexOutOfRange
from .report import Report
from .trees import check_binary, maximal_binary_trees

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValueMatrix:
    atoms: int
    entries: tuple

    def __post_init__(self):
        if self.atoms < 1:
            raise ValueError("A Boolean algebra needs at least one atom")
        entries = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries or not entries[0]:
            raise ValueError("A value matrix needs at least one row and one column")
        if any(len(row) != len(entries[0]) for row in entries):
            raise ValueError("Value matrix rows have different lengths")
        for row in entries:
            for b in row:
                if not 0 <= b <= self.top:
                    raise ValueError(
                        "Entry %d is not an element of the %d-atom algebra" % (b, self.atoms)
                    )

    @property
    def top(self):
        return (1 << self.atoms) - 1

    @property
    def rows(self):
        return len(self.entries)

    @property
    def cols(self):
        return len(self.entries[0])

    def __getitem__(self, index):
        n, m = index
        return self.entries[n][m]


def element_str(element, atoms):
    """Atom set of an element, atom 0 first."""
    return "{%s}" % ",".join("a%d" % i for i in range(atoms) if (element >> i) & 1)


def lhs(mat):
    """Meet over rows of the join over columns."""
    value = mat.top
    for row in mat.entries:
        join = 0
        for b in row:
            join |= b
        value &= join
    return value


def branch_meet(mat, branch):
    value = mat.top
    for k, m in enumerate(branch):
        value &= mat[k, m]
    return value


def atom_witnesses(mat):
    """For each atom, the first branch through the matrix staying above it, or None."""
    witnesses = {}
    for a in range(mat.atoms):
        bit = 1 << a
        branch = []
        for row in mat.entries:
            m = next((m for m, b in enumerate(row) if b & bit), None)
            if m is None:
                branch = None
                break
            branch.append(m)
        witnesses[a] = tuple(branch) if branch is not None else None
    return witnesses


def rhs_atomwise(mat, exhaustive=False):
    """Join of the atoms lying below the meet along some single branch."""
    if exhaustive:
        value = 0
        for branch in itertools.product(range(mat.cols), repeat=mat.rows):
            value |= branch_meet(mat, branch)
        return value

    value = 0
    for a, branch in atom_witnesses(mat).items():
        if branch is not None:
            value |= 1 << a
    return value


def _validate_tree(mat, tree):
    for node in tree.nodes:
        if len(node) > mat.rows or any(not 0 <= m < mat.cols for m in node):
            raise IndexOutOfRange(
                "Tree node %s lies outside the %dx%d matrix" % (node, mat.rows, mat.cols)
            )
    if not check_binary(tree):
        raise IndexOutOfRange("Tree is not binary")


def tree_value(mat, tree, meets=None):
    """Meet over levels n of the join of the prefix meets of the level-(n+1) nodes."""
    if meets is None:
        meets = {}
    joins = [0] * mat.rows
    for node in tree.nodes:
        if node:
            if node not in meets:
                meets[node] = branch_meet(mat, node)
            joins[len(node) - 1] |= meets[node]
    value = mat.top
    for join in joins:
        value &= join
    return value


def rhs_tree_lower_bound(mat, trees):
    value = 0
    meets = {}
    for tree in trees:
        _validate_tree(mat, tree)
        value |= tree_value(mat, tree, meets)
    return value


@functools.lru_cache(maxsize=None)
def _maximal_trees(rows, cols):
    return tuple(maximal_binary_trees(rows, cols))


def rhs_exhaustive_trees(mat):
    """Join over every maximal binary tree; exact since tree values are monotone."""
    value = 0
    meets = {}
    for tree in _maximal_trees(mat.rows, mat.cols):
        value |= tree_value(mat, tree, meets)
        if value == mat.top:
            break
    return value


def disjointify(mat):
    """Replace b_nm by b_nm minus the join of b_ni, i < m; lhs is unchanged."""
    rows = []
    for row in mat.entries:
        seen = 0
        out = []
        for b in row:
            out.append(b & ~seen)
            seen |= b
        rows.append(out)
    return ValueMatrix(mat.atoms, rows)


def random_matrix(rng, atoms, rows, cols):
    top = (1 << atoms) - 1
    return ValueMatrix(
        atoms, [[rng.randint(0, top) for _ in range(cols)] for _ in range(rows)]
    )


def check_identity(mat, trees=(), exhaustive=False):
    """lhs against the atom-wise rhs, each sampled tree, and optionally every tree."""
    report = Report("identity")
    left = lhs(mat)
    right = rhs_atomwise(mat)
    report.check(
        left == right,
        "lhs %s differs from rhs %s"
        % (element_str(left, mat.atoms), element_str(right, mat.atoms)),
    )

    meets = {}
    for i, tree in enumerate(trees):
        _validate_tree(mat, tree)
        value = tree_value(mat, tree, meets)
        report.check(
            value & ~left == 0,
            "tree %d gives %s, which is not below lhs %s"
            % (i, element_str(value, mat.atoms), element_str(left, mat.atoms)),
        )

    if exhaustive:
        joined = rhs_exhaustive_trees(mat)
        report.check(
            joined == left,
            "join over all binary trees %s differs from lhs %s"
            % (element_str(joined, mat.atoms), element_str(left, mat.atoms)),
        )

    report.check(lhs(disjointify(mat)) == left, "disjoint rows change lhs")
    report.data["lhs"] = element_str(left, mat.atoms)
    report.data["rhs"] = element_str(right, mat.atoms)
    report.data["witnesses"] = {
        "a%d" % a: list(branch) if branch is not None else None
        for a, branch in atom_witnesses(mat).items()
    }
    return report
