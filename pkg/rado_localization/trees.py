"""Finite fragments of the trees of binary and natural sequences.

Sequences are tuples: BinSeq over {0, 1}, NatSeq over the naturals.
"""

import itertools
import logging
from dataclasses import dataclass

from .report import Report

logger = logging.getLogger(__name__)


def bits_str(seq):
    return "".join(str(b) for b in seq)


def parse_bits(text):
    if any(c not in "01" for c in text):
        raise ValueError("Invalid binary sequence '%s'" % text)
    return tuple(int(c) for c in text)


def lex_level(n):
    """^n 2 in lexicographic order."""
    return list(itertools.product((0, 1), repeat=n))


def binary_levels(depth):
    """Every binary sequence of length at most depth, shortest first."""
    return [seq for n in range(depth + 1) for seq in lex_level(n)]


def is_prefix(a, b):
    return len(a) <= len(b) and b[: len(a)] == a


def k_sequence(n):
    k = 0
    for i in range(n):
        k += (1 << (i + 1)) - 1
    return k


def delta_element(n):
    """psi_n, the element of the dense set of length n."""
    if n < 1:
        raise ValueError("Delta has no element of length %d" % n)
    # Block m holds phi^{m+1}_i followed by k_m + i zeros, i < 2^{m+1}
    m, start = 0, 1
    while n >= start + (1 << (m + 1)):
        start += 1 << (m + 1)
        m += 1
    i = n - start
    head = lex_level(m + 1)[i]
    return head + (0,) * (k_sequence(m) + i)


def delta_members(count):
    return [delta_element(n) for n in range(1, count + 1)]


def delta_density_check(depth):
    report = Report("delta")
    if depth < 1:
        report.note("nothing to check below depth 1")
        return report

    bound = depth + k_sequence(depth) + (1 << (depth + 1))
    members = delta_members(bound)
    for n, psi in enumerate(members, start=1):
        report.check(len(psi) == n, "psi_%d has length %d" % (n, len(psi)))

    lengths = [len(psi) for psi in members[:depth]]
    report.check(
        lengths == list(range(1, depth + 1)),
        "lengths 1..%d are not covered exactly once" % depth,
    )

    for node in binary_levels(depth):
        if not any(is_prefix(node, psi) for psi in members):
            report.fail(
                "no element of length <= %d extends '%s'" % (bound, bits_str(node))
            )
    report.data["bound"] = bound
    return report


@dataclass(frozen=True)
class FiniteTree:
    """A prefix-closed finite set of sequences"""

    nodes: frozenset = frozenset()

    def __post_init__(self):
        nodes = frozenset(tuple(node) for node in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if nodes and () not in nodes:
            raise ValueError("Tree without a root")
        for node in nodes:
            if node and node[:-1] not in nodes:
                raise ValueError("Tree is not closed under prefixes at %s" % (node,))

    def __contains__(self, node):
        return tuple(node) in self.nodes

    def __len__(self):
        return len(self.nodes)

    def successors(self, node):
        node = tuple(node)
        return sorted(
            child[-1]
            for child in self.nodes
            if len(child) == len(node) + 1 and child[:-1] == node
        )

    def level(self, n):
        return sorted(node for node in self.nodes if len(node) == n)

    @property
    def height(self):
        return max((len(node) for node in self.nodes), default=-1)


def upward_closure(image):
    return FiniteTree(
        frozenset(tuple(seq)[:i] for seq in image for i in range(len(seq) + 1))
    )


def check_binary(tree):
    counts = {}
    for node in tree.nodes:
        if node:
            counts[node[:-1]] = counts.get(node[:-1], 0) + 1
    return all(c <= 2 for c in counts.values())


################################################################################
# Embeddings of the binary tree
################################################################################
def random_embedding(rng, depth):
    """A strong homomorphism of ^{<=depth}2 into the tree of natural sequences.

    g(s^j) extends g(s) by one to three entries; the two extensions of a node
    start with different entries.
    """
    g = {(): tuple(rng.randrange(8) for _ in range(rng.randrange(3)))}
    for seq in binary_levels(depth - 1) if depth > 0 else []:
        first = rng.sample(range(16), 2)
        for j in (0, 1):
            tail = [rng.randrange(16) for _ in range(rng.randrange(3))]
            g[seq + (j,)] = g[seq] + (first[j],) + tuple(tail)
    return g


def inject_three_way_split(g, rng):
    """Re-route one leaf of an embedding so that some node gets a third successor."""
    depth = max(len(seq) for seq in g)
    if depth < 2:
        raise ValueError("Three-way splits need an embedding of depth >= 2")
    sigma = rng.choice(binary_levels(depth - 2))
    leaves = [seq for seq in g if len(seq) == depth and is_prefix(sigma + (0,), seq)]
    rho = rng.choice(leaves)
    base = g[sigma]
    used = {g[sigma + (j,)][len(base)] for j in (0, 1)}
    mutated = dict(g)
    mutated[rho] = base + (max(used) + 1,)
    return mutated


def maximal_binary_trees(rows, cols):
    """Every maximal binary subtree of the depth-rows, branching-cols tree."""
    width = min(cols, 2)

    def grow(prefix, remaining):
        if remaining == 0:
            yield frozenset([prefix])
            return
        for children in itertools.combinations(range(cols), width):
            for parts in itertools.product(
                *[list(grow(prefix + (c,), remaining - 1)) for c in children]
            ):
                yield frozenset([prefix]).union(*parts)

    for nodes in grow((), rows):
        yield FiniteTree(nodes)


def random_binary_tree(rng, rows, cols):
    nodes = {()}
    frontier = [()]
    for _ in range(rows):
        grown = []
        for node in frontier:
            count = 1 if cols == 1 else rng.choice((1, 2))
            for c in rng.sample(range(cols), count):
                grown.append(node + (c,))
        nodes.update(grown)
        frontier = grown
    return FiniteTree(frozenset(nodes))


################################################################################
# Export
################################################################################
def _entry_label(entry):
    if entry.bit_length() <= 32:
        return str(entry)
    return "0x%s..." % format(entry, "x")[:8]


def to_dot(tree, name="T"):
    ordered = sorted(tree.nodes, key=lambda node: (len(node), node))
    ids = {node: "n%d" % i for i, node in enumerate(ordered)}
    lines = ["digraph %s {" % name]
    for node in ordered:
        label = _entry_label(node[-1]) if node else "root"
        lines.append('  %s [label="%s"];' % (ids[node], label))
    for node in ordered:
        if node:
            lines.append("  %s -> %s;" % (ids[node[:-1]], ids[node]))
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_to_records(tree):
    return [[format(e, "x") for e in node] for node in sorted(tree.nodes)]


def tree_from_records(records):
    try:
        return FiniteTree(frozenset(tuple(int(e, 16) for e in node) for node in records))
    except (TypeError, ValueError) as e:
        raise ValueError("Invalid tree records: %s" % e)
