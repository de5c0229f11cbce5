"""A computable Rado graph on the naturals and the cone calculus over it.

Vertices are naturals. For u < v, u ~ v iff bit u of v is set. Naturals
with more than SMALL_BIT_LIMIT bits are stored as a SparseNat, the finite
set of their 1-bit positions (each position itself a vertex). The choice
between int and SparseNat is canonical, so equality is value equality and
every int is below every SparseNat.

A cone R^H_K is the set of vertices outside H adjacent to all of K and to
none of H \\ K.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Optional, Union

# Values wider than this many bits are stored as SparseNat.
SMALL_BIT_LIMIT = 1 << 12


def vertex_key(v):
    """Sort key agreeing with the numeric order of vertices."""
    if isinstance(v, int):
        return (0, v)
    return v.key


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class SparseNat:
    """A natural number given by the set of positions of its 1-bits"""

    bits: frozenset

    def __post_init__(self):
        object.__setattr__(self, "bits", frozenset(self.bits))
        keys = sorted((vertex_key(p) for p in self.bits), reverse=True)
        if not keys or keys[0] < (0, SMALL_BIT_LIMIT):
            raise ValueError(
                "SparseNat needs a bit at position >= %d, use from_bits()"
                % SMALL_BIT_LIMIT
            )
        object.__setattr__(self, "key", (1, tuple(keys)))

    def __eq__(self, other):
        if isinstance(other, SparseNat):
            return self.bits == other.bits
        if isinstance(other, int):
            return False
        return NotImplemented

    def __hash__(self):
        return hash(self.bits)

    def __lt__(self, other):
        if isinstance(other, (int, SparseNat)):
            return self.key < vertex_key(other)
        return NotImplemented

    @property
    def top(self):
        """Position of the highest 1-bit."""
        return max(self.bits, key=vertex_key)

    def __repr__(self):
        return "SparseNat(%s)" % describe_vertex(self)


Vertex = Union[int, SparseNat]


def check_vertex(v):
    if isinstance(v, bool) or not isinstance(v, (int, SparseNat)):
        raise ValueError("Not a vertex: %r" % (v,))
    if isinstance(v, int) and v < 0:
        raise ValueError("Vertices are non-negative, got %d" % v)
    return v


def canonical(x: int) -> Vertex:
    """Return the canonical representation of the natural x."""
    if x.bit_length() <= SMALL_BIT_LIMIT:
        return x
    return SparseNat(frozenset(i for i in range(x.bit_length()) if (x >> i) & 1))


def from_bits(positions: Iterable[Vertex]) -> Vertex:
    """The natural whose 1-bits sit exactly at the given positions."""
    positions = frozenset(positions)
    if all(isinstance(p, int) for p in positions) and (
        not positions or max(positions) < SMALL_BIT_LIMIT
    ):
        return sum(1 << p for p in positions)
    return SparseNat(positions)


def has_bit(v: Vertex, p: Vertex) -> bool:
    if isinstance(v, int):
        if not isinstance(p, int) or p >= v.bit_length():
            return False
        return (v >> p) & 1 == 1
    return p in v.bits


def successor(v: Vertex) -> Vertex:
    if isinstance(v, int):
        return canonical(v + 1)
    bits = set(v.bits)
    p = 0
    while p in bits:
        bits.remove(p)
        p += 1
    bits.add(p)
    return from_bits(bits)


def bit_length(v: Vertex) -> Vertex:
    if isinstance(v, int):
        return v.bit_length()
    return successor(v.top)


def describe_vertex(v: Vertex) -> str:
    """Short printable form; huge values are abbreviated."""
    if isinstance(v, int):
        if v.bit_length() <= 64:
            return str(v)
        return "<%d-bit>" % v.bit_length()
    return "<2^%s+%d>" % (describe_vertex(v.top), len(v.bits) - 1)


def describe_natural(x: int) -> str:
    # Name-model values can exceed the int->str digit limit.
    if x.bit_length() <= 64:
        return str(x)
    return "0x%s...(%d bits)" % (format(x, "x")[:12], x.bit_length())


def describe_set(vs: Iterable[Vertex]) -> str:
    return "{%s}" % ",".join(describe_vertex(v) for v in sorted_vertices(vs))


def vertex_token(v: Vertex):
    """Serializable token: decimal string, or {"bits": [...]} for SparseNat."""
    if isinstance(v, int):
        return str(v)
    return {"bits": [vertex_token(p) for p in sorted(v.bits, key=vertex_key)]}


def parse_vertex_token(token) -> Vertex:
    if isinstance(token, str):
        if not token.isdigit():
            raise ValueError("Invalid vertex token '%s'" % token)
        return int(token)
    if isinstance(token, dict) and isinstance(token.get("bits"), list):
        v = from_bits(parse_vertex_token(t) for t in token["bits"])
        if isinstance(v, int):
            raise ValueError("Non-canonical sparse vertex token")
        return v
    raise ValueError("Invalid vertex token %r" % (token,))


def sorted_vertices(vs: Iterable[Vertex]) -> list:
    return sorted(vs, key=vertex_key)


################################################################################
# Graph
################################################################################
def adjacent(u: Vertex, v: Vertex) -> bool:
    if u == v:
        return False
    lo, hi = (u, v) if u < v else (v, u)
    return has_bit(hi, lo)


@dataclass(frozen=True)
class Cone:
    """R^H_K: vertices outside H adjacent to all of K and none of H \\ K"""

    H: frozenset = frozenset()
    K: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "H", frozenset(self.H))
        object.__setattr__(self, "K", frozenset(self.K))
        for h in self.H:
            check_vertex(h)
        if not self.K <= self.H:
            raise ValueError(
                "K is not a subset of H: %s not in H"
                % ",".join(describe_vertex(k) for k in sorted_vertices(self.K - self.H))
            )

    def to_dict(self):
        return {
            "H": [vertex_token(h) for h in sorted_vertices(self.H)],
            "K": [vertex_token(k) for k in sorted_vertices(self.K)],
        }

    @classmethod
    def from_dict(cls, record):
        return cls(
            frozenset(parse_vertex_token(t) for t in record["H"]),
            frozenset(parse_vertex_token(t) for t in record["K"]),
        )

    def __str__(self):
        return "R^{%s}_{%s}" % (
            ",".join(describe_vertex(h) for h in sorted_vertices(self.H)),
            ",".join(describe_vertex(k) for k in sorted_vertices(self.K)),
        )


class Disjoint:
    """Marker for an empty cone intersection"""

    def __repr__(self):
        return "Disjoint"

    def __bool__(self):
        return False


DISJOINT = Disjoint()


class HPart:
    """The H part of the partition {H} + {R^H_K : K subset of H}"""

    def __repr__(self):
        return "H"


H_PART = HPart()

WHOLE_GRAPH = Cone()


def cone_member(v: Vertex, c: Cone) -> bool:
    if v in c.H:
        return False
    for h in c.H:
        if adjacent(v, h) != (h in c.K):
            return False
    return True


def witness(c: Cone) -> Vertex:
    """sum of 2^k over K, plus 2^(max(H)+1)"""
    e = successor(max(c.H, key=vertex_key)) if c.H else 0
    return from_bits(c.K | {e})


def compact_witness(c: Cone) -> Vertex:
    """Like witness, with the top bit at the least position above H that is not in H."""
    e = bit_length(max(c.H, key=vertex_key)) if c.H else 0
    while e in c.H:
        e = successor(e)
    return from_bits(c.K | {e})


def least_witness(c: Cone, limit: int) -> Optional[int]:
    """Least member of c below limit, by search."""
    for v in range(limit):
        if cone_member(v, c):
            return v
    return None


def cones_intersect(a: Cone, b: Cone) -> bool:
    return a.H & b.K == b.H & a.K


def cone_intersection(a: Cone, b: Cone):
    if not cones_intersect(a, b):
        return DISJOINT
    return Cone(a.H | b.H, a.K | b.K)


def cone_subset(a: Cone, b: Cone) -> bool:
    return a.H >= b.H and a.K >= b.K and b.H & a.K == b.K


def cone_equal(a: Cone, b: Cone) -> bool:
    return a.H == b.H and a.K == b.K


def classify_vertex(v: Vertex, H: Iterable[Vertex]):
    """H_PART when v is in H, else the unique K with v in R^H_K."""
    H = frozenset(H)
    if v in H:
        return H_PART
    return frozenset(h for h in H if adjacent(v, h))
