"""Lazy labelings <{L_n}, q> of copies of the Rado graph.

Levels up to the materialize ceiling are filled by one ascending sweep over
the copy's enumeration per level: each member takes the cell of its adjacency
pattern over the lower levels if that cell is still empty, so every q(n, K)
is the least-index member of its cone. Deeper values are produced on demand
above every vertex produced so far, which keeps (L4) exact for all produced
vertices without enumerating a level of size 2^2059.
"""

import itertools
import logging
import threading

from .config import Config
from .exceptions import SearchExhausted, Untagged
from .rado_core import (
    WHOLE_GRAPH,
    Cone,
    compact_witness,
    cone_intersection,
    cone_member,
    adjacent,
    describe_vertex,
    parse_vertex_token,
    sorted_vertices,
    vertex_key,
    vertex_token,
)
from .report import Report

logger = logging.getLogger(__name__)


def level_size(n):
    """m_0 = 1, m_n = 2^(m_0 + ... + m_(n-1))"""
    total, size = 0, 1
    for _ in range(n):
        total += size
        size = 1 << total
    return size


def subsets_in_order(vertices):
    """All subsets of vertices, ordered by bitmask over the sorted vertices."""
    ordered = sorted_vertices(vertices)
    for mask in range(1 << len(ordered)):
        yield frozenset(u for i, u in enumerate(ordered) if (mask >> i) & 1)


class Copy:
    """A copy of R: a cone of R with finitely many vertices removed.

    Cones and cofinite sets are copies; members are enumerated in increasing
    order and memoized.
    """

    def __init__(self, base=WHOLE_GRAPH, removed=()):
        self.base = base
        self.removed = frozenset(removed)
        self._members = []
        self._next_candidate = 0
        self._lock = threading.Lock()

    @property
    def is_identity(self):
        return not self.base.H and not self.removed

    def __contains__(self, v):
        return v not in self.removed and cone_member(v, self.base)

    def vertex(self, i):
        """The i-th member in increasing order."""
        if self.is_identity:
            return i
        with self._lock:
            while len(self._members) <= i:
                v = self._next_candidate
                self._next_candidate += 1
                if v in self:
                    self._members.append(v)
            return self._members[i]

    def members(self, start=0):
        for i in itertools.count(start):
            yield self.vertex(i)

    def to_dict(self):
        return {
            "base": self.base.to_dict(),
            "removed": [vertex_token(v) for v in sorted_vertices(self.removed)],
        }

    @classmethod
    def from_dict(cls, record):
        return cls(
            Cone.from_dict(record["base"]),
            [parse_vertex_token(t) for t in record["removed"]],
        )

    def __eq__(self, other):
        if not isinstance(other, Copy):
            return NotImplemented
        return self.base == other.base and self.removed == other.removed

    def __hash__(self):
        return hash((self.base, self.removed))

    def __repr__(self):
        return "Copy(%s minus %d vertices)" % (self.base, len(self.removed))


def check_copy(copy, depth, bound):
    """Finite extension-property check on the first depth members of copy."""
    report = Report("copy")
    sample = [copy.vertex(i) for i in range(depth)]
    for H in subsets_in_order(sample):
        for K in subsets_in_order(H):
            cone = Cone(H, K)
            for i in range(bound):
                if cone_member(copy.vertex(i), cone):
                    break
            else:
                report.fail(
                    "no member of %s among the first %d copy members" % (cone, bound)
                )
    report.data["checked_members"] = len(sample)
    return report


class Labeling:
    """Lazily materialized labeling of a copy.

    condition, when given, maps (n, K) to a cone that q(n, K) must also lie in.
    """

    def __init__(self, copy, config=None, condition=None, ceiling=None):
        self.copy = copy
        self.config = config or Config()
        self.ceiling = self.config.materialize_ceiling if ceiling is None else ceiling
        self.condition = condition

        # (n, K) -> vertex
        self.qmap = {}
        # vertex -> (n, K)
        self.registry = {}
        self.levels = {}
        # Highest level filled by a full sweep
        self.materialized = -1

        self._below = {}
        self._lock = threading.RLock()

    ############################################################################
    # Tags
    ############################################################################
    def tag(self, v):
        try:
            return self.registry[v]
        except KeyError:
            raise Untagged(v)

    def level_of(self, v):
        return self.tag(v)[0]

    def union_below(self, n):
        """Produced part of L_0 + ... + L_(n-1)."""
        key = (n, len(self.registry))
        cached = self._below.get(n)
        if cached is not None and cached[0] == key:
            return cached[1]
        below = frozenset(v for v, (m, _) in self.registry.items() if m < n)
        self._below[n] = (key, below)
        return below

    def restrict(self, K, n):
        """K intersected with the union of the levels below n."""
        return frozenset(k for k in K if self.level_of(k) < n)

    def level(self, n):
        return sorted_vertices(self.levels.get(n, ()))

    @property
    def top_level(self):
        """Highest level holding a produced vertex."""
        return max(self.levels, default=-1)

    def lookup(self, n, K=()):
        """q(n, K) if it was produced, else None."""
        return self.qmap.get((n, frozenset(K)))

    def _register(self, n, K, v):
        self.qmap[(n, K)] = v
        self.registry[v] = (n, K)
        self.levels.setdefault(n, []).append(v)

    ############################################################################
    # Production
    ############################################################################
    def q(self, n, K=()):
        K = frozenset(K)
        with self._lock:
            # Levels below n must be tagged before K can be checked against them
            self.materialize(min(n, self.ceiling))
            for k in K:
                if self.level_of(k) >= n:
                    raise ValueError(
                        "Vertex %s is at level %d, not below level %d"
                        % (describe_vertex(k), self.level_of(k), n)
                    )
            v = self.qmap.get((n, K))
            if v is None:
                v = self._place(n, K)
            return v

    def materialize(self, n):
        """Fill every level up to n by sweeping the copy."""
        if n > self.ceiling:
            raise ValueError(
                "Level %d is above the materialize ceiling %d" % (n, self.ceiling)
            )
        with self._lock:
            while self.materialized < n:
                self._sweep(self.materialized + 1)
                self.materialized += 1

    def _condition_cone(self, n, K):
        if self.condition is None:
            return None
        return self.condition(n, K)

    def _sweep(self, n):
        below = sorted_vertices(self.union_below(n))
        cells = 1 << len(below)
        bound = self.config.search_bound
        logger.debug(
            "Sweeping level %d: %d cells over %d lower vertices"
            % (n, cells, len(below))
        )

        filled = {}
        examined = 0
        for v in self.copy.members():
            if v in self.registry:
                continue
            examined += 1
            if examined > bound:
                missing = next(m for m in range(cells) if m not in filled)
                raise SearchExhausted(
                    bound,
                    n,
                    (u for i, u in enumerate(below) if (missing >> i) & 1),
                )
            mask = 0
            for i, u in enumerate(below):
                if adjacent(v, u):
                    mask |= 1 << i
            if mask in filled:
                continue
            cond = self._condition_cone(
                n, frozenset(u for i, u in enumerate(below) if (mask >> i) & 1)
            )
            if cond is not None and not cone_member(v, cond):
                continue
            filled[mask] = v
            if len(filled) == cells:
                break

        for mask in sorted(filled):
            K = frozenset(u for i, u in enumerate(below) if (mask >> i) & 1)
            self._register(n, K, filled[mask])
        logger.debug("Level %d filled after %d candidates" % (n, examined))

    def _place(self, n, K):
        # Above the ceiling: a fresh vertex above everything produced so far
        target = cone_intersection(Cone(frozenset(self.registry), K), self.copy.base)
        target = cone_intersection(target, Cone(self.copy.removed, frozenset()))
        cond = self._condition_cone(n, K)
        if cond is not None:
            target = cone_intersection(target, cond)
        if not target:
            raise SearchExhausted(
                self.config.search_bound, n, K, "placement cone is empty"
            )
        v = compact_witness(target)
        self._register(n, K, v)
        logger.debug("Placed q(%d, |K|=%d) = %s" % (n, len(K), describe_vertex(v)))
        return v

    ############################################################################
    # Snapshots
    ############################################################################
    def snapshot(self):
        records = sorted(
            self.registry.items(), key=lambda item: (item[1][0], vertex_key(item[0]))
        )
        return {
            "copy": self.copy.to_dict(),
            "ceiling": self.ceiling,
            "materialized": self.materialized,
            "records": [
                {
                    "n": n,
                    "K": [vertex_token(k) for k in sorted_vertices(K)],
                    "q": vertex_token(v),
                }
                for v, (n, K) in records
            ],
        }

    @classmethod
    def restore(cls, snapshot, config=None, condition=None):
        lab = cls(
            Copy.from_dict(snapshot["copy"]),
            config,
            condition=condition,
            ceiling=snapshot["ceiling"],
        )
        for record in snapshot["records"]:
            lab._register(
                record["n"],
                frozenset(parse_vertex_token(t) for t in record["K"]),
                parse_vertex_token(record["q"]),
            )
        lab.materialized = snapshot["materialized"]
        return lab


def build_labeling(copy, config=None):
    config = config or Config()
    check = check_copy(copy, config.copy_check_depth, config.search_bound)
    if not check.passed:
        raise SearchExhausted(config.search_bound, reason=check.violations[0])
    lab = Labeling(copy, config)
    lab.materialize(0)
    return lab


def tree_leq(a, b, lab):
    """a <=_L b iff m >= n and K' restricted below n equals K''."""
    m, K1 = lab.tag(a)
    n, K2 = lab.tag(b)
    return m >= n and lab.restrict(K1, n) == K2


def cone_of(v, lab):
    n, K = lab.tag(v)
    return Cone(lab.union_below(n), K)


def verify_labeling(lab, depth):
    report = Report("labeling")
    lab.materialize(min(depth, lab.ceiling))

    below = frozenset()
    seen = set()
    sizes = []
    for n in range(depth + 1):
        members = lab.level(n)
        sizes.append(len(members))
        if n <= lab.materialized:
            report.check(
                len(members) == level_size(n),
                "(L3) |L_%d| = %d, expected %d" % (n, len(members), level_size(n)),
            )
        elif members:
            report.note("level %d is only partially produced" % n)
        for v in members:
            report.check(
                v not in seen,
                "(L1) %s appears in two levels" % describe_vertex(v),
            )
            report.check(
                v in lab.copy, "(L1) %s is outside the copy" % describe_vertex(v)
            )
        seen.update(members)

        entries = sorted(
            ((K, v) for (m, K), v in lab.qmap.items() if m == n),
            key=lambda entry: vertex_key(entry[1]),
        )
        values = [v for _, v in entries]
        report.check(
            len(set(values)) == len(values), "(L2) q is not injective on level %d" % n
        )
        report.check(
            set(values) == set(members),
            "(L3) L_%d differs from the values of q(%d, -)" % (n, n),
        )
        for K, v in entries:
            where = "q(%d, {%s}) = %s" % (
                n,
                ",".join(describe_vertex(k) for k in sorted_vertices(K)),
                describe_vertex(v),
            )
            if not report.check(K <= below, "(L2) %s: K is not below level %d" % (where, n)):
                continue
            report.check(
                lab.registry.get(v) == (n, K), "(L2) %s: registry disagrees" % where
            )
            report.check(
                v in lab.copy and cone_member(v, Cone(below, K)),
                "(L4) %s is not in the cone %s" % (where, Cone(below, K)),
            )
        below = below | frozenset(members)

    report.data["sizes"] = sizes
    report.note("(L1) covering of the whole copy is not finitely checkable")
    return report
