"""The recursive construction of a binary reversed tree inside a labeled copy.

Stage n of the recursion fixes, for every binary sequence s of length n-1 and
j in {0, 1}, the split level n_s and the sets K_{s^j}; the tree vertex of s^j
is f(s^j) = q(n_s, K_{s^j}). The vertices d_n = f(psi_n) span the copy D, and
F maps every tree vertex to the sequence of name values along its cone.
"""

import itertools
import json
import logging
from dataclasses import dataclass, field
from timeit import default_timer as timer

from .exceptions import ConfigError, DepthInsufficient, Undecided
from .grid_file import read_name_table
from .labeling import cone_of, tree_leq, verify_labeling
from .rado_core import (
    DISJOINT,
    Cone,
    adjacent,
    cone_intersection,
    cone_member,
    describe_natural,
    describe_set,
    describe_vertex,
    sorted_vertices,
    vertex_token,
)
from .report import Report
from .trees import (
    FiniteTree,
    binary_levels,
    bits_str,
    check_binary,
    delta_element,
    is_prefix,
    lex_level,
    upward_closure,
)

logger = logging.getLogger(__name__)


################################################################################
# Name models
################################################################################
class NameModel:
    """Assignment (n, K) -> m^n_K of natural numbers to labeled cones"""

    selector = None

    def value(self, n, K):
        raise NotImplementedError


class EncodeNameModel(NameModel):
    # Injective: distinct (n, K) give distinct byte strings
    selector = "encode"

    def value(self, n, K):
        payload = json.dumps(
            [n, [vertex_token(k) for k in sorted_vertices(K)]], separators=(",", ":")
        )
        return int.from_bytes(payload.encode(), "big")


class ConstantNameModel(NameModel):
    def __init__(self, constant):
        if constant < 0:
            raise ConfigError("Name values are naturals, got %d" % constant)
        self.constant = constant
        self.selector = "constant:%d" % constant

    def value(self, n, K):
        return self.constant


class TableNameModel(NameModel):
    def __init__(self, path):
        self.path = path
        self.selector = "file:%s" % path
        self.table, self.default = read_name_table(path)

    def value(self, n, K):
        return self.table.get((n, frozenset(K)), self.default)


def encode_name_model():
    return EncodeNameModel()


def name_model_from_selector(selector):
    kind, _, argument = selector.partition(":")
    if kind == "encode" and not argument:
        return EncodeNameModel()
    if kind == "constant":
        try:
            return ConstantNameModel(int(argument))
        except ValueError:
            raise ConfigError("Invalid constant name model '%s'" % selector)
    if kind == "file" and argument:
        return TableNameModel(argument)
    raise ConfigError(
        "Specified invalid name model '%s', expected encode, constant:<v> or file:<path>"
        % selector
    )


################################################################################
# Splits
################################################################################
def find_split(n, K, nm, lab, window):
    """Find n1 > n and K' != K'' below q(n, K) whose names differ at n1.

    K' is K itself; K'' adds one tagged vertex of level n..n1-1, trying
    q(n, K) first.
    """
    K = frozenset(K)
    for k in K:
        if lab.level_of(k) >= n:
            raise ValueError(
                "Vertex %s is not below level %d" % (describe_vertex(k), n)
            )

    head = lab.q(n, K)
    for n1 in range(n + 1, n + window + 1):
        lab.q(n1 - 1, K)
        base = nm.value(n1, K)
        candidates = [head] + [
            v
            for v in sorted_vertices(lab.union_below(n1))
            if v != head and lab.level_of(v) >= n
        ]
        for c in candidates:
            if nm.value(n1, K | {c}) != base:
                logger.debug(
                    "Split below q(%d, %s) at level %d by %s"
                    % (n, describe_set(K), n1, describe_vertex(c))
                )
                return n1, K, K | {c}
    raise Undecided(n, K)


################################################################################
# Construction
################################################################################
@dataclass
class ConstructionState:
    lab: object
    nm: NameModel
    depth: int = 0
    # stage -> vertices in lexicographic order of their sequences
    Lam: dict = field(default_factory=dict)
    # binary sequence -> vertex
    f: dict = field(default_factory=dict)
    l: dict = field(default_factory=dict)
    d: dict = field(default_factory=dict)
    Phi: dict = field(default_factory=dict)
    n_phi: dict = field(default_factory=dict)
    K_phi: dict = field(default_factory=dict)

    @property
    def D(self):
        return [self.d[n] for n in range(1, self.depth + 1)]

    def vertices(self):
        """Every tree vertex, stage by stage."""
        return [v for n in range(self.depth + 1) for v in self.Lam[n]]


def _split_condition(s, sigma, n):
    K = s.K_phi[sigma]
    if sigma[-1] == 1:
        K = K | {s.d[n]}
    return K


def _frontier(s, n, place):
    out = []
    for phi in lex_level(n - 1):
        out.append(place(s.l[n], s.K_phi[phi + (0,)]))
        out.append(place(s.l[n], s.K_phi[phi + (1,)] | {s.d[n]}))
    return out


def _first_stage(s, window):
    lab = s.lab
    n_root, K0, K1 = find_split(0, frozenset(), s.nm, lab, window)
    s.n_phi[()] = n_root
    s.K_phi[(0,)] = K0
    s.K_phi[(1,)] = K1
    s.f[(0,)] = lab.q(n_root, K0)
    s.f[(1,)] = lab.q(n_root, K1)
    s.Lam[1] = [s.f[(0,)], s.f[(1,)]]
    s.l[1] = n_root + 1
    s.d[1] = s.f[delta_element(1)]
    s.Phi[1] = _frontier(s, 1, lab.q)
    s.depth = 1


def _next_stage(s, n, window):
    lab = s.lab
    psi = delta_element(n + 1)
    distinguished = psi[:n]

    splits = {}
    for sigma in lex_level(n):
        if sigma != distinguished:
            splits[sigma] = find_split(
                s.l[n], _split_condition(s, sigma, n), s.nm, lab, window
            )
    n_star = max(split[0] for split in splits.values())
    assert n_star > s.l[n], "n* = %d is not above l_%d = %d" % (n_star, n, s.l[n])
    splits[distinguished] = find_split(
        n_star, _split_condition(s, distinguished, n), s.nm, lab, window
    )

    for sigma in lex_level(n):
        n1, K0, K1 = splits[sigma]
        s.n_phi[sigma] = n1
        s.K_phi[sigma + (0,)] = K0
        s.K_phi[sigma + (1,)] = K1
        s.f[sigma + (0,)] = lab.q(n1, K0)
        s.f[sigma + (1,)] = lab.q(n1, K1)

    s.Lam[n + 1] = [s.f[seq] for seq in lex_level(n + 1)]
    s.l[n + 1] = s.n_phi[distinguished] + 1
    s.d[n + 1] = s.f[psi]
    s.Phi[n + 1] = _frontier(s, n + 1, lab.q)
    s.depth = n + 1


def run_construction(lab, nm, depth, window=None):
    if depth < 0:
        raise ValueError("Construction depth must be non-negative, got %d" % depth)
    window = window or lab.config.split_window
    start_time = timer()

    s = ConstructionState(lab, nm)
    root = lab.q(0, frozenset())
    s.Lam[0] = [root]
    s.f[()] = root
    s.l[0] = 0
    s.K_phi[()] = frozenset()

    for n in range(depth):
        if n == 0:
            _first_stage(s, window)
        else:
            _next_stage(s, n, window)
        logger.debug(
            "Stage %d built: l = %d, d = %s" % (s.depth, s.l[s.depth], describe_vertex(s.d[s.depth]))
        )

    logger.info(
        "Construction complete: %d stages, %d tree vertices in %f seconds"
        % (s.depth, len(s.f), timer() - start_time)
    )
    return s


################################################################################
# Verification
################################################################################
def _leq(a, b, lab):
    # Vertices the labeling never produced are below nothing
    if a not in lab.registry or b not in lab.registry:
        return False
    return tree_leq(a, b, lab)


def _strictly_below(a, b, lab):
    return a != b and _leq(a, b, lab)


def _level_violations(lab, K, n):
    bad = []
    for k in K:
        tag = lab.registry.get(k)
        if tag is None or tag[0] >= n:
            bad.append(k)
    return bad


def _order_violations(s):
    lab = s.lab
    seqs = binary_levels(s.depth)
    out = []
    for a, b in itertools.product(seqs, repeat=2):
        va, vb = s.f.get(a), s.f.get(b)
        if va is None or vb is None:
            continue
        if _leq(va, vb, lab) != is_prefix(b, a):
            out.append((max(len(a), len(b)), a, b))
    return out


def verify_state(s):
    report = Report("state")
    lab, nm = s.lab, s.nm
    lookup = lab.lookup

    report.check(s.f.get(()) == lookup(0, ()), "f(root) is not q(0, {})")
    report.check(s.l.get(0) == 0, "l_0 is not 0")
    report.check(not s.K_phi.get((), frozenset()), "K of the root is not empty")
    report.check(
        set(s.f) == set(binary_levels(s.depth)),
        "(viii) f is not defined exactly on the sequences of length <= %d" % s.depth,
    )
    order = _order_violations(s)

    for n in range(1, s.depth + 1):
        forward = n + 1 <= s.depth
        anchor = delta_element(n)[: n - 1]
        for phi in lex_level(n - 1):
            where = "stage %d, phi '%s'" % (n, bits_str(phi))
            n_phi = s.n_phi[phi]
            for j in (0, 1):
                K = s.K_phi[phi + (j,)]
                bad = _level_violations(lab, K, n_phi)
                report.check(
                    not bad,
                    "(i) %s: K_%d has %s outside levels < %d"
                    % (where, j, describe_set(bad), n_phi),
                )

            # (ii)
            report.check(
                n_phi <= s.n_phi[anchor] < s.l[n] == s.n_phi[anchor] + 1,
                "(ii) %s: n_phi = %d, n_anchor = %d, l = %d"
                % (where, n_phi, s.n_phi[anchor], s.l[n]),
            )
            if forward:
                for j in (0, 1):
                    report.check(
                        s.l[n] < s.n_phi[phi + (j,)],
                        "(ii) %s: l = %d is not below n_{phi^%d} = %d"
                        % (where, s.l[n], j, s.n_phi[phi + (j,)]),
                    )
                    # (iii) and (iv)
                    top0 = lookup(s.l[n], s.K_phi[phi + (0,)])
                    top1 = lookup(s.l[n], s.K_phi[phi + (1,)] | {s.d[n]})
                    report.check(
                        _strictly_below(s.f[phi + (0, j)], top0, lab),
                        "(iii) %s: f(phi^0^%d) is not strictly below its frontier vertex"
                        % (where, j),
                    )
                    report.check(
                        _strictly_below(s.f[phi + (1, j)], top1, lab),
                        "(iv) %s: f(phi^1^%d) is not strictly below its frontier vertex"
                        % (where, j),
                    )

            report.check(
                nm.value(n_phi, s.K_phi[phi + (0,)])
                != nm.value(n_phi, s.K_phi[phi + (1,)]),
                "(v) %s: names of the two successors agree at level %d" % (where, n_phi),
            )

            for j in (0, 1):
                report.check(
                    s.f[phi + (j,)] == lookup(n_phi, s.K_phi[phi + (j,)]),
                    "(vii) %s: f(phi^%d) is not q(n_phi, K_{phi^%d})" % (where, j, j),
                )

        # (vi)
        expected = [lookup(s.n_phi[seq[:-1]], s.K_phi[seq]) for seq in lex_level(n)]
        report.check(
            s.Lam[n] == expected, "(vi) Lambda_%d is not the set of its q-values" % n
        )

        for _, a, b in [o for o in order if o[0] == n]:
            report.fail(
                "(vii) stage %d: order between f('%s') and f('%s') is wrong"
                % (n, bits_str(a), bits_str(b))
            )

        # (ix)
        report.check(
            s.d.get(n) == s.f.get(delta_element(n)),
            "(ix) d_%d is not f(psi_%d)" % (n, n),
        )

        # (x)
        d_tag = lab.registry.get(s.d[n])
        report.check(
            d_tag is not None and d_tag[0] < s.l[n],
            "(x) d_%d is not below level l_%d" % (n, n),
        )
        frontier = _frontier(s, n, lookup)
        report.check(
            s.Phi.get(n) == frontier and None not in frontier,
            "(x) Phi_%d does not match its definition" % n,
        )

    report.data["stages"] = s.depth
    if s.depth:
        report.data["l"] = [s.l[n] for n in range(s.depth + 1)]
    return report


def check_adjacency_laws(s):
    report = Report("adjacency")
    checked = 0

    # f(p^k^j) ~ d_n iff k = 1
    for n in range(1, s.depth):
        for p in lex_level(n - 1):
            for k, j in itertools.product((0, 1), repeat=2):
                seq = p + (k, j)
                v = s.f[seq]
                checked += 1
                report.check(
                    adjacent(v, s.d[n]) == (k == 1),
                    "f('%s') ~ d_%d is %s" % (bits_str(seq), n, adjacent(v, s.d[n])),
                )
                report.check(
                    (s.d[n] in s.K_phi[seq]) == (k == 1),
                    "membership of d_%d in K_'%s' disagrees with its bit"
                    % (n, bits_str(seq)),
                )

    # f(phi^j) ~ d_{k+1} iff phi(k) = 1
    for phi in binary_levels(s.depth - 1):
        for j in (0, 1):
            v = s.f[phi + (j,)]
            for k in range(len(phi)):
                checked += 1
                report.check(
                    adjacent(v, s.d[k + 1]) == (phi[k] == 1),
                    "f('%s') ~ d_%d disagrees with bit %d"
                    % (bits_str(phi + (j,)), k + 1, k),
                )

    report.data["instances"] = checked
    return report


def check_isomorphism(s):
    report = Report("isomorphism")
    image = [s.f[seq] for seq in binary_levels(s.depth)]
    report.check(len(set(image)) == len(image), "f is not injective")
    report.check(
        set(image) == set(s.vertices()),
        "f is not onto the union of the Lambda levels",
    )
    for _, a, b in _order_violations(s):
        report.fail(
            "f('%s') <= f('%s') disagrees with the sequence order"
            % (bits_str(a), bits_str(b))
        )
    for n in range(1, s.depth + 1):
        report.check(
            s.d[n] == s.f[delta_element(n)], "d_%d is not the image of psi_%d" % (n, n)
        )
    report.data["vertices"] = len(image)
    return report


def extract_D(s):
    report = Report("D")
    D = s.D
    report.check(len(set(D)) == len(D), "D has repeated vertices")
    for n in range(1, s.depth + 1):
        report.check(s.d[n] == s.f[delta_element(n)], "d_%d is not f(psi_%d)" % (n, n))

    uncovered = 0
    for seq in binary_levels(s.depth):
        below = [n for n in range(1, s.depth + 1) if is_prefix(seq, delta_element(n))]
        if not below:
            uncovered += 1
            continue
        for n in below:
            report.check(
                _leq(s.d[n], s.f[seq], s.lab),
                "d_%d is not below f('%s')" % (n, bits_str(seq)),
            )
    if uncovered:
        report.note("%d tree vertices have no d below them at this depth" % uncovered)
    report.data["size"] = len(D)
    return D, report


@dataclass(frozen=True)
class ConeWitness:
    vertex: object
    q: object
    phi: tuple
    index: object
    certified: bool


def index_cones(indices):
    """Every pair K <= H of index tuples drawn from indices."""
    indices = list(indices)
    for size in range(len(indices) + 1):
        for H in itertools.combinations(indices, size):
            for r in range(len(H) + 1):
                for K in itertools.combinations(H, r):
                    yield H, K


def cone_witness_in_D(s, H, K):
    """A vertex of the tree in R^H_K for K <= H <= D, built from the bits of K."""
    H, K = frozenset(H), frozenset(K)
    if not K <= H:
        raise ValueError("K is not a subset of H")
    index_of = {d: n for n, d in s.d.items()}
    missing = [h for h in H if h not in index_of]
    if missing:
        raise ValueError("%s not in D" % describe_set(missing))

    m = max((index_of[h] for h in H), default=0)
    if m + 1 > s.depth:
        raise DepthInsufficient(m + 1, s.depth)
    selected = {index_of[k] for k in K}
    phi = tuple(1 if k + 1 in selected else 0 for k in range(m))
    q = s.f[phi + (0,)]

    index = next(
        (n for n in sorted(s.d) if _leq(s.d[n], q, s.lab)),
        None,
    )
    vertex = q if index is None else s.d[index]
    return ConeWitness(vertex, q, phi, index, cone_member(vertex, Cone(H, K)))


def check_cone_antichain(cones, residue, name="antichain"):
    """cones: (label, Cone) pairs; residue: vertices that must each lie in exactly one."""
    report = Report(name)
    for (a, ca), (b, cb) in itertools.combinations(cones, 2):
        report.check(
            cone_intersection(ca, cb) is DISJOINT,
            "cones of %s and %s intersect" % (a, b),
        )
    for v in residue:
        hits = [label for label, c in cones if cone_member(v, c)]
        report.check(
            len(hits) == 1,
            "%s lies in %d antichain cones" % (describe_vertex(v), len(hits)),
        )
    report.data["residue"] = len(residue)
    return report


def check_antichain(s, n):
    if not 0 <= n <= s.depth:
        raise ValueError("Stage %d was not built" % n)
    cones = [
        ("f('%s')" % bits_str(seq), cone_of(s.f[seq], s.lab)) for seq in lex_level(n)
    ]
    residue = [v for m in range(n + 1, s.depth + 1) for v in s.Lam[m]]
    return check_cone_antichain(cones, residue, "antichain(%d)" % n)


def check_local_copies(s):
    """Below each tree vertex, the members of D there realize every cone R^H_K."""
    report = Report("local copies")
    checked = skipped = 0
    for sigma in binary_levels(s.depth):
        if not sigma:
            continue
        below = [
            k
            for k in range(len(sigma) + 1, s.depth + 1)
            if is_prefix(sigma, delta_element(k))
        ]
        for H, F in index_cones(below):
            # theta(k-1) = 1 exactly for the members of F
            length = max(H + (len(sigma),))
            if length + 1 > s.depth:
                skipped += 1
                continue
            theta = sigma + tuple(
                1 if i + 1 in F else 0 for i in range(len(sigma), length)
            )
            cone = Cone({s.d[k] for k in H}, {s.d[k] for k in F})
            for r in (0, 1):
                q = s.f[theta + (r,)]
                checked += 1
                report.check(
                    cone_member(q, cone) and _strictly_below(q, s.f[sigma], s.lab),
                    "f('%s') is not a member of %s below f('%s')"
                    % (bits_str(theta + (r,)), cone, bits_str(sigma)),
                )
    report.data["checked"] = checked
    if skipped:
        report.note("%d cases need deeper stages" % skipped)
    return report


def embed_F(s):
    report = Report("F")
    lab, nm = s.lab, s.nm
    F = {s.f[()]: ()}
    for seq in binary_levels(s.depth):
        if not seq:
            continue
        n_phi = s.n_phi[seq[:-1]]
        K = s.K_phi[seq]
        F[s.f[seq]] = tuple(nm.value(k, lab.restrict(K, k)) for k in range(n_phi + 1))
        report.check(
            len(F[s.f[seq]]) == n_phi + 1,
            "F(f('%s')) has length %d" % (bits_str(seq), len(F[s.f[seq]])),
        )

    values = list(F.values())
    report.check(len(set(values)) == len(values), "F is not injective")
    for a, b in itertools.product(F, repeat=2):
        if _leq(a, b, lab) != is_prefix(F[b], F[a]):
            report.fail(
                "order between %s and %s is not preserved by F"
                % (describe_vertex(a), describe_vertex(b))
            )

    T = upward_closure(values)
    report.check(check_binary(T), "upward closure of the F-image is not binary")
    report.data["tree_nodes"] = len(T)
    report.data["tree_height"] = T.height
    return F, T, report


def localize_range(s):
    """Every n for which some built stage n_0 has n < l_{n_0 - 1}."""
    if s.depth < 1:
        return range(1)
    return range(max(1, s.l[s.depth - 1]))


def localize_check(s, T, nm, n):
    report = Report("localize(%d)" % n)
    nodes = T.nodes if isinstance(T, FiniteTree) else frozenset(T)
    if n == 0:
        report.check(() in nodes, "T has no root")
        return report

    n0 = next((m for m in range(1, s.depth + 2) if n < s.l.get(m - 1, -1)), None)
    if n0 is None or n0 > s.depth:
        raise DepthInsufficient(s.depth + 1 if n0 is None else n0, s.depth)

    for phi in lex_level(n0 - 1):
        for j in (0, 1):
            K = s.K_phi[phi + (j,)]
            seq = tuple(nm.value(k, s.lab.restrict(K, k)) for k in range(n))
            full = tuple(
                nm.value(k, s.lab.restrict(K, k)) for k in range(s.n_phi[phi] + 1)
            )
            report.check(
                all(seq[:i] in nodes for i in range(n + 1)),
                "values along f('%s') leave T" % bits_str(phi + (j,)),
            )
            report.check(
                is_prefix(seq, full),
                "values along f('%s') are not a prefix of its F-image"
                % bits_str(phi + (j,)),
            )
    report.data["stage"] = n0
    return report


def verify_all(s):
    """Run every verifier over a built state; the report depends only on the state."""
    report = Report("construct")
    report.extend(verify_labeling(s.lab, s.lab.top_level))
    report.extend(verify_state(s))
    report.extend(check_adjacency_laws(s))
    report.extend(check_isomorphism(s))
    _, d_report = extract_D(s)
    report.extend(d_report)
    report.extend(check_local_copies(s))

    F, T, f_report = embed_F(s)
    report.extend(f_report)
    for n in localize_range(s):
        report.extend(localize_check(s, T, s.nm, n))
    for n in range(s.depth + 1):
        report.extend(check_antichain(s, n))

    witnesses = Report("cone witnesses")
    cases = list(index_cones(range(1, s.depth))) if s.depth else []
    for H, K in cases:
        w = cone_witness_in_D(s, {s.d[i] for i in H}, {s.d[i] for i in K})
        witnesses.check(
            w.certified,
            "no certified witness for H = %s, K = %s" % (list(H), list(K)),
        )
    witnesses.data["cases"] = len(cases)
    report.extend(witnesses)

    report.data["D"] = [describe_vertex(d) for d in s.D]
    report.data["F_root_children"] = [
        [describe_natural(x) for x in F[s.f[(j,)]]] for j in (0, 1) if s.depth
    ]
    return report, T
