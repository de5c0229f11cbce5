"""Stage-wise fusion of labeled copies against cone refiners.

At stage n every K below level n gets an input cone: the cell R^{U_n}_K of
the base, cut down by the certificate its parent cell received at stage n-1.
refiners[n] maps that input to a sub-cone, which becomes the certificate of
(n, K). Level n is then swept with the certificates as side conditions, so
q(n, K) and every later descendant of it stay inside the certificate.
"""

import logging
from timeit import default_timer as timer
from typing import Callable, Sequence

from .config import Config
from .exceptions import RefinerFailure
from .labeling import Copy, Labeling, subsets_in_order
from .rado_core import (
    DISJOINT,
    Cone,
    cone_intersection,
    cone_member,
    cone_subset,
    describe_vertex,
    parse_vertex_token,
    sorted_vertices,
    vertex_token,
    witness,
)
from .report import Report

logger = logging.getLogger(__name__)

# (input cone, stage) -> certified sub-cone
Refiner = Callable[[Cone, int], Cone]

# Level 4 has 2^2059 cells to refine
MAX_FUSION_DEPTH = 3


def identity_refiner(cone, n):
    return cone


def avoid_witness_refiner(cone, n):
    """Forces the fusion to avoid the canonical witness of every input cone."""
    return Cone(cone.H | {witness(cone)}, cone.K)


class FusionCertificate:
    def __init__(self, base, depth):
        self.base = base
        self.depth = depth
        # (n, K) -> refiner input / refiner output
        self.inputs = {}
        self.cones = {}

    def cone(self, n, K, lab):
        """Certificate governing q(n, K); cells below the certified depth inherit."""
        if n > self.depth:
            return self.cones[(self.depth, lab.restrict(K, self.depth))]
        return self.cones[(n, frozenset(K))]

    def labeled_cone(self, n, K, lab):
        cert = self.cones[(n, frozenset(K))]
        return Cone(lab.union_below(n) | cert.H, frozenset(K) | cert.K)

    def verify(self, lab):
        report = Report("fusion")
        for (n, K), cert in sorted(
            self.cones.items(), key=lambda item: (item[0][0], len(item[0][1]))
        ):
            where = "(%d, {%s})" % (
                n,
                ",".join(describe_vertex(k) for k in sorted_vertices(K)),
            )
            report.check(
                cone_subset(cert, self.inputs[(n, K)]),
                "certificate %s is not below its refiner input" % where,
            )
            q = lab.lookup(n, K)
            if not report.check(q is not None, "q%s was never produced" % where):
                continue
            report.check(
                cone_subset(self.labeled_cone(n, K, lab), cert),
                "labeled cone of q%s is not inside its certificate" % where,
            )

        # Every produced vertex lies in the certificates of all its ancestors
        for v, (n, K) in lab.registry.items():
            for m in range(min(n, self.depth) + 1):
                key = (m, lab.restrict(K, m))
                cert = self.cones.get(key)
                if cert is not None and not cone_member(v, cert):
                    report.fail(
                        "%s lies below q(%d, -) but outside its certificate %s"
                        % (describe_vertex(v), m, cert)
                    )
        report.data["certificates"] = len(self.cones)
        return report

    def to_dict(self):
        return {
            "base": self.base.to_dict(),
            "depth": self.depth,
            "records": [
                {
                    "n": n,
                    "K": [vertex_token(k) for k in sorted_vertices(K)],
                    "input": self.inputs[(n, K)].to_dict(),
                    "cone": cone.to_dict(),
                }
                for (n, K), cone in sorted(
                    self.cones.items(), key=lambda item: (item[0][0], len(item[0][1]))
                )
            ],
        }

    @classmethod
    def from_dict(cls, record):
        cert = cls(Cone.from_dict(record["base"]), record["depth"])
        for entry in record["records"]:
            key = (entry["n"], frozenset(parse_vertex_token(t) for t in entry["K"]))
            cert.inputs[key] = Cone.from_dict(entry["input"])
            cert.cones[key] = Cone.from_dict(entry["cone"])
        return cert


def build_fusion(refiners: Sequence[Refiner], base, depth, config=None):
    if not 0 <= depth <= MAX_FUSION_DEPTH:
        raise ValueError(
            "Fusion depth must be between 0 and %d, got %d" % (MAX_FUSION_DEPTH, depth)
        )
    if len(refiners) <= depth:
        raise ValueError(
            "Fusion to depth %d needs %d refiners, got %d"
            % (depth, depth + 1, len(refiners))
        )
    config = config or Config()
    start_time = timer()

    cert = FusionCertificate(base, depth)
    lab = Labeling(
        Copy(base),
        config,
        condition=lambda n, K: cert.cone(n, K, lab),
        ceiling=depth,
    )

    for n in range(depth + 1):
        below = lab.union_below(n)
        logger.debug("Fusion stage %d: refining %d cells" % (n, 1 << len(below)))
        for K in subsets_in_order(below):
            cell = Cone(below | base.H, K | base.K)
            if n == 0:
                parent = base
            else:
                parent = cert.cones[(n - 1, lab.restrict(K, n - 1))]
            given = cone_intersection(cell, parent)
            if given is DISJOINT:
                raise RefinerFailure(n, K, given)
            refined = refiners[n](given, n)
            if not isinstance(refined, Cone) or not cone_subset(refined, given):
                raise RefinerFailure(n, K, refined)
            cert.inputs[(n, K)] = given
            cert.cones[(n, K)] = refined
        lab.materialize(n)

    logger.info(
        "Fusion complete: %d levels, %d certificates in %f seconds"
        % (depth + 1, len(cert.cones), timer() - start_time)
    )
    return lab, cert
