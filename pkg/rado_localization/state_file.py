"""Versioned JSON files for construction states and labelings."""

import io
import json
import logging

from .config import Config
from .construction import ConstructionState, name_model_from_selector
from .exceptions import ConfigError, GridError, StateFormatError
from .fusion import FusionCertificate
from .labeling import Labeling
from .rado_core import parse_vertex_token, sorted_vertices, vertex_token
from .trees import bits_str, lex_level, parse_bits, tree_from_records, tree_to_records

logger = logging.getLogger(__name__)

STATE_FORMAT = "rado-localization/state@1"
LABELING_FORMAT = "rado-localization/labeling@1"


def _tokens(vertices):
    return [vertex_token(v) for v in vertices]


def _vertex_set(tokens):
    return frozenset(parse_vertex_token(t) for t in tokens)


def stages_to_dict(s):
    return {
        "depth": s.depth,
        "l": [s.l[n] for n in range(s.depth + 1)],
        "d": _tokens(s.D),
        "Lambda": [_tokens(s.Lam[n]) for n in range(s.depth + 1)],
        "Phi": [_tokens(s.Phi[n]) for n in range(1, s.depth + 1)],
        "f": {bits_str(seq): vertex_token(v) for seq, v in s.f.items()},
        "n_phi": {bits_str(seq): n for seq, n in s.n_phi.items()},
        "K_phi": {
            bits_str(seq): _tokens(sorted_vertices(K)) for seq, K in s.K_phi.items()
        },
    }


def stages_from_dict(record, lab, nm):
    s = ConstructionState(lab, nm, depth=record["depth"])
    s.l = dict(enumerate(record["l"]))
    s.d = {n: parse_vertex_token(t) for n, t in enumerate(record["d"], start=1)}
    s.Lam = {
        n: [parse_vertex_token(t) for t in tokens]
        for n, tokens in enumerate(record["Lambda"])
    }
    s.Phi = {
        n: [parse_vertex_token(t) for t in tokens]
        for n, tokens in enumerate(record["Phi"], start=1)
    }
    s.f = {parse_bits(k): parse_vertex_token(t) for k, t in record["f"].items()}
    s.n_phi = {parse_bits(k): n for k, n in record["n_phi"].items()}
    s.K_phi = {parse_bits(k): _vertex_set(tokens) for k, tokens in record["K_phi"].items()}
    if len(s.l) != s.depth + 1 or len(s.Lam) != s.depth + 1:
        raise StateFormatError("Stage tables do not match depth %d" % s.depth)
    for seq in lex_level(s.depth):
        if seq not in s.f:
            raise StateFormatError("f is missing '%s'" % bits_str(seq))
    return s


def _write(path, record):
    with io.open(path, "wt") as outfile:
        json.dump(record, outfile, sort_keys=True, indent=1)
        outfile.write("\n")


def _read(path, expected_format):
    try:
        with io.open(path, "rt") as infile:
            record = json.load(infile)
    except json.JSONDecodeError as e:
        raise StateFormatError("%s:%d %s" % (path, e.lineno, e.msg))
    if not isinstance(record, dict) or record.get("format") != expected_format:
        raise StateFormatError(
            "%s: Expected format '%s', encountered '%s'"
            % (path, expected_format, record.get("format") if isinstance(record, dict) else None)
        )
    return record


def dump_state(path, s, config, tree):
    _write(
        path,
        {
            "format": STATE_FORMAT,
            "config": config.to_dict(),
            "labeling": s.lab.snapshot(),
            "stages": stages_to_dict(s),
            "tree": tree_to_records(tree),
        },
    )
    logger.debug("Wrote %d-stage state to '%s'" % (s.depth, path))


def load_state(path):
    """Returns (state, config, stored tree)."""
    record = _read(path, STATE_FORMAT)
    try:
        config = Config(**record["config"])
        lab = Labeling.restore(record["labeling"], config)
        nm = name_model_from_selector(config.name_model)
        s = stages_from_dict(record["stages"], lab, nm)
        tree = tree_from_records(record["tree"])
    except (ConfigError, GridError) as e:
        raise StateFormatError("%s: %s" % (path, e))
    except (KeyError, TypeError, ValueError) as e:
        raise StateFormatError("%s: Malformed state (%s: %s)" % (path, type(e).__name__, e))
    logger.debug("Loaded %d-stage state from '%s'" % (s.depth, path))
    return s, config, tree


def dump_labeling(path, lab, certificate=None):
    _write(
        path,
        {
            "format": LABELING_FORMAT,
            "labeling": lab.snapshot(),
            "certificate": certificate.to_dict() if certificate else None,
        },
    )


def load_labeling(path, config=None):
    """Returns (labeling, certificate or None)."""
    record = _read(path, LABELING_FORMAT)
    try:
        lab = Labeling.restore(record["labeling"], config)
        cert = record["certificate"]
        certificate = FusionCertificate.from_dict(cert) if cert else None
    except (KeyError, TypeError, ValueError) as e:
        raise StateFormatError("%s: Malformed labeling (%s: %s)" % (path, type(e).__name__, e))
    return lab, certificate
