import io
import logging
import random
import sys
from timeit import default_timer as timer

import click

from .boolean_identity import ValueMatrix, check_identity, element_str
from .config import Config
from .construction import name_model_from_selector, run_construction, verify_all
from .exceptions import (
    ConfigError,
    GridError,
    RadoLocalizationError,
    SearchExhausted,
    StateFormatError,
    Undecided,
)
from .fusion import avoid_witness_refiner, build_fusion, identity_refiner
from .fuzz_pool import CaseRunner
from .grid_file import read_matrix
from .labeling import Copy, build_labeling, verify_labeling
from .rado_core import (
    DISJOINT,
    H_PART,
    WHOLE_GRAPH,
    Cone,
    cone_intersection,
    cone_member,
    cone_subset,
    classify_vertex,
    describe_set,
    describe_vertex,
    witness,
)
from .report import Report
from .stacktrace import Progress, register_progress_dump_handler
from .state_file import dump_labeling, dump_state, load_state
from .trees import bits_str, delta_density_check, delta_members, random_binary_tree, to_dot

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNDECIDED = 3
EXIT_EXHAUSTED = 4

EMPTY_SET_TOKENS = ("", "∅", "{}")

REFINERS = {"identity": identity_refiner, "avoid-witness": avoid_witness_refiner}

# Fuzzed matrices at most this large are also checked against every binary tree
EXHAUSTIVE_CELLS = 9


class VertexSet(click.ParamType):
    """Comma-separated naturals; '∅' or an empty string is the empty set."""

    name = "vertex-set"

    def convert(self, value, param, ctx):
        if isinstance(value, frozenset):
            return value
        text = value.strip()
        if text in EMPTY_SET_TOKENS:
            return frozenset()
        vertices = set()
        for token in text.split(","):
            token = token.strip()
            if not token.isdigit():
                self.fail("'%s' is not a natural number in '%s'" % (token, value), param, ctx)
            vertices.add(int(token))
        return frozenset(vertices)


VERTEX_SET = VertexSet()


def make_cone(H, K):
    try:
        return Cone(H, K)
    except ValueError as e:
        raise click.UsageError(str(e))


def exit_with(e):
    """Map a pipeline error to its exit status."""
    logger.error(str(e))
    if isinstance(e, Undecided):
        click.echo("status: undecided (%s)" % e)
        sys.exit(EXIT_UNDECIDED)
    if isinstance(e, SearchExhausted):
        click.echo("status: search exhausted (%s)" % e)
        sys.exit(EXIT_EXHAUSTED)
    click.echo("status: failed (%s)" % e)
    sys.exit(EXIT_FAIL)


def finish(report):
    click.echo(report.render())
    if not report.passed:
        for violation in report.violations:
            logger.error(violation)
        sys.exit(EXIT_FAIL)


################################################################################
# Entry point
################################################################################
@click.group()
@click.option(
    "--verbose",
    default=False,
    is_flag=True,
    help="Print extra information about the steps performed",
)
@click.pass_context
def cli(ctx, verbose):
    """Localization machinery for the Rado graph and the matching Boolean law."""
    if sys.version_info < (3, 10):
        raise RuntimeError("Python >= 3.10 is required for rado-localize.")

    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stdout,
        force=True,
    )

    ctx.obj = Progress()
    # Allow operators to see the current step via `kill -SIGUSR1 <pid>`.
    register_progress_dump_handler(ctx.obj)


################################################################################
# Cone calculus
################################################################################
@cli.group()
def rado():
    """Witnesses, partitions and intersections of cones R^H_K."""


@rado.command("witness")
@click.option("--H", "h_set", type=VERTEX_SET, default="", help="Finite vertex set H")
@click.option("--K", "k_set", type=VERTEX_SET, default="", help="Subset K of H")
def rado_witness(h_set, k_set):
    cone = make_cone(h_set, k_set)
    v = witness(cone)
    click.echo(describe_vertex(v))
    click.echo("certificate: %s in %s: %s" % (describe_vertex(v), cone, cone_member(v, cone)))


@rado.command("classify")
@click.option("--v", "vertex", type=click.IntRange(min=0), required=True)
@click.option("--H", "h_set", type=VERTEX_SET, default="", help="Finite vertex set H")
def rado_classify(vertex, h_set):
    part = classify_vertex(vertex, h_set)
    if part is H_PART:
        click.echo("H")
        return
    click.echo("K=%s" % describe_set(part))
    click.echo(
        "certificate: %d in %s: %s"
        % (vertex, Cone(h_set, part), cone_member(vertex, Cone(h_set, part)))
    )


@rado.command("intersect")
@click.option("--H1", "h1", type=VERTEX_SET, default="")
@click.option("--K1", "k1", type=VERTEX_SET, default="")
@click.option("--H2", "h2", type=VERTEX_SET, default="")
@click.option("--K2", "k2", type=VERTEX_SET, default="")
def rado_intersect(h1, k1, h2, k2):
    a, b = make_cone(h1, k1), make_cone(h2, k2)
    c = cone_intersection(a, b)
    if c is DISJOINT:
        click.echo("Disjoint")
        shared = sorted((a.H & b.K) ^ (b.H & a.K))
        click.echo("certificate: H1 and K2 disagree with H2 and K1 on %s" % describe_set(shared))
        return
    click.echo(str(c))
    v = witness(c)
    click.echo(
        "certificate: %s in both: %s"
        % (describe_vertex(v), cone_member(v, a) and cone_member(v, b))
    )


@rado.command("subset")
@click.option("--H1", "h1", type=VERTEX_SET, default="")
@click.option("--K1", "k1", type=VERTEX_SET, default="")
@click.option("--H2", "h2", type=VERTEX_SET, default="")
@click.option("--K2", "k2", type=VERTEX_SET, default="")
def rado_subset(h1, k1, h2, k2):
    click.echo(cone_subset(make_cone(h1, k1), make_cone(h2, k2)))


################################################################################
# Labelings and the dense set
################################################################################
@cli.command()
@click.option("--depth", default=3, type=click.IntRange(0, 3), help="Levels to build and verify")
@click.option(
    "--refiner",
    type=click.Choice(sorted(REFINERS)),
    default="identity",
    help="Refiner applied at every fusion stage",
)
@click.option(
    "--search-bound",
    envvar="RADO_SEARCH_BOUND",
    default=1 << 18,
    type=click.IntRange(min=1),
    help="Copy members a level sweep may examine (default 2^18)",
)
@click.option("--out", type=click.Path(dir_okay=False), help="Write the labeling here")
@click.pass_obj
def labeling(progress, depth, refiner, search_bound, out):
    """Build a labeling of R, fused against a refiner, and verify it."""
    start_time = timer()
    config = Config(search_bound=search_bound, materialize_ceiling=depth)
    try:
        progress.update("labeling: fusion to depth %d" % depth)
        lab, certificate = build_fusion(
            [REFINERS[refiner]] * (depth + 1), WHOLE_GRAPH, depth, config
        )
        progress.update("labeling: verification")
        report = verify_labeling(lab, depth)
        report.extend(certificate.verify(lab))
    except RadoLocalizationError as e:
        exit_with(e)

    logger.info(
        "Labeling complete: %d levels in %f seconds" % (depth + 1, timer() - start_time)
    )
    if out:
        dump_labeling(out, lab, certificate)
    finish(report)


@cli.command()
@click.option("--depth", default=3, type=click.IntRange(min=0), help="Density depth")
@click.option("--count", default=6, type=click.IntRange(min=0), help="Members to list")
def delta(depth, count):
    """List the dense set of binary sequences and check its density."""
    for n, psi in enumerate(delta_members(count), start=1):
        click.echo("psi_%d = %s" % (n, bits_str(psi)))
    finish(delta_density_check(depth))


################################################################################
# Construction
################################################################################
@cli.command()
@click.option("--depth", default=4, type=click.IntRange(min=0), help="Stages to build")
@click.option(
    "--name-model",
    default="encode",
    help="encode, constant:<v> or file:<path> (CSV table n,K,value)",
)
@click.option(
    "--search-bound",
    envvar="RADO_SEARCH_BOUND",
    default=1 << 18,
    type=click.IntRange(min=1),
    help="Copy members a level sweep may examine (default 2^18)",
)
@click.option(
    "--split-window",
    envvar="RADO_SPLIT_WINDOW",
    default=4,
    type=click.IntRange(min=1),
    help="Levels above n searched for a split (default 4)",
)
@click.option("--out", type=click.Path(dir_okay=False), help="Write the state here")
@click.option("--tree-out", type=click.Path(dir_okay=False), help="Write T in DOT form here")
@click.pass_obj
def construct(progress, depth, name_model, search_bound, split_window, out, tree_out):
    """Build the binary tree of copies below a name model and verify every stage."""
    start_time = timer()
    try:
        config = Config(
            depth=depth,
            search_bound=search_bound,
            split_window=split_window,
            name_model=name_model,
        )
        nm = name_model_from_selector(config.name_model)
    except (ConfigError, GridError, OSError) as e:
        raise click.BadParameter(str(e), param_hint="--name-model")

    try:
        progress.update("construct: labeling")
        lab = build_labeling(Copy(), config)
        progress.update("construct: %d stages" % depth)
        s = run_construction(lab, nm, depth, config.split_window)
        progress.update("construct: verification")
        report, T = verify_all(s)
    except RadoLocalizationError as e:
        exit_with(e)

    if out:
        dump_state(out, s, config, T)
    if tree_out:
        with io.open(tree_out, "wt") as outfile:
            outfile.write(to_dot(T))
    logger.info(
        "Verification complete: %d stages in %f seconds" % (depth, timer() - start_time)
    )
    finish(report)


@cli.command()
@click.argument("state", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def replay(progress, state):
    """Re-verify a stored state; prints the report construct printed."""
    try:
        s, _, stored_tree = load_state(state)
    except (StateFormatError, ConfigError, GridError, OSError) as e:
        raise click.BadParameter(str(e), param_hint="STATE")

    progress.update("replay: verification")
    try:
        report, T = verify_all(s)
    except RadoLocalizationError as e:
        exit_with(e)

    if T != stored_tree:
        click.echo(report.render())
        logger.error("Replayed tree differs from the stored tree")
        sys.exit(EXIT_FAIL)
    finish(report)


################################################################################
# Boolean identity
################################################################################
@cli.command()
@click.option("--atoms", default=3, type=click.IntRange(min=1), help="Atoms of the algebra")
@click.option("--rows", default=3, type=click.IntRange(min=1), help="Matrix rows N")
@click.option("--cols", default=3, type=click.IntRange(min=1), help="Matrix columns M")
@click.option("--cases", default=100, type=click.IntRange(min=0), help="Fuzz cases")
@click.option("--seed", default=0, help="Seed of the fuzz cases")
@click.option("--trees", default=10, type=click.IntRange(min=0), help="Sampled trees per case")
@click.option("--jobs", default=1, type=click.IntRange(min=1), help="Worker threads")
@click.option(
    "--matrix",
    type=click.Path(exists=True, dir_okay=False),
    help="Check this matrix (CSV of atom bitmasks) instead of fuzzing",
)
@click.pass_obj
def identity(progress, atoms, rows, cols, cases, seed, trees, jobs, matrix):
    """Check the lattice law on fuzzed or given value matrices."""
    if matrix:
        try:
            mat = ValueMatrix(*read_matrix(matrix))
        except GridError as e:
            raise click.BadParameter(str(e), param_hint="--matrix")
        rng = random.Random(seed)
        sample = [random_binary_tree(rng, mat.rows, mat.cols) for _ in range(trees)]
        finish(
            check_identity(
                mat, sample, exhaustive=mat.rows * mat.cols <= EXHAUSTIVE_CELLS
            )
        )
        return

    start_time = timer()
    progress.update("identity: %d cases" % cases)
    runner = CaseRunner(
        Config(seed=seed, jobs=jobs),
        atoms,
        rows,
        cols,
        trees=trees,
        exhaustive=atoms <= 2 and rows * cols <= EXHAUSTIVE_CELLS,
    )
    runner.submit(cases)
    runner.wait_pool()
    runner.report_completion(timer() - start_time)

    report = Report("identity")
    report.data["cases"] = runner.cases_run
    report.data["failed"] = runner.cases_failed
    report.data["shape"] = "%dx%d over %d atoms" % (rows, cols, atoms)
    for i, mat, case_report in runner.counterexamples:
        report.fail(
            "case %d: %s; matrix %s"
            % (
                i,
                "; ".join(case_report.violations),
                [[element_str(b, atoms) for b in row] for row in mat.entries],
            )
        )
    finish(report)


if __name__ == "__main__":
    cli()
