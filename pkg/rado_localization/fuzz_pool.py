import logging
import random

from pathos.pools import ThreadPool as Pool

from .boolean_identity import check_identity, random_matrix
from .trees import random_binary_tree

logger = logging.getLogger(__name__)

# Batches allowed in flight before the oldest is collected
MAX_PENDING = 5


def run_batch(seed, first_case, count, atoms, rows, cols, trees, exhaustive=False):
    """Check count fuzz cases; case i draws everything from Random("<seed>:<i>")."""
    verdicts = []
    for i in range(first_case, first_case + count):
        rng = random.Random("%d:%d" % (seed, i))
        mat = random_matrix(rng, atoms, rows, cols)
        sample = [random_binary_tree(rng, rows, cols) for _ in range(trees)]
        report = check_identity(mat, sample, exhaustive)
        verdicts.append((i, report.passed, None if report.passed else (mat, report)))
    return verdicts


class CaseRunner:
    def __init__(
        self, config, atoms, rows, cols, trees=0, exhaustive=False, batch_size=100
    ):
        self.seed = config.seed
        self.atoms = atoms
        self.rows = rows
        self.cols = cols
        self.trees = trees
        self.exhaustive = exhaustive
        self.batch_size = batch_size

        self.cases_run = 0
        self.cases_failed = 0
        # (case index, matrix, report) for each failing case
        self.counterexamples = []

        self.pool = Pool(nodes=config.jobs)
        self.tasks = []
        self.batch_index = 0

    def submit(self, cases):
        """Dispatch cases in batches of batch_size."""
        for first in range(0, cases, self.batch_size):
            count = min(self.batch_size, cases - first)
            logger.debug(
                "Sending batch #%d: cases %d..%d of %dx%d matrices over %d atoms"
                % (
                    self.batch_index,
                    first,
                    first + count - 1,
                    self.rows,
                    self.cols,
                    self.atoms,
                )
            )
            self.batch_index += 1
            task = self.pool.apipe(
                run_batch,
                self.seed,
                first,
                count,
                self.atoms,
                self.rows,
                self.cols,
                self.trees,
                self.exhaustive,
            )
            self.add_task(task)

    def add_task(self, task):
        self.tasks.append(task)
        if len(self.tasks) == MAX_PENDING:
            task = self.tasks.pop(0)
            self.update_stats(task.get())

    def wait_pool(self):
        for task in self.tasks:
            self.update_stats(task.get())
        self.tasks.clear()

    def update_stats(self, verdicts):
        for i, passed, failure in verdicts:
            self.cases_run += 1
            logger.info("Case %d: %s" % (i, "pass" if passed else "FAIL"))
            if not passed:
                self.cases_failed += 1
                self.counterexamples.append((i, failure[0], failure[1]))

    @property
    def passed(self):
        return self.cases_failed == 0

    def report_completion(self, runtime):
        logger.info(
            "Fuzzing of %dx%d matrices over %d atoms complete: %d cases run, %d failed in %f seconds"
            % (
                self.rows,
                self.cols,
                self.atoms,
                self.cases_run,
                self.cases_failed,
                runtime,
            )
        )
