from rado_localization.config import Config
from rado_localization.fuzz_pool import CaseRunner, run_batch


class TestCaseRunner:
    def test_all_cases_pass(self):
        runner = CaseRunner(Config(seed=7), 3, 4, 4, trees=5)
        runner.submit(50)
        runner.wait_pool()
        assert runner.cases_run == 50
        assert runner.cases_failed == 0
        assert runner.passed
        assert runner.counterexamples == []

    def test_batches(self):
        """More batches than may be in flight are collected as they complete."""
        runner = CaseRunner(Config(seed=1), 2, 2, 2, trees=2, batch_size=10)
        runner.submit(75)
        assert runner.batch_index == 8
        assert len(runner.tasks) < 5
        runner.wait_pool()
        assert runner.cases_run == 75
        assert runner.tasks == []

    def test_parallel_workers(self):
        runner = CaseRunner(
            Config(seed=3, jobs=2), 2, 3, 3, trees=3, exhaustive=True, batch_size=5
        )
        runner.submit(20)
        runner.wait_pool()
        runner.report_completion(0.0)
        assert runner.cases_run == 20
        assert runner.passed

    def test_batches_are_deterministic(self):
        first = run_batch(9, 0, 10, 3, 3, 3, 4)
        second = run_batch(9, 0, 10, 3, 3, 3, 4)
        assert first == second
        assert [i for i, _, _ in first] == list(range(10))

    def test_no_cases(self):
        runner = CaseRunner(Config(), 1, 1, 1)
        runner.submit(0)
        runner.wait_pool()
        assert runner.cases_run == 0
        assert runner.passed
