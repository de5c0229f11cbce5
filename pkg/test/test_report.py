from rado_localization.report import Report


class TestReport:
    def test_pass_and_fail(self):
        report = Report("x")
        assert report.passed
        assert report.check(True, "never recorded")
        assert not report.check(False, "broken")
        assert not report.passed
        assert report.violations == ["broken"]

    def test_render_is_sorted(self):
        report = Report("x")
        report.data["b"] = 2
        report.data["a"] = [1]
        report.note("partial")
        report.fail("bad")
        assert report.render() == "\n".join(
            ["x: FAIL", "  a = [1]", "  b = 2", "  violation: bad", "  note: partial"]
        )

    def test_extend_prefixes(self):
        outer = Report("outer")
        inner = Report("inner")
        inner.fail("bad")
        inner.note("n")
        inner.data["k"] = 1
        outer.extend(inner)
        assert outer.violations == ["inner: bad"]
        assert outer.notes == ["inner: n"]
        assert outer.data == {"inner.k": 1}
        assert outer.to_dict()["passed"] is False
