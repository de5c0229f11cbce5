class Report:
    """Outcome of a verifier: violations fail it, notes do not."""

    def __init__(self, name):
        self.name = name
        self.violations = []
        self.notes = []
        self.data = {}

    @property
    def passed(self):
        return not self.violations

    def fail(self, message):
        self.violations.append(message)

    def note(self, message):
        self.notes.append(message)

    def check(self, condition, message):
        if not condition:
            self.violations.append(message)
        return condition

    def extend(self, other):
        # Sub-reports are merged with their name as prefix
        self.violations.extend("%s: %s" % (other.name, v) for v in other.violations)
        self.notes.extend("%s: %s" % (other.name, n) for n in other.notes)
        for key, value in other.data.items():
            self.data["%s.%s" % (other.name, key)] = value
        return self

    def to_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "violations": list(self.violations),
            "notes": list(self.notes),
            "data": {k: self.data[k] for k in sorted(self.data)},
        }

    def render(self):
        lines = ["%s: %s" % (self.name, "PASS" if self.passed else "FAIL")]
        for key in sorted(self.data):
            lines.append("  %s = %s" % (key, self.data[key]))
        lines.extend("  violation: %s" % v for v in self.violations)
        lines.extend("  note: %s" % n for n in self.notes)
        return "\n".join(lines)

    def __repr__(self):
        return "Report(%s, %d violations)" % (self.name, len(self.violations))
