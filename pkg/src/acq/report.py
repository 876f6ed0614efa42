"""Line-oriented reports.

Every line is ``key: value``; residuals get an indented block.  The final
``timing`` line is the only non-deterministic one, so comparisons of reports
across runs should drop it (``Report.text(timing=False)``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

PASS, FAIL, UNDETERMINED = "pass", "fail", "undetermined"


@dataclass
class CheckResult:
    name: str
    status: str
    cases: int = 0
    residuals: list = field(default_factory=list)  # (label, text)
    notes: list = field(default_factory=list)
    expect_fail: bool = False

    @property
    def ok(self) -> bool:
        """Whether the result meets its expectation."""
        if self.expect_fail:
            return self.status == FAIL
        return self.status == PASS


@dataclass
class Report:
    model: str
    suite: str
    seed: int
    checks: list = field(default_factory=list)
    seconds: float = 0.0
    max_residuals: int = 5

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def text(self, timing: bool = True) -> str:
        out = [f"model: {self.model}", f"suite: {self.suite}", f"seed: {self.seed}"]
        for c in self.checks:
            line = f"check {c.name}: {c.status} cases={c.cases}"
            if c.expect_fail:
                line += " expected=fail"
            out.append(line)
            for n in c.notes:
                out.append(f"note {c.name}: {n}")
            for k, (label, res) in enumerate(c.residuals[: self.max_residuals], start=1):
                out.append(f"residual {c.name} {k}: {label}")
                out.extend("  " + r for r in str(res).splitlines())
            if len(c.residuals) > self.max_residuals:
                out.append(f"residual {c.name}: {len(c.residuals) - self.max_residuals} more")
        out.append(f"result: {PASS if self.ok else FAIL}")
        if timing:
            out.append(f"timing: {self.seconds:.2f}s")
        return "\n".join(out) + "\n"
