"""Check results and their line-oriented text rendering."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    name: str
    passed: bool
    trials: int = 0
    counterexample: dict | None = None
    note: str = ""

    def render(self) -> list[str]:
        lines = [f"check: {self.name}", f"status: {'pass' if self.passed else 'FAIL'}", f"trials: {self.trials}"]
        if self.note:
            lines.append(f"note: {self.note}")
        if self.counterexample:
            for key, value in self.counterexample.items():
                lines.append(f"counterexample.{key}: {value}")
        return lines


@dataclass
class Report:
    title: str
    checks: list[CheckResult] = field(default_factory=list)
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name):
        return any(c.name == name for c in self.checks)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def extend(self, other: Report, prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(CheckResult(prefix + c.name, c.passed, c.trials, c.counterexample, c.note))

    def render(self) -> str:
        lines = [f"report: {self.title}"]
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        for k, v in self.meta.items():
            lines.append(f"{k}: {v}")
        lines.append(f"result: {'pass' if self.passed else 'FAIL'}")
        for c in self.checks:
            lines.append("")
            lines.extend(c.render())
        return "\n".join(lines) + "\n"

    def __str__(self):
        return self.render()


class Checker:
    """Accumulates trials for one named check, keeping the first failure."""

    def __init__(self, name: str):
        self.name = name
        self.trials = 0
        self.counterexample = None

    def record(self, ok: bool, **details) -> bool:
        self.trials += 1
        if not ok and self.counterexample is None:
            self.counterexample = {k: str(v) for k, v in details.items()}
        return ok

    def result(self, note: str = "") -> CheckResult:
        return CheckResult(self.name, self.counterexample is None, self.trials, self.counterexample, note)
