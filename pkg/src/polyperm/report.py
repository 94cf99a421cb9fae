"""Plain-text reports with a stable field order (machine-diffable)."""

from __future__ import annotations

import time


class Report:
    """Ordered key/value report for a verification batch."""

    def __init__(self, name: str):
        self.name = name
        self.fields: list[tuple[str, str]] = []
        self.violations: list[str] = []
        self._start = time.perf_counter()
        self.wall_time = 0.0

    def add(self, key: str, value) -> None:
        self.fields.append((key, str(value)))

    def violation(self, text: str) -> None:
        self.violations.append(text)

    def finish(self) -> "Report":
        self.wall_time = time.perf_counter() - self._start
        return self

    @property
    def passed(self) -> bool:
        return not self.violations

    def render(self, workers: int = 1) -> str:
        lines = [f"verify: {self.name}"]
        lines += [f"{k}: {v}" for k, v in self.fields]
        lines.append(f"violations: {len(self.violations)}")
        lines += [f"violation: {v}" for v in self.violations]
        lines.append(f"workers: {workers}")
        lines.append(f"wall_time_s: {self.wall_time:.3f}")
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)
