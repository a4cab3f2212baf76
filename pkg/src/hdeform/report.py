"""Verification reports: one record per suite run, JSON-serializable."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class SuiteReport:
    suite: str
    config: dict
    failures: list = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def status(self):
        return "pass" if not self.failures else "fail"

    def to_dict(self):
        return {
            "suite": self.suite,
            "config": self.config,
            "status": self.status,
            "failures": self.failures,
            "wall_time_s": round(self.wall_time_s, 6),
        }


def render_reports(reports, include_timing=True):
    """Deterministic JSON for a list of reports (timing optional)."""
    payload = {
        "status": "pass" if all(not r.failures for r in reports) else "fail",
        "suites": [r.to_dict() for r in reports],
    }
    if not include_timing:
        for s in payload["suites"]:
            s.pop("wall_time_s", None)
    return json.dumps(payload, indent=2, sort_keys=True)
