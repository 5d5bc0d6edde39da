"""Structured pass/fail reports for the verification battery."""

import json
import time


class CheckResult:
    """One verified inequality/identity with its measured constants."""

    __slots__ = ("name", "anchor", "status", "measured", "tolerance", "detail")

    def __init__(self, name, anchor, status, measured=None, tolerance=None, detail=""):
        if status not in ("pass", "fail", "inconclusive"):
            raise ValueError(f"bad status {status!r}")
        self.name = name
        self.anchor = anchor
        self.status = status
        self.measured = dict(measured or {})
        self.tolerance = tolerance
        self.detail = detail

    def to_dict(self):
        return {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


class VerificationReport:
    """Append-only collection of check results for one suite run."""

    def __init__(self, suite, config):
        self.suite = suite
        self.config = dict(config)
        self.checks = []
        self._t0 = time.perf_counter()
        self.wall_time_s = None

    def add(self, check):
        self.checks.append(check)
        return check

    def finalize(self):
        self.wall_time_s = time.perf_counter() - self._t0
        return self

    @property
    def n_failed(self):
        return sum(1 for c in self.checks if c.status == "fail")

    @property
    def all_passed(self):
        return self.n_failed == 0

    def to_dict(self, include_wall_time=True):
        out = {
            "suite": self.suite,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "n_checks": len(self.checks),
            "n_failed": self.n_failed,
        }
        if include_wall_time:
            out["wall_time_s"] = self.wall_time_s
        return out

    def to_json(self, path=None, include_wall_time=True):
        payload = json.dumps(self.to_dict(include_wall_time), indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(payload + "\n")
        return payload

    def summary_lines(self):
        lines = []
        for c in self.checks:
            mark = {"pass": "PASS", "fail": "FAIL", "inconclusive": "????"}[c.status]
            extra = f" -- {c.detail}" if c.detail and c.status != "pass" else ""
            lines.append(f"[{mark}] {c.name} ({c.anchor}){extra}")
        lines.append(f"{len(self.checks) - self.n_failed}/{len(self.checks)} checks passed")
        return lines
