"""Machine-readable verification reports (JSON schema version 1)."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Callable, Optional

from ceppa import __version__
from ceppa.errors import BudgetExceeded

SCHEMA = 1
VOLATILE_KEYS = ("timestamp", "runtime")

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"

CONVENTIONS = {
    "t_operator": "(T_k f)(g) = sum_j f(g - a_j) / (mu, g - a_j); the denominator uses the summed simple root",
    "monomial_order": "degree, then fewer z factors larger, then word; larger monomials are rewritten",
    "trace_normalization": "t_i = eps_i * path_trace(i) at the first vertex where both sides are nonzero",
    "vertex_numbering": "1-based; D_n short legs 1 and 2, long leg 3..n-1, node n; E_n Bourbaki with node 4",
}


def jsonable(value: Any) -> Any:
    """Exact values as JSON: fractions become strings such as ``"-3/2"``."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


@dataclass
class Check:
    name: str
    suite: str
    status: str
    expected: Any = None
    actual: Any = None
    reason: str = ""
    runtime: float = 0.0

    def __post_init__(self):
        if self.status not in (PASS, FAIL, SKIPPED):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == SKIPPED and not self.reason:
            raise ValueError(f"skipped check {self.name!r} needs a reason")


@dataclass
class VerificationReport:
    family: str
    rank: int
    mu: dict
    suites: list[str]
    budget: int
    lam: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    version: str = __version__
    schema: int = SCHEMA
    timestamp: str = ""
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def skipped(self) -> list[Check]:
        return [c for c in self.checks if c.status == SKIPPED]

    @property
    def verdict(self) -> str:
        return FAIL if self.failures else PASS

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "tool": "ceppa",
            "version": self.version,
            "timestamp": self.timestamp,
            "type": {"family": self.family, "rank": self.rank},
            "mu": jsonable(self.mu),
            "lambda": jsonable(self.lam),
            "suites": list(self.suites),
            "budget": self.budget,
            "conventions": dict(self.conventions),
            "checks": [jsonable(asdict(c)) for c in self.checks],
            "summary": {
                "pass": sum(c.status == PASS for c in self.checks),
                "fail": len(self.failures),
                "skipped": len(self.skipped),
            },
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        return cls(
            family=data["type"]["family"],
            rank=data["type"]["rank"],
            mu=data["mu"],
            suites=data["suites"],
            budget=data["budget"],
            lam=data.get("lambda", {}),
            checks=[Check(**c) for c in data["checks"]],
            version=data["version"],
            schema=data["schema"],
            timestamp=data.get("timestamp", ""),
            conventions=data.get("conventions", dict(CONVENTIONS)),
        )

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    def stamp(self) -> None:
        self.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")


def strip_volatile(data: Any) -> Any:
    """Drop wall-clock fields so two runs with the same flags compare equal."""
    if isinstance(data, dict):
        return {k: strip_volatile(v) for k, v in data.items() if k not in VOLATILE_KEYS}
    if isinstance(data, list):
        return [strip_volatile(v) for v in data]
    return data


class Recorder:
    """Runs check closures and appends their outcome to a report.

    A closure returns ``(expected, actual)``; the check passes when they are
    equal.  ``BudgetExceeded`` turns into a skip with the budget message;
    any other exception is a failure carrying the message.
    """

    def __init__(self, report: VerificationReport, suite: str):
        self.report = report
        self.suite = suite

    def run(self, name: str, fn: Callable[[], tuple[Any, Any]]) -> Optional[Check]:
        start = time.perf_counter()
        try:
            expected, actual = fn()
        except BudgetExceeded as exc:
            check = Check(name, self.suite, SKIPPED, reason=f"BudgetExceeded: {exc}")
        except Exception as exc:  # a crash inside a check is a failed check
            check = Check(name, self.suite, FAIL, reason=f"{type(exc).__name__}: {exc}")
        else:
            status = PASS if expected == actual else FAIL
            check = Check(name, self.suite, status, jsonable(expected), jsonable(actual))
        check.runtime = round(time.perf_counter() - start, 4)
        self.report.checks.append(check)
        return check

    def skip(self, name: str, reason: str) -> None:
        self.report.checks.append(Check(name, self.suite, SKIPPED, reason=reason))
