"""Run configuration, check records and report serialization."""
from __future__ import annotations

import json
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

REPORT_VERSION = "report_v1"


class ConfigError(ValueError):
    pass


class IoFailure(OSError):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int = 1000
    deriv_samples: int = 100
    tol_algebraic: float = 1e-12
    tol_derivative: float = 1e-6
    tol_coefficient: float = 1e-5
    tol_second: float = 1e-4
    charts: tuple = ()
    grid: int = 5
    probes: int = 10
    format: str = "json"
    out: Optional[str] = None
    timing: bool = False

    def __post_init__(self):
        for name in ("tol_algebraic", "tol_derivative", "tol_coefficient", "tol_second"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise ConfigError(f"{name} must be a positive number, got {v!r}")
        for name in ("samples", "deriv_samples", "grid", "probes"):
            v = getattr(self, name)
            if not (isinstance(v, int) and v >= 1):
                raise ConfigError(f"{name} must be an integer >= 1, got {v!r}")
        if self.format not in ("json", "text"):
            raise ConfigError(f"format must be 'json' or 'text', got {self.format!r}")

    def public(self) -> dict:
        """The fields that shape results; output location and format are left out."""
        d = asdict(self)
        for k in ("out", "format", "timing"):
            d.pop(k)
        d["charts"] = list(self.charts)
        return d


_CONVERTERS = {
    "seed": int, "samples": int, "deriv_samples": int, "grid": int, "probes": int,
    "tol_algebraic": float, "tol_derivative": float, "tol_coefficient": float, "tol_second": float,
    "format": str, "out": str,
    "charts": lambda s: tuple(c.strip() for c in s.split(",") if c.strip()),
    "timing": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
}


def parse_config_text(text: str) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment, dashes in keys are allowed."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "chart":
            key = "charts"
        if key not in _CONVERTERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            out[key] = _CONVERTERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
    return out


def load_config(path: str | None, overrides: dict) -> RunConfig:
    values = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                values = parse_config_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)


def _clean(v):
    """JSON-safe, deterministic scalars (numpy types and non-finite floats)."""
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if hasattr(v, "item"):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


@dataclass
class CheckRecord:
    id: str
    anchor: str
    residual: float
    tol: float
    sample: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.anchor:
            raise ValueError("every check needs an anchor")
        self.residual = float(self.residual)
        self.tol = float(self.tol)

    @property
    def passed(self) -> bool:
        # NaN residuals fail
        return bool(self.residual <= self.tol)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "residual": _clean(self.residual),
            "tol": self.tol,
            "pass": self.passed,
            "sample": _clean(self.sample),
        }


@dataclass
class CheckReport:
    suite: str
    seed: int
    config: dict
    checks: list = field(default_factory=list)
    duration_ms: Optional[int] = None

    def add(self, id: str, anchor: str, residual: float, tol: float, **sample) -> CheckRecord:
        rec = CheckRecord(id, anchor, residual, tol, sample)
        self.checks.append(rec)
        return rec

    def extend(self, other: "CheckReport") -> None:
        self.checks.extend(other.checks)

    @property
    def summary(self) -> dict:
        n_pass = sum(1 for c in self.checks if c.passed)
        return {"pass": n_pass, "fail": len(self.checks) - n_pass}

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "config": _clean(self.config),
            "checks": [c.to_dict() for c in self.checks],
            "summary": self.summary,
            "duration_ms": self.duration_ms,
            "version": REPORT_VERSION,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        rep = cls(d["suite"], d["seed"], d["config"], duration_ms=d.get("duration_ms"))
        for c in d["checks"]:
            rep.checks.append(CheckRecord(c["id"], c["anchor"], float(c["residual"]), c["tol"], c["sample"]))
        return rep


def render_json(rep: CheckReport) -> str:
    return json.dumps(rep.to_dict(), indent=2, ensure_ascii=False) + "\n"


def render_text(rep: CheckReport) -> str:
    width = max([len(c.id) for c in rep.checks] + [5])
    lines = [f"suite {rep.suite}  seed {rep.seed}", ""]
    lines.append(f"{'check':<{width}}  {'residual':>12}  {'tol':>9}  result")
    for c in rep.checks:
        mark = "PASS" if c.passed else "FAIL"
        lines.append(f"{c.id:<{width}}  {c.residual:>12.3e}  {c.tol:>9.1e}  {mark}")
    s = rep.summary
    lines += ["", f"{s['pass']} passed, {s['fail']} failed"]
    if rep.duration_ms is not None:
        lines.append(f"duration {rep.duration_ms} ms")
    return "\n".join(lines) + "\n"


def emit_report(rep: CheckReport, format: str = "json", path: str | None = None) -> str:
    """Serialize the report and write it to ``path`` (stdout when None or "-")."""
    if format == "json":
        text = render_json(rep)
    elif format == "text":
        text = render_text(rep)
    else:
        raise ValueError(f"unknown format {format!r}")
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise IoFailure(f"cannot write report to {path}: {exc}") from exc
    return text
