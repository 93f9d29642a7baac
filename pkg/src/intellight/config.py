"""Flat ``key=value`` sweep configuration.

One assignment per line; ``#`` starts a comment. Values are a number, a
comma-separated list, or an inclusive range ``start:stop:step``. Repeating
a key appends to its grid. Fractions such as ``1/2`` are accepted.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError

__all__ = ["ConfigError", "ValidationError", "SweepConfig", "parse_config", "load_config",
           "expand_range"]

GRID_KEYS = ("j", "m0", "k", "l", "eta", "beta", "sinh2_beta", "phi")
TEXT_KEYS = ("group", "out", "preset", "quantities")
QUANTITIES = ("G", "dphi2", "nbar", "E")


class ConfigError(ValueError):
    """Malformed configuration text; carries the 1-based line number."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ValidationError(DomainError):
    """Well-formed but physically invalid configuration; names the field."""

    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


def _number(text):
    text = text.strip()
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def expand_range(start, stop, step):
    """Inclusive arithmetic range, robust to float accumulation."""
    if step <= 0:
        raise ValueError("step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise ValueError("empty range")
    return [round(start + i * step, 12) for i in range(count)]


def _values(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ValueError("empty list element")
        if ":" in part:
            pieces = part.split(":")
            if len(pieces) != 3:
                raise ValueError(f"range must be start:stop:step, got {part!r}")
            out.extend(expand_range(*(_number(p) for p in pieces)))
        else:
            out.append(_number(part))
    return out


@dataclass
class SweepConfig:
    group: str = "SU2"
    grids: dict = field(default_factory=dict)
    out: str | None = None
    preset: str | None = None
    quantities: tuple = ("G", "dphi2", "nbar")
    tolerances: dict = field(default_factory=dict)
    echo: list = field(default_factory=list)

    def grid(self, key):
        return self.grids.get(key, [])


def parse_config(text):
    cfg = SweepConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(lineno, f"expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key or not value:
            raise ConfigError(lineno, "empty key or value")
        cfg.echo.append(f"{key}={value}")
        try:
            if key in GRID_KEYS:
                cfg.grids.setdefault(key, []).extend(_values(value))
            elif key.startswith("tolerance."):
                tol = _number(value)
                cfg.tolerances[key.split(".", 1)[1]] = tol
            elif key == "tolerance":
                cfg.tolerances["*"] = _number(value)
            elif key == "group":
                cfg.group = value.upper().replace("(", "").replace(")", "").replace(",", "")
            elif key == "quantities":
                cfg.quantities = tuple(q.strip() for q in value.split(","))
            elif key in TEXT_KEYS:
                setattr(cfg, key, value)
            else:
                raise ConfigError(lineno, f"unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(lineno, f"{key}: {exc}") from None
    validate(cfg)
    return cfg


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _require(cfg, key):
    vals = cfg.grid(key)
    if not vals:
        raise ValidationError(key, "grid is empty or missing")
    return vals


def validate(cfg):
    """Check the grids make physical sense together; raise ValidationError."""
    for name, tol in cfg.tolerances.items():
        if not tol > 0:
            raise ValidationError(f"tolerance.{name}" if name != "*" else "tolerance",
                                  "must be positive")
    bad = [q for q in cfg.quantities if q not in QUANTITIES]
    if bad:
        raise ValidationError("quantities", f"unknown {bad}; choose from {QUANTITIES}")
    if not cfg.grids:
        return cfg
    if cfg.group not in ("SU2", "SU11"):
        raise ValidationError("group", f"must be SU2 or SU11, got {cfg.group!r}")
    for eta in _require(cfg, "eta"):
        if eta == 0:
            raise ValidationError("eta", "eta = 0 does not define an intelligent state")
    if cfg.group == "SU2":
        for j in _require(cfg, "j"):
            if j < 0.5 or abs(2 * j - round(2 * j)) > 1e-12:
                raise ValidationError("j", f"must be a positive half-integer, got {j}")
            for m0 in _require(cfg, "m0"):
                if abs(m0) > j:
                    raise ValidationError("m0", f"|m0|={abs(m0)} exceeds j={j}")
                if abs((j - m0) - round(j - m0)) > 1e-12:
                    raise ValidationError("m0", f"j - m0 must be an integer (j={j}, m0={m0})")
    else:
        for k in _require(cfg, "k"):
            if k < 0.5 or abs(2 * k - round(2 * k)) > 1e-12:
                raise ValidationError("k", f"must be a half-integer >= 1/2, got {k}")
        for l in _require(cfg, "l"):
            if l < 0 or l != int(l):
                raise ValidationError("l", f"must be a non-negative integer, got {l}")
        if not cfg.grid("beta") and not cfg.grid("sinh2_beta"):
            raise ValidationError("beta", "SU11 sweeps need beta or sinh2_beta")
        if cfg.grid("beta") and cfg.grid("sinh2_beta"):
            raise ValidationError("beta", "give beta or sinh2_beta, not both")
        for b in cfg.grid("beta") + cfg.grid("sinh2_beta"):
            if b <= 0:
                raise ValidationError("beta" if cfg.grid("beta") else "sinh2_beta",
                                      "must be positive")
    return cfg
