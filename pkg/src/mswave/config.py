"""Run configuration: a flat ``key = value`` document with dotted keys.

Example::

    # small-amplitude run
    epsilon = 0.1
    mu = 1.0
    t_end = 5.0
    ic.kind = sine
    ic.amplitude = 0.1
    ic.mode = 1

Values are read as JSON scalars or lists where possible (``0.1``, ``true``,
``[[1, 0.0, 0.1]]``) and as bare strings otherwise. ``#`` starts a comment.
Command-line overrides (``key=value``) are applied on top of the document.
"""

import json
from dataclasses import dataclass

from .diagnostics import NORM_SOURCES
from .errors import ConfigError, InvalidArgumentError
from .initial import InitialCondition
from .model import Params
from .spectral import DEALIAS_MODES, make_grid
from .timestepper import StepControls

DEFAULT_N = 256

KEYS = {
    "epsilon", "mu", "n", "t_end", "dt_init", "dt_min", "rel_tol", "s_max", "tail_max",
    "sample_interval", "norms_source", "output_csv", "output_json", "seed", "dealias",
    "rhs_form", "filter_order",
    "ic.kind", "ic.amplitude", "ic.mode", "ic.coefficients", "ic.width", "ic.modes",
}
REQUIRED = ("epsilon", "mu", "t_end", "ic.kind")


@dataclass(frozen=True)
class RunConfig:
    params: Params
    n: int
    controls: StepControls
    ic: InitialCondition
    norms_source: str = "numeric"
    output_csv: str = None
    output_json: str = None
    seed: int = 0
    dealias: str = "two_thirds"
    rhs_form: str = "nonlocal"
    filter_order: int = None

    def as_dict(self):
        c = self.controls
        return {
            "epsilon": self.params.epsilon,
            "mu": self.params.mu,
            "n": self.n,
            "t_end": c.t_end,
            "dt_init": c.dt_init,
            "dt_min": c.dt_min,
            "rel_tol": c.rel_tol,
            "s_max": c.s_max,
            "tail_max": c.tail_max,
            "sample_interval": c.sample_interval,
            "norms_source": self.norms_source,
            "output_csv": self.output_csv,
            "output_json": self.output_json,
            "seed": self.seed,
            "dealias": self.dealias,
            "rhs_form": self.rhs_form,
            "filter_order": self.filter_order,
            "ic": self.ic.as_dict(),
        }


def parse_value(text):
    text = text.strip()
    try:
        return json.loads(text)
    except ValueError:
        if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
            return text[1:-1]
        return text


def parse_document(text):
    """Map of key -> value; rejects malformed lines and duplicate keys."""
    entries = {}
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: missing key")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first set on line {seen[key]})")
        seen[key] = lineno
        entries[key] = parse_value(value)
    return entries


def parse_override(item):
    if "=" not in item:
        raise ConfigError(f"override must look like key=value, got {item!r}")
    key, value = item.split("=", 1)
    return key.strip(), parse_value(value)


def _number(entries, key, default=None, kind=float):
    v = entries.get(key, default)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{key} must be a number, got {v!r}")
    if kind is int:
        if int(v) != v:
            raise ConfigError(f"{key} must be an integer, got {v!r}")
        return int(v)
    return float(v)


def build_config(entries):
    unknown = sorted(set(entries) - KEYS)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    missing = [k for k in REQUIRED if k not in entries]
    if missing:
        raise ConfigError(f"missing required configuration keys: {', '.join(missing)}")
    try:
        params = Params(_number(entries, "epsilon"), _number(entries, "mu"))
        n = _number(entries, "n", DEFAULT_N, int)
        make_grid(n)
        t_end = _number(entries, "t_end")
        controls = StepControls(
            t_end=t_end,
            dt_init=_number(entries, "dt_init"),
            dt_min=_number(entries, "dt_min", 1e-12),
            rel_tol=_number(entries, "rel_tol", 1e-10),
            s_max=_number(entries, "s_max", 1e6),
            tail_max=_number(entries, "tail_max", 1e-3),
            sample_interval=_number(entries, "sample_interval"),
        )
    except InvalidArgumentError as exc:
        raise ConfigError(str(exc)) from None

    seed = _number(entries, "seed", 0, int)
    if seed < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {seed}")
    coeffs = entries.get("ic.coefficients", [])
    if not isinstance(coeffs, list):
        raise ConfigError(f"ic.coefficients must be a list of [mode, cos, sin] triples, got {coeffs!r}")
    ic = InitialCondition(
        kind=str(entries["ic.kind"]),
        amplitude=_number(entries, "ic.amplitude", 0.0),
        mode=_number(entries, "ic.mode", 1, int),
        coefficients=tuple(tuple(c) if isinstance(c, list) else c for c in coeffs),
        width=_number(entries, "ic.width", 0.05),
        modes=_number(entries, "ic.modes", 3, int),
        seed=seed,
    )
    norms_source = entries.get("norms_source", "numeric")
    if norms_source not in NORM_SOURCES:
        raise ConfigError(f"norms_source must be one of {NORM_SOURCES}, got {norms_source!r}")
    dealias = entries.get("dealias", "two_thirds")
    if dealias not in DEALIAS_MODES:
        raise ConfigError(f"dealias must be one of {DEALIAS_MODES}, got {dealias!r}")
    rhs_form = entries.get("rhs_form", "nonlocal")
    if rhs_form not in ("nonlocal", "direct"):
        raise ConfigError(f"rhs_form must be 'nonlocal' or 'direct', got {rhs_form!r}")
    filter_order = _number(entries, "filter_order", None, int)
    if filter_order is not None and filter_order < 1:
        raise ConfigError(f"filter_order must be a positive integer, got {filter_order}")
    for key in ("output_csv", "output_json"):
        if key in entries and not isinstance(entries[key], str):
            raise ConfigError(f"{key} must be a path string, got {entries[key]!r}")
    return RunConfig(
        params=params, n=n, controls=controls, ic=ic, norms_source=norms_source,
        output_csv=entries.get("output_csv"), output_json=entries.get("output_json"),
        seed=seed, dealias=dealias, rhs_form=rhs_form, filter_order=filter_order,
    )


def parse_config(text, overrides=()):
    """Validated :class:`RunConfig` from document text plus ``key=value`` overrides."""
    entries = parse_document(text)
    for item in overrides:
        key, value = parse_override(item) if isinstance(item, str) else item
        entries[key] = value
    return build_config(entries)
