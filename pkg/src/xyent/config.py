"""Plain-text run configuration.

Grammar: INI-style ``key = value`` lines in three sections.  ``[model]``
carries the chain parameters and is required, ``[run]`` and
``[quadrature]`` are optional overrides::

    [model]
    beta_L = 1.0
    beta_R = 3.0
    gamma = 0.5
    lambda = 0.3

    [run]
    n_list = 32, 64, 128, 256, 512
    out = results
    formats = csv, json
    seed = 0

    [quadrature]
    abs_tol = 1e-12
    rel_tol = 1e-10
    max_subdivisions = 2000
    max_fourier_index = 4096

Unknown sections or keys are rejected by name rather than ignored, so a
typo cannot silently fall back to a default.
"""

from __future__ import annotations

import configparser
import dataclasses

from .errors import ConfigError
from .model import ChainParams
from .quadrature import QuadratureSpec

__all__ = ["RunConfig", "parse_config", "DEFAULT_N_LIST", "DEFAULT_FORMATS"]

DEFAULT_N_LIST = (32, 64, 128, 256, 512)
DEFAULT_FORMATS = ("csv", "json")
KNOWN_FORMATS = ("csv", "json", "plot")

_MODEL_KEYS = ("beta_l", "beta_r", "gamma", "lambda")
_RUN_KEYS = ("n_list", "out", "formats", "seed")
_QUAD_KEYS = ("abs_tol", "rel_tol", "max_subdivisions", "max_fourier_index")


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Fully resolved inputs for one CLI invocation."""

    params: ChainParams
    n_list: tuple[int, ...] = DEFAULT_N_LIST
    quadrature: QuadratureSpec = QuadratureSpec()
    out_dir: str = "."
    formats: tuple[str, ...] = DEFAULT_FORMATS
    seed: int = 0


def _float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from None


def _int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not an integer: {raw!r}") from None


def _split(raw: str) -> list[str]:
    return [tok for tok in (t.strip() for t in raw.replace(",", " ").split()) if tok]


def _check_keys(section: str, present, allowed) -> None:
    for key in present:
        if key not in allowed:
            raise ConfigError(
                f"unknown key {key!r} in section [{section}]; allowed: {', '.join(allowed)}"
            )


def parse_n_list(raw: str) -> tuple[int, ...]:
    """Parse a comma/space separated list of block sizes, normalized ascending."""
    values = sorted({_int("run", "n_list", tok) for tok in _split(raw)})
    if not values:
        raise ConfigError("[run] n_list: empty list")
    if values[0] < 1:
        raise ConfigError(f"[run] n_list: block sizes must be positive, got {values[0]}")
    return tuple(values)


def parse_formats(raw: str) -> tuple[str, ...]:
    names = _split(raw)
    if not names:
        raise ConfigError("[run] formats: empty list")
    for name in names:
        if name not in KNOWN_FORMATS:
            raise ConfigError(
                f"[run] formats: unknown format {name!r}; allowed: {', '.join(KNOWN_FORMATS)}"
            )
    # preserve canonical order, drop duplicates
    return tuple(fmt for fmt in KNOWN_FORMATS if fmt in names)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration document into a :class:`RunConfig`.

    Raises :class:`ConfigError` with the line number on malformed syntax and
    with the offending section/key name on any validation failure.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None

    for section in parser.sections():
        if section not in ("model", "run", "quadrature"):
            raise ConfigError(
                f"unknown section [{section}]; allowed: [model], [run], [quadrature]"
            )
    if not parser.has_section("model"):
        raise ConfigError("missing required section [model]")

    model = parser["model"]
    _check_keys("model", model.keys(), _MODEL_KEYS)
    for key in _MODEL_KEYS:
        if key not in model:
            raise ConfigError(f"[model] missing required key {key!r}")
    params = ChainParams(
        beta_L=_float("model", "beta_L", model["beta_l"]),
        beta_R=_float("model", "beta_R", model["beta_r"]),
        gamma=_float("model", "gamma", model["gamma"]),
        lam=_float("model", "lambda", model["lambda"]),
    )

    n_list: tuple[int, ...] = DEFAULT_N_LIST
    out_dir = "."
    formats = DEFAULT_FORMATS
    seed = 0
    if parser.has_section("run"):
        run = parser["run"]
        _check_keys("run", run.keys(), _RUN_KEYS)
        if "n_list" in run:
            n_list = parse_n_list(run["n_list"])
        if "out" in run:
            out_dir = run["out"].strip()
            if not out_dir:
                raise ConfigError("[run] out: empty path")
        if "formats" in run:
            formats = parse_formats(run["formats"])
        if "seed" in run:
            seed = _int("run", "seed", run["seed"])

    quad_kwargs = {}
    if parser.has_section("quadrature"):
        quad = parser["quadrature"]
        _check_keys("quadrature", quad.keys(), _QUAD_KEYS)
        if "abs_tol" in quad:
            quad_kwargs["abs_tol"] = _float("quadrature", "abs_tol", quad["abs_tol"])
        if "rel_tol" in quad:
            quad_kwargs["rel_tol"] = _float("quadrature", "rel_tol", quad["rel_tol"])
        if "max_subdivisions" in quad:
            quad_kwargs["max_subdivisions"] = _int(
                "quadrature", "max_subdivisions", quad["max_subdivisions"]
            )
        if "max_fourier_index" in quad:
            quad_kwargs["max_fourier_index"] = _int(
                "quadrature", "max_fourier_index", quad["max_fourier_index"]
            )
    try:
        quadrature = QuadratureSpec(**quad_kwargs)
    except ValueError as exc:
        raise ConfigError(f"[quadrature] {exc}") from None

    return RunConfig(
        params=params,
        n_list=n_list,
        quadrature=quadrature,
        out_dir=out_dir,
        formats=formats,
        seed=seed,
    )
