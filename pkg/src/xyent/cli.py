"""Command-line front end.

Every computing subcommand is a thin client of the HTTP service: the
request is posted either to an in-process application instance (default)
or to a running server given via ``--server``, and the JSON response is
written out as artifacts.  The CLI itself contains no numerics, so the two
entry points can never disagree.

Artifacts per command (under ``--out``): ``<command>.json`` (full response
envelope), ``<command>.csv`` (the ``columns``/``rows`` table), and for
``converge`` and ``figure-h`` a self-contained ``plot_<command>.py`` that
reads the CSV.  Files are written atomically and byte-identically for
identical inputs: floats use 17 significant digits, JSON keys are sorted.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import dataclasses
import io
import json
import os
import sys
import tempfile
from pathlib import Path

import httpx

from .config import DEFAULT_FORMATS, RunConfig, parse_config, parse_formats, parse_n_list
from .errors import ConfigError

COMMANDS = (
    "symbol",
    "coeffs",
    "matrix",
    "spectrum",
    "entropy",
    "limit",
    "converge",
    "compare-eq",
    "oracle-check",
    "figure-h",
)
PLOTTABLE = ("converge", "figure-h")
ORACLE_DEFAULT_NS = (1, 2, 3, 4, 5)
FIGURE_H_POINTS = 401


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xyent",
        description="Block entropy of the two-temperature XY chain: "
        "symbols, Toeplitz truncations, spectra, entropy asymptotics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    help_n = (
        "block sizes (comma separated) for spectrum/entropy/converge; a single "
        "block size for matrix; the coefficient range for coeffs; oracle block "
        "sizes (each <= 10) for oracle-check"
    )
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} computation")
        p.add_argument("--config", metavar="PATH", help="run configuration file")
        p.add_argument("--out", metavar="DIR", help="output directory (default from config, else '.')")
        p.add_argument("--n", metavar="LIST", help=help_n)
        p.add_argument("--abs-tol", metavar="X", type=float, help="quadrature absolute tolerance")
        p.add_argument("--format", metavar="LIST", help="artifact formats: csv,json,plot")
        p.add_argument("--seed", metavar="N", type=int, help="seed for randomized oracle checks")
        p.add_argument("--server", metavar="URL", help="POST to a running server instead of in-process")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


# ---------------------------------------------------------------------------
# Artifact serialization
# ---------------------------------------------------------------------------


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


_CONVERGE_PLOT = '''\
#!/usr/bin/env python3
"""Plot the block entropy density ladder and its distance to the limit."""
import csv
from pathlib import Path

import matplotlib.pyplot as plt

table = Path(__file__).resolve().parent / "converge.csv"
rows = list(csv.DictReader(table.open()))
n = [int(r["n"]) for r in rows]
density = [float(r["density"]) for r in rows]
deviation = [float(r["deviation"]) for r in rows]

fig, (left, right) = plt.subplots(1, 2, figsize=(9.0, 3.5))
left.plot(n, density, "o-")
left.set_xscale("log", base=2)
left.set_xlabel("n")
left.set_ylabel("S(n) / n")
left.set_title("entropy density")
right.loglog(n, deviation, "o-")
right.set_xlabel("n")
right.set_ylabel("|S(n)/n - C|")
right.set_title("distance to the limit")
fig.tight_layout()
target = table.with_name("converge.png")
fig.savefig(target, dpi=160)
print(f"wrote {target}")
'''

_FIGURE_H_PLOT = '''\
#!/usr/bin/env python3
"""Plot the binary entropy curve h(x) on [-1, 1]."""
import csv
import math
from pathlib import Path

import matplotlib.pyplot as plt

table = Path(__file__).resolve().parent / "figure-h.csv"
rows = list(csv.DictReader(table.open()))
x = [float(r["x"]) for r in rows]
h = [float(r["h"]) for r in rows]

fig, ax = plt.subplots(figsize=(4.5, 3.2))
ax.plot(x, h)
ax.axhline(math.log(2.0), linestyle=":", linewidth=0.8, color="gray")
ax.set_xlabel("x")
ax.set_ylabel("h(x)")
ax.set_xlim(-1.0, 1.0)
ax.set_ylim(0.0, 0.75)
fig.tight_layout()
target = table.with_name("figure-h.png")
fig.savefig(target, dpi=160)
print(f"wrote {target}")
'''

_PLOT_SCRIPTS = {"converge": _CONVERGE_PLOT, "figure-h": _FIGURE_H_PLOT}


def _write_artifacts(command: str, payload: dict, out_dir: str, formats) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = payload.get("results", {})
    written: list[Path] = []

    want_plot = "plot" in formats and command in PLOTTABLE
    if "json" in formats:
        path = out / f"{command}.json"
        _atomic_write(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")
        written.append(path)
    if "csv" in formats or want_plot:
        path = out / f"{command}.csv"
        _atomic_write(path, _csv_text(results["columns"], results["rows"]))
        written.append(path)
    if want_plot:
        path = out / f"plot_{command}.py"
        _atomic_write(path, _PLOT_SCRIPTS[command])
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# Request plumbing
# ---------------------------------------------------------------------------


def _load_config(args) -> RunConfig | None:
    if args.config is None:
        if args.command == "figure-h":
            return None
        raise ConfigError(
            f"{args.command} requires --config with a [model] section "
            "(beta_L, beta_R, gamma, lambda)"
        )
    path = Path(args.config)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"))


def _apply_overrides(cfg: RunConfig | None, args) -> RunConfig | None:
    if cfg is None:
        return None
    if args.n is not None:
        cfg = dataclasses.replace(cfg, n_list=parse_n_list(args.n))
    if args.abs_tol is not None:
        quad = dataclasses.replace(cfg.quadrature, abs_tol=args.abs_tol)
        cfg = dataclasses.replace(cfg, quadrature=quad)
    if args.out is not None:
        cfg = dataclasses.replace(cfg, out_dir=args.out)
    if args.format is not None:
        cfg = dataclasses.replace(cfg, formats=parse_formats(args.format))
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    return cfg


def _single_n(args, cfg_name: str, default: int) -> int:
    if args.n is None:
        return default
    values = parse_n_list(args.n)
    if len(values) != 1:
        raise ConfigError(f"{cfg_name} takes a single --n value, got {list(values)}")
    return values[0]


def _build_payload(command: str, cfg: RunConfig | None, args) -> dict:
    if command == "figure-h":
        return {"points": FIGURE_H_POINTS}
    assert cfg is not None
    p = cfg.params
    q = cfg.quadrature
    payload: dict = {
        "params": {
            "beta_L": p.beta_L,
            "beta_R": p.beta_R,
            "gamma": p.gamma,
            "lambda": p.lam,
        },
        "quadrature": {
            "abs_tol": q.abs_tol,
            "rel_tol": q.rel_tol,
            "max_subdivisions": q.max_subdivisions,
            "max_fourier_index": q.max_fourier_index,
        },
    }
    if command in ("spectrum", "entropy", "converge"):
        payload["n_list"] = list(cfg.n_list)
    elif command == "matrix":
        payload["n"] = _single_n(args, "matrix", 8)
    elif command == "coeffs":
        payload["x_max"] = _single_n(args, "coeffs", 16)
    elif command == "oracle-check":
        # Oracle sizes come from --n, not [run] n_list: the dense oracle caps
        # at 10 sites while the ladder commands default to hundreds.
        ns = parse_n_list(args.n) if args.n is not None else ORACLE_DEFAULT_NS
        payload["n_list"] = list(ns)
        payload["seed"] = cfg.seed
    return payload


async def _post(command: str, payload: dict, server: str | None) -> httpx.Response:
    path = f"/{command}"
    if server:
        async with httpx.AsyncClient(base_url=server, timeout=600.0) as client:
            return await client.post(path, json=payload)
    from .service import create_app

    transport = httpx.ASGITransport(app=create_app())
    async with httpx.AsyncClient(
        transport=transport, base_url="http://xyent.internal", timeout=None
    ) as client:
        return await client.post(path, json=payload)


def _emit_error(kind: str, message: str, exit_code: int) -> int:
    record = {"error": {"exit_code": exit_code, "kind": kind, "message": message}}
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
    return exit_code


def _run_command(args) -> int:
    cfg = _apply_overrides(_load_config(args), args)
    if cfg is not None and not cfg.params.theorem_domain:
        sys.stderr.write(
            "warning: parameters leave the asymptotic theorem domain "
            "(need 0 <= delta < beta < inf); computations proceed anyway\n"
        )
    out_dir = cfg.out_dir if cfg is not None else (args.out or ".")
    formats = cfg.formats if cfg is not None else (
        parse_formats(args.format) if args.format else DEFAULT_FORMATS
    )

    payload = _build_payload(args.command, cfg, args)
    response = asyncio.run(_post(args.command, payload, args.server))

    if response.status_code != 200:
        try:
            error = response.json()["error"]
            code = int(error.get("exit_code", 1))
            return _emit_error(str(error.get("kind", "Error")), str(error.get("message", "")), code)
        except (KeyError, ValueError):
            return _emit_error("HTTPError", f"status {response.status_code}: {response.text[:500]}", 1)

    for path in _write_artifacts(args.command, response.json(), out_dir, formats):
        print(path)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0
    try:
        return _run_command(args)
    except ConfigError as exc:
        return _emit_error(type(exc).__name__, str(exc), exc.exit_code)
    except httpx.HTTPError as exc:
        return _emit_error(type(exc).__name__, str(exc), 1)
    except Exception as exc:  # pragma: no cover - defensive catch-all
        return _emit_error(type(exc).__name__, str(exc), 1)


if __name__ == "__main__":
    raise SystemExit(main())
