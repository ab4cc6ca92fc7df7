"""Experiment runner CLI.

A thin client: every command builds a parameter map, posts it to the
in-process service app, and writes the response as a CSV or JSON artifact
with the resolved configuration echoed in the header.  Exit codes: 0 on
success, 2 on tolerance/convergence failure, 3 on configuration errors.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from . import __version__
from .service import create_app

EXIT_TOLERANCE = 2
EXIT_CONFIG = 3

# bad flags and bad values are configuration errors (exit 3), keeping 2 for
# tolerance failures only
click.UsageError.exit_code = EXIT_CONFIG


def _client() -> httpx.Client:
    # sync httpx client against the in-process ASGI app
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient
        return TestClient(create_app(), base_url="http://holonum.local",
                          raise_server_exceptions=False)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _render_csv(payload: dict) -> str:
    lines = [f"# holonum {payload['version']}",
             f"# experiment: {payload['experiment']}",
             f"# config: {json.dumps(payload['config'], sort_keys=True)}"]
    for key, val in sorted(payload.get("extra", {}).items()):
        lines.append(f"# {key}: {json.dumps(val, sort_keys=True)}")
    lines.append(",".join(payload["columns"]))
    for row in payload["rows"]:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _render_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit(payload: dict, out: str | None, fmt: str) -> None:
    text = _render_csv(payload) if fmt == "csv" else _render_json(payload)
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _run(name: str, params: dict, out: str | None, fmt: str) -> None:
    if fmt not in ("csv", "json"):
        click.echo(f"error: unknown format {fmt!r}", err=True)
        sys.exit(EXIT_CONFIG)
    with _client() as client:
        resp = client.post(f"/run/{name}", json={"params": params})
    if resp.status_code == 200:
        _emit(resp.json(), out, fmt)
        return
    detail = resp.json().get("detail", resp.text)
    click.echo(f"error: {detail}", err=True)
    sys.exit(EXIT_TOLERANCE if resp.status_code == 409 else EXIT_CONFIG)


def _common(fn):
    fn = click.option("--out", type=click.Path(dir_okay=False), default=None,
                      help="artifact path (default: stdout)")(fn)
    fn = click.option("--format", "fmt", default="csv",
                      type=click.Choice(["csv", "json"]),
                      help="artifact format")(fn)
    return fn


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        click.echo(f"error: expected comma-separated numbers, got {text!r}",
                   err=True)
        sys.exit(EXIT_CONFIG)


@click.group()
@click.version_option(__version__)
def main():
    """Reproducible numerical experiments."""


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON file: {experiment, params, output_path, format}")
def run(config_path):
    """Run an experiment described by a JSON config file."""
    try:
        cfg = json.loads(Path(config_path).read_text())
    except json.JSONDecodeError as exc:
        click.echo(f"error: config parse failure at line {exc.lineno}, "
                   f"column {exc.colno}: {exc.msg}", err=True)
        sys.exit(EXIT_CONFIG)
    allowed = {"experiment", "params", "output_path", "format"}
    unknown = set(cfg) - allowed
    if unknown or "experiment" not in cfg:
        click.echo(f"error: config keys must be within {sorted(allowed)} and "
                   "include 'experiment'", err=True)
        sys.exit(EXIT_CONFIG)
    _run(cfg["experiment"], cfg.get("params", {}), cfg.get("output_path"),
         cfg.get("format", "json"))


@main.command()
@click.option("--a", "a_coeffs", default="-3", help="series a(x) coefficients")
@click.option("--b", "b_coeffs", default="0,0,1", help="series b(x) coefficients")
@click.option("--order", default=8, type=int)
@_common
def frobenius(a_coeffs, b_coeffs, order, out, fmt):
    """Frobenius solution of y'' + (a(x)/x) y' + (b(x)/x^2) y = 0."""
    _run("frobenius", {"a": _floats(a_coeffs), "b": _floats(b_coeffs),
                       "order": order}, out, fmt or "json")


@main.command()
@click.option("--a", default=0.5, type=float, help="geometric ratio")
@click.option("--n-max", default=12, type=int)
@_common
def fourier(a, n_max, out, fmt):
    """Fourier coefficients of the conjugate Poisson boundary function."""
    _run("fourier", {"a": a, "n_max": n_max}, out, fmt)


@main.command("residue-sum")
@click.option("--numerator", default="1", help="P coefficients, ascending")
@click.option("--denominator", default="1,0,1", help="Q coefficients, ascending")
@click.option("--x", "x_values", default="0,0.7", help="evaluation points")
@click.option("--direct-limit", default=10 ** 6, type=int)
@_common
def residue_sum(numerator, denominator, x_values, direct_limit, out, fmt):
    """sum R(n) e^{inx} by residues vs the direct lattice sum."""
    _run("residue-sum", {"numerator": _floats(numerator),
                         "denominator": _floats(denominator),
                         "x": _floats(x_values),
                         "direct_limit": direct_limit}, out, fmt)


@main.command()
@click.option("--polygon", "polygon_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON file {vertices: [[x,y],...], prevertices: [...]}")
@click.option("--trace-points", default=256, type=int)
@_common
def conformal(polygon_path, trace_points, out, fmt):
    """Disk-to-polygon map: prevertices, vertex images, boundary trace."""
    params = {"trace_points": trace_points}
    if polygon_path:
        try:
            data = json.loads(Path(polygon_path).read_text())
        except json.JSONDecodeError as exc:
            click.echo(f"error: polygon parse failure at line {exc.lineno}: "
                       f"{exc.msg}", err=True)
            sys.exit(EXIT_CONFIG)
        if "vertices" not in data:
            click.echo("error: polygon file needs a 'vertices' key", err=True)
            sys.exit(EXIT_CONFIG)
        params["vertices"] = data["vertices"]
        if data.get("prevertices") is not None:
            params["prevertices"] = data["prevertices"]
    _run("conformal", params, out, fmt)


@main.command("zeta-scan")
@click.option("--n-max", default=24, type=int)
@click.option("--m-max", default=5, type=int)
@click.option("--b-min", default=0.0, type=float)
@click.option("--b-max", default=15.0, type=float)
@click.option("--b-step", default=0.1, type=float)
@_common
def zeta_scan(n_max, m_max, b_min, b_max, b_step, out, fmt):
    """B-hat positivity table over a b grid."""
    _run("zeta-scan", {"n_max": n_max, "m_max": m_max, "b_min": b_min,
                       "b_max": b_max, "b_step": b_step}, out, fmt)


@main.command("zeta-zeros")
@click.option("--t-min", default=10.0, type=float)
@click.option("--t-max", default=20.0, type=float)
@click.option("--step", default=0.1, type=float)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", default="json",
              type=click.Choice(["csv", "json"]))
def zeta_zeros(t_min, t_max, step, out, fmt):
    """Critical-line zero brackets of xi(1/2 + it)."""
    _run("zeta-zeros", {"t_min": t_min, "t_max": t_max, "step": step}, out, fmt)


@main.command()
@click.option("--order", default=12, type=int)
@_common
def airy(order, out, fmt):
    """Series pair solving w'' = z w."""
    _run("airy", {"order": order}, out, fmt)


@main.command()
@click.option("--a", default=9, type=int)
@click.option("--b", default=0.9, type=float)
@click.option("--x", default=0.3, type=float)
@click.option("--m-max", default=6, type=int)
@_common
def weierstrass(a, b, x, m_max, out, fmt):
    """Nowhere-differentiability difference-quotient probe."""
    _run("weierstrass", {"a": a, "b": b, "x": x, "m_max": m_max}, out, fmt)


@main.command()
@click.option("--r", default=1.0, type=float)
@click.option("--l", default=1.0, type=float)
@click.option("--c", default=1.0, type=float)
@click.option("--e-a0", default=0.0, type=float)
@click.option("--e-a", default="0", help="source cosine coefficients")
@click.option("--e-b", default="1", help="source sine coefficients")
@click.option("--order", default=1, type=int)
@_common
def rlc(r, l, c, e_a0, e_a, e_b, order, out, fmt):
    """Steady-state RLC current, harmonic by harmonic."""
    _run("rlc", {"R": r, "L": l, "C": c, "e_a0": e_a0, "e_a": _floats(e_a),
                 "e_b": _floats(e_b), "order": order}, out, fmt)


@main.command("integral-eq")
@click.option("--n-modes", default=8, type=int)
@click.option("--coupling", default=0.3, type=float)
@_common
def integral_eq(n_modes, coupling, out, fmt):
    """Picard solution of the Wiener-algebra kernel equation preset."""
    _run("integral-eq", {"n_modes": n_modes, "coupling": coupling}, out, fmt)


if __name__ == "__main__":
    main()
