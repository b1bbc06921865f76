"""Command-line front end: loads map definition files, dispatches the
analyses, and emits deterministic JSON reports (stdout) plus a short
human-readable summary (stderr).

Exit codes: 0 clean, 1 error, 3 violations or unconfirmed points found.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import asdict, dataclass
from importlib import resources

import click
import jsonschema
import numpy as np

from . import exceptional as exc
from . import lattice as lat
from . import series as ser
from .gaussian import GaussianRational
from .poly import ParseError, Poly, PolyMap, jacobian, parse_expression

EXIT_VIOLATIONS = 3


@dataclass
class RunConfig:
    seed: int = 0
    order: int = 16
    window: int = 8
    box: int = 4
    ring_m: int = 1
    trials: int = 3
    samples: int = 5
    tol: float = 1e-9


class MapFileError(RuntimeError):
    pass


def load_map_file(path):
    """Parse a JSON map file into (PolyMap, metadata dict)."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise MapFileError(f"cannot read map file {path}: {e}")
    for key in ("name", "p", "q"):
        if key not in data:
            raise MapFileError(f"map file {path} is missing required field '{key}'")
    variables = tuple(data.get("variables", ["x", "y"]))
    try:
        p = parse_expression(data["p"], variables)
        q = parse_expression(data["q"], variables)
    except ParseError as e:
        raise MapFileError(f"map file {path}: {e}")
    F = PolyMap(p, q)
    if data.get("integral") and not F.is_integral():
        raise MapFileError(f"map file {path}: 'integral' is set but coefficients are not Gaussian integers")
    curve = None
    if data.get("curve"):
        try:
            curve = exc.PlaneCurveSet(parse_expression(data["curve"], ("u", "v")), ["supplied"])
        except ParseError as e:
            raise MapFileError(f"map file {path}: bad curve field: {e}")
    meta = {
        "name": data["name"],
        "p": data["p"],
        "q": data["q"],
        "curve": data.get("curve"),
        "metadata": data.get("metadata", {}),
    }
    return F, curve, meta


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating,)):
        x = float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, float):
        if math.isinf(x) or math.isnan(x):
            return None
        return x
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _schema():
    with resources.files("planejac.schemas").joinpath("report.schema.json").open() as fh:
        return json.load(fh)


def emit(command, meta, config, result, pretty, summary_lines, exit_code=0):
    report = {
        "command": command,
        "map": {k: v for k, v in meta.items() if k in ("name", "p", "q", "curve")},
        "config": asdict(config),
        "result": _jsonable(result),
    }
    jsonschema.validate(report, _schema())
    if pretty:
        out = json.dumps(report, sort_keys=True, indent=2)
    else:
        out = json.dumps(report, sort_keys=True, separators=(",", ":"))
    click.echo(out)
    for line in summary_lines:
        click.echo(line, err=True)
    sys.exit(exit_code)


def _parse_gaussian_constant(text):
    p = parse_expression(text, ())
    if not p.is_constant():
        raise click.BadParameter(f"{text!r} is not a constant")
    return p.constant_value()


config_options = [
    click.option("--seed", type=int, default=0, show_default=True),
    click.option("--order", "-N", type=int, default=16, show_default=True),
    click.option("--window", "-W", type=int, default=8, show_default=True),
    click.option("--box", "-B", type=int, default=4, show_default=True),
    click.option("--ring-m", type=int, default=1, show_default=True),
    click.option("--trials", "-T", type=int, default=3, show_default=True),
    click.option("--samples", "-S", type=int, default=5, show_default=True),
    click.option("--tol", type=float, default=1e-9, show_default=True),
    click.option("--json", "output_json", flag_value=True, default=True, help="compact JSON (default)"),
    click.option("--pretty", "output_json", flag_value=False, help="indented JSON"),
]


def with_config(f):
    for opt in reversed(config_options):
        f = opt(f)
    return f


def _config(kw):
    return RunConfig(seed=kw["seed"], order=kw["order"], window=kw["window"],
                     box=kw["box"], ring_m=kw["ring_m"], trials=kw["trials"],
                     samples=kw["samples"], tol=kw["tol"])


@click.group()
def main():
    """Exact-arithmetic toolkit for plane polynomial maps over Z[i]."""


def _load(mapfile):
    try:
        return load_map_file(mapfile)
    except MapFileError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)


@main.command()
@click.argument("mapfile", type=click.Path(exists=True))
@with_config
def check(mapfile, **kw):
    """Jacobian and degree report for a map file."""
    cfg = _config(kw)
    F, _, meta = _load(mapfile)
    jf = jacobian(F)
    is_unit = jf.is_constant() and jf.constant_value() == GaussianRational(1)
    result = {
        "jacobian": str(jf),
        "is_unit": is_unit,
        "is_constant": jf.is_constant(),
        "deg_p": F.deg_p,
        "deg_q": F.deg_q,
        "deg_gcd": F.deg_gcd,
        "integral": F.is_integral(),
    }
    emit("check", meta, cfg, result, not kw["output_json"],
         [f"{meta['name']}: JF = {result['jacobian']}"
          + (" (unit Jacobian)" if is_unit else "")])


@main.command()
@click.argument("mapfile", type=click.Path(exists=True))
@click.option("--translate", default=None,
              help="a,b to translate by before inverting (Gaussian integer constants)")
@with_config
def invert(mapfile, translate, **kw):
    """Truncated formal local inverse and tail verdicts."""
    cfg = _config(kw)
    F, _, meta = _load(mapfile)
    try:
        if translate:
            parts = translate.split(",")
            if len(parts) != 2:
                raise click.BadParameter("--translate expects 'a,b'")
            a = _parse_gaussian_constant(parts[0])
            b = _parse_gaussian_constant(parts[1])
            F = ser.translate_map(F, a, b)
        G = ser.local_inverse(F, cfg.order)
    except ValueError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    FG = ser.compose_truncated(G, F)
    res_u = FG.g1 - ser.TruncSeries2(cfg.order, {(1, 0): 1})
    res_v = FG.g2 - ser.TruncSeries2(cfg.order, {(0, 1): 1})
    resid = max(
        res_u.max_nonzero_degree() or 0,
        res_v.max_nonzero_degree() or 0,
    )
    su, _ = ser.restrict_to_axis(G, "u")
    sv, _ = ser.restrict_to_axis(G, "v")
    window = min(cfg.window, cfg.order)
    result = {
        "inverse": {"g1": G.g1.to_json(), "g2": G.g2.to_json()},
        "inverse_str": {"g1": str(G.g1), "g2": str(G.g2)},
        "roundtrip_residual": "0" if resid == 0 else f"nonzero at degree {resid}",
        "axis_u": {"series": str(su), "tail": ser.detect_polynomial_tail(su, window)},
        "axis_v": {"series": str(sv), "tail": ser.detect_polynomial_tail(sv, window)},
    }
    emit("invert", meta, cfg, result, not kw["output_json"],
         [f"{meta['name']}: inverse to order {cfg.order}, residual {result['roundtrip_residual']}"])


@main.command()
@click.argument("mapfile", type=click.Path(exists=True))
@with_config
def exceptional(mapfile, **kw):
    """Non-proper candidates, certification, critical values, degree."""
    cfg = _config(kw)
    F, _, meta = _load(mapfile)
    try:
        cand = exc.nonproper_candidates(F)
        crit = exc.critical_values(F)
        deg = exc.topological_degree(F, trials=cfg.trials, seed=cfg.seed + 1, tol=cfg.tol)
        verdicts = exc.certify_nonproper(F, cand, samples=cfg.samples,
                                         seed=cfg.seed, deg_geo=deg.deg_geo)
        full = exc.exceptional_set(F, samples=cfg.samples, seed=cfg.seed)
    except (exc.ExceptionalError, ValueError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    result = {
        "defining": str(full.defining),
        "degree": full.degree,
        "components": verdicts,
        "nonproper_candidates": cand.to_json(),
        "critical_values": crit.to_json(),
        "deg_geo": deg.to_json(),
        "certification": f"certified by sampling ({cfg.samples} points, tolerance {cfg.tol})",
    }
    emit("exceptional", meta, cfg, result, not kw["output_json"],
         [f"{meta['name']}: A_F defined by {result['defining']} (deg_geo = {deg.deg_geo})"])


@main.command()
@click.argument("mapfile", type=click.Path(exists=True))
@click.option("-k", "k_text", default="0", show_default=True, help="fiber level (Gaussian integer)")
@with_config
def fibers(mapfile, k_text, **kw):
    """Ring lattice points on the fiber P = k inside the box."""
    cfg = _config(kw)
    F, curve, meta = _load(mapfile)
    try:
        kq = _parse_gaussian_constant(k_text)
        box = lat.LatticeBox(cfg.box, cfg.ring_m)
        fset = lat.enumerate_fiber_points(F.p, kq, box)
    except (ValueError, click.BadParameter) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    result = fset.to_json()
    bounds = None
    try:
        if curve is None:
            curve = exc.exceptional_set(F, samples=cfg.samples, seed=cfg.seed)
        if not curve.is_empty():
            deg = exc.topological_degree(F, trials=cfg.trials, seed=cfg.seed + 1, tol=cfg.tol)
            b4, b5 = lat.fiber_count_bounds(F, deg.deg_geo, curve)
            bounds = {"bound4": b4, "bound5": b5}
    except (exc.ExceptionalError, ValueError):
        bounds = None
    result["bound4"] = bounds["bound4"] if bounds else None
    result["bound5"] = bounds["bound5"] if bounds else None
    emit("fibers", meta, cfg, result, not kw["output_json"],
         [f"{meta['name']}: {result['count']} fiber points at k = {k_text}, B = {cfg.box}"])


@main.command()
@click.argument("mapfile", type=click.Path(exists=True))
@click.argument("which", type=click.Choice(["dist", "dhat", "bounds"]))
@with_config
def verify(mapfile, which, **kw):
    """Inequality and bound verification sweeps over the lattice box."""
    cfg = _config(kw)
    F, curve, meta = _load(mapfile)
    box = lat.LatticeBox(cfg.box, cfg.ring_m)
    try:
        if curve is None:
            curve = exc.exceptional_set(F, samples=cfg.samples, seed=cfg.seed)
    except (exc.ExceptionalError, ValueError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    code = 0
    if which == "dist":
        result = lat.verify_dist_inequality(F, curve, box, tol=cfg.tol)
        bad = len(result["unconfirmed"])
        if bad:
            code = EXIT_VIOLATIONS
        line = f"{meta['name']}: dist sweep B={cfg.box}, {bad} unconfirmed of {result['checked']}"
    elif which == "dhat":
        result = lat.verify_dhat_inequality(F, curve, box, tol=cfg.tol)
        bad = len(result["violations"])
        if bad:
            code = EXIT_VIOLATIONS
        line = f"{meta['name']}: dhat sweep B={cfg.box}, {bad} violations of {result['checked']}"
    else:
        try:
            deg = exc.topological_degree(F, trials=cfg.trials, seed=cfg.seed + 1, tol=cfg.tol)
            b4, b5 = lat.fiber_count_bounds(F, deg.deg_geo, curve)
        except (exc.ExceptionalError, ValueError) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(1)
        sweep = []
        exceeded = False
        for k in ("0", "1", "-1", "2", "-2", "i"):
            kq = _parse_gaussian_constant(k)
            fset = lat.enumerate_fiber_points(F.p, kq, box)
            n = fset.count()
            over = n > min(b4, b5)
            exceeded = exceeded or over
            sweep.append({"k": k, "count": n, "line_fiber": fset.line_fiber is not None,
                          "exceeds": over})
        result = {"bound4": b4, "bound5": b5, "deg_geo": deg.deg_geo,
                  "curve_degree": curve.degree, "sweep": sweep}
        if exceeded:
            code = EXIT_VIOLATIONS
        line = (f"{meta['name']}: bounds {b4} / {b5}, "
                f"max count {max(s['count'] for s in sweep)}")
    result["curve"] = curve.to_json()
    emit("verify", meta, cfg, result, not kw["output_json"], [line], exit_code=code)


if __name__ == "__main__":
    main()
