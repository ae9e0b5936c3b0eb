"""Command-line front end.

    haytham [--config FILE] GROUP ACTION [options]

Angles are given in degrees; hour fractions as ``k/12`` or decimals. A
config file holds ``key = value`` lines naming long options (``lat = 30``);
options on the command line override it. Exit status is 0 when every
requested check passes, 1 when a check fails (the failing step goes to
stderr) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import dioptrics, euclid, gnomonics, kinematics, lemma
from .geometry import DegenerateError, DomainError
from .transcript import ProofTranscript

log = logging.getLogger("haytham")


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


def _fraction(text: str) -> float:
    try:
        return float(lemma.HourFraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _rad(deg: float) -> float:
    return math.radians(deg)


def read_config(path: str) -> list[str]:
    """Turn a flat ``key = value`` file into option tokens."""
    tokens: list[str] = []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        opt = "--" + key.replace("_", "-")
        if value.lower() in ("true", "yes", "on"):
            tokens.append(opt)
        elif value.lower() in ("false", "no", "off"):
            continue
        else:
            tokens.extend([opt, *value.split()])
    return tokens


def _write(path: str | None, text: str):
    if path:
        Path(path).write_text(text)
        log.info("wrote %s", path)


def _emit_transcript(t: ProofTranscript, args, quiet: bool = False):
    if not quiet:
        print(t.report())
    _write(getattr(args, "csv", None), t.to_csv())
    if not t.overall:
        raise CheckFailed("; ".join(f"{t.title}: step {s.name!r} failed" for s in t.failures()))


def _rng(args) -> np.random.Generator:
    return np.random.default_rng(args.seed)


# lemma ----------------------------------------------------------------------


def cmd_lemma_scan(args):
    cs = args.c or [k / 24 for k in range(1, 24)]
    grid = np.arange(1, int(round(90.0 / args.step)) + 1) * math.radians(args.step)
    bad = []
    for c in cs:
        hit = lemma.monotonicity_scan(c, grid)
        print(f"c = {c:.6f}: " + ("strictly decreasing" if hit is None else f"counterexample at {[math.degrees(v) for v in hit]} deg"))
        if hit is not None:
            bad.append(c)
    print(f"{len(cs)} fractions, {len(grid)} grid points each, {len(bad)} with counterexamples")
    if bad:
        raise CheckFailed(f"monotonicity fails for c = {bad}")


def _random_triples(rng, n):
    for _ in range(n):
        a, b = sorted(rng.uniform(0.0, 90.0, 2))
        if a == b or a == 0.0:
            continue
        yield _rad(a), _rad(b), float(rng.uniform(0.0, 1.0))


def cmd_lemma_transcript(args):
    if args.random:
        merged = ProofTranscript(f"global proof on {args.random} random triples (seed {args.seed})")
        for x, y, c in _random_triples(_rng(args), args.random):
            if c <= 0.0:
                continue
            for s in lemma.global_transcript(x, y, c):
                merged.steps.append(s)
        print(f"{len(merged)} steps, {len(merged.failures())} failures")
        _emit_transcript(merged, args, quiet=True)
        return
    _need(args, "x", "y", "c")
    _emit_transcript(lemma.global_transcript(_rad(args.x), _rad(args.y), args.c), args)


def cmd_lemma_chain(args):
    _need(args, "x", "y", "c")
    provider = lemma.ratio_eta if args.provider == "ratio" else None
    cert = lemma.chain_certificate(_rad(args.x), _rad(args.y), args.c, provider)
    t = ProofTranscript(f"chain x={args.x} y={args.y} c={args.c:.6g} ({cert.steps} links)")
    for k in range(cert.steps):
        t.add(f"f at {math.degrees(cert.points[k + 1]):.9f} > f at {math.degrees(cert.points[k]):.9f}", cert.values[k], "<", cert.values[k + 1])
    print(f"{cert.steps} links from {args.y} deg down to {args.x} deg, smallest eta {math.degrees(min(cert.etas)):.3e} deg")
    _emit_transcript(t, args, quiet=not args.verbose)


# figure ---------------------------------------------------------------------


def cmd_figure_verify(args):
    if args.random:
        merged = ProofTranscript(f"figure identities on {args.random} random figures (seed {args.seed})")
        for x, y, c in _random_triples(_rng(args), args.random):
            try:
                fig = euclid.build_figure(x, y, c)
            except (DegenerateError, DomainError):
                continue
            merged.steps.extend(s for s in euclid.verify_figure_identities(fig) if s.relation == "=")
        print(f"{len(merged)} identity steps, {len(merged.failures())} failures")
        _emit_transcript(merged, args, quiet=True)
        return
    _need(args, "x", "y", "c")
    _emit_transcript(euclid.verify_figure_identities(euclid.build_figure(_rad(args.x), _rad(args.y), args.c)), args)


def cmd_figure_eta(args):
    _need(args, "y", "c")
    y = _rad(args.y)
    eta = euclid.local_eta(y, args.c)
    fy, fh = lemma.f_ratio(y, args.c), lemma.f_ratio(y - eta / 2, args.c)
    print(f"eta = {math.degrees(eta):.9g} deg; f(y - eta/2) = {fh:.12g} > f(y) = {fy:.12g}")
    if not (eta > 0.0 and fh > fy):
        raise CheckFailed("local neighbourhood check failed")


def cmd_figure_svg(args):
    _need(args, "x", "y", "c", "svg")
    fig = euclid.build_figure(_rad(args.x), _rad(args.y), args.c)
    _write(args.svg, euclid.figure_svg(fig))


# sundial --------------------------------------------------------------------


def _sundial_config(args, c):
    return gnomonics.SundialConfig(_rad(args.lat), c, _rad(args.obliquity), args.gnomon)


def cmd_sundial_lines(args):
    fractions = [args.c] if args.c else [float(lemma.HourFraction.twelfths(k)) for k in range(1, 12)]
    for c in fractions:
        line = gnomonics.hour_line(_sundial_config(args, c), args.n)
        dev = line.deviation
        print(f"c = {c:.6f}: {len(line.samples)} samples, ratio {dev.ratio:.6f}, max deviation {dev.max_abs:.4f} barleycorn")
    if args.csv:
        if not args.c:
            raise UsageError("--csv needs a single --c")
        _write(args.csv, gnomonics.hour_line(_sundial_config(args, args.c), args.n).to_csv())
    if args.svg:
        _write(args.svg, gnomonics.dial_svg(_rad(args.lat), _rad(args.obliquity), args.n))


def cmd_sundial_deviation(args):
    fractions = [args.c] if args.c else [float(lemma.HourFraction.twelfths(k)) for k in range(1, 12)]
    failed = []
    for c in fractions:
        rep = gnomonics.deviation_report(_sundial_config(args, c), args.n)
        print(f"c = {c:.6f}: {rep.verdict}")
        if not rep.within_bounds:
            failed.append(c)
    if failed:
        raise CheckFailed(f"deviation bounds exceeded for c = {failed}")


# dioptre --------------------------------------------------------------------


def _model(args):
    if args.model == "snell":
        return dioptrics.SnellModel(args.n)
    if args.model == "ptolemy":
        return dioptrics.TableModel.ptolemy()
    return dioptrics.TableModel()


def cmd_dioptre_trace(args):
    model = _model(args)
    if args.sweep:
        lo, hi, step = args.sweep
        incidences = list(np.arange(lo, hi + 0.5 * step, step))
    elif args.i:
        incidences = args.i
    else:
        raise UsageError("give --i or --sweep")
    grid = [_rad(i) for i in incidences]
    for i in grid:
        tr = dioptrics.trace_ray(model, i)
        print(f"i = {math.degrees(i):g} deg: d = {math.degrees(tr.d):.6f} deg, crossing_x = {tr.crossing_x:.5f}")
    _write(args.csv, dioptrics.sweep_csv(model, grid))


def _law_grid(model, step):
    cap = min(model.validity_limit(), model.max_incidence)
    return [_rad(v) for v in np.arange(step, 90.0, step) if _rad(v) <= cap]


def cmd_dioptre_laws(args):
    model = _model(args)
    if isinstance(model, dioptrics.SnellModel):
        grid = [_rad(v) for v in np.arange(args.step, 90.0, args.step)]
    else:
        grid = _law_grid(model, args.step)
    _emit_transcript(dioptrics.laws_check(model, grid), args)


def cmd_dioptre_prop3(args):
    _need(args, "i1", "i2")
    _emit_transcript(dioptrics.prop3_transcript(_rad(args.i1), _rad(args.i2), _model(args)), args)


def cmd_dioptre_focus(args):
    model = _model(args)
    rep = dioptrics.beam_report(model)
    grid = [i for i in _law_grid(model, 0.5) if dioptrics.excess(model, i) > 0.0]
    hit = dioptrics.no_convergence_check(model, grid)
    print(f"area of beam i >= 50 deg: {rep.area_hi:.6f}; area of beam i <= 40 deg: {rep.area_lo:.6f}")
    print(rep.focus_verdict)
    print("crossings strictly decreasing on the 0.5 deg grid" if hit is None else f"crossings not decreasing at {hit}")
    if args.svg:
        _write(args.svg, dioptrics.rays_svg(model, [i for i in _law_grid(model, 5.0) if dioptrics.excess(model, i) > 0.0]))
    if args.csv:
        _write(args.csv, dioptrics.sweep_csv(model, grid))
    if hit is not None or not rep.concentrated:
        raise CheckFailed("focus: " + ("monotone crossings" if hit is not None else "beam concentration"))


# sky ------------------------------------------------------------------------


def _body(args):
    lam0 = _rad(args.lambda0)
    return {"sun": kinematics.BodyModel.sun, "moon": kinematics.BodyModel.moon, "star": kinematics.BodyModel.fixed_star}[args.body](lam0)


def cmd_sky_prop28(args):
    model, phi = _body(args), _rad(args.lat)
    rep = kinematics.prop28_report(model, phi, args.day)
    print(rep.text())
    if args.csv:
        h = args.window / 24.0
        traj = kinematics.trajectory(model, phi, rep.t_transit - h, rep.t_transit + h, args.samples)
        _write(args.csv, kinematics.trajectory_csv(traj))
    if rep.southward and model.rate > 0.0 and not rep.t_max < rep.t_transit:
        raise CheckFailed("altitude maximum does not precede transit")


def cmd_sky_moon_max(args):
    idm, rep = kinematics.moon_month_max(_rad(args.lat), _rad(args.lambda0), args.step)
    print(f"largest ID arc over one synodic month: {math.degrees(idm) * 60:.4f} arcmin ({math.degrees(idm):.6f} deg)")
    print(rep.text())
    if args.expect:
        lo, hi = args.expect
        if not lo <= math.degrees(idm) <= hi:
            raise CheckFailed(f"moon-max: {math.degrees(idm):.6f} deg outside [{lo}, {hi}] deg")


def cmd_sky_east_set(args):
    model = _body(args)
    span = (_rad(args.lat_from), _rad(args.lat_to), _rad(args.lat_step))
    ev = kinematics.east_set_search(span, model, (0.0, args.days))
    if ev is None:
        print("no setting east of the meridian found")
    else:
        print(
            f"east setting at latitude {math.degrees(ev.phi):.4f} deg, t = {ev.t:.6f} d, "
            f"H = {math.degrees(ev.H):.6f} deg, azimuth {math.degrees(ev.azimuth):.4f} deg"
        )


# parser ---------------------------------------------------------------------


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n for n in missing))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", metavar="FILE", help="key = value file supplying any option (options override it)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized runs")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = argparse.ArgumentParser(prog="haytham", description=__doc__.split("\n\n")[0], allow_abbrev=False)
    p.add_argument("--config", metavar="FILE", help="key = value file supplying options of the chosen action")
    groups = p.add_subparsers(dest="group", required=True, metavar="GROUP")

    def action(group, name, func, help):
        sp = group.add_parser(name, help=help, parents=[common], allow_abbrev=False, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        sp.set_defaults(func=func)
        return sp

    # lemma
    g = groups.add_parser("lemma", help="monotonicity of sin x / sin(cx)").add_subparsers(dest="action", required=True, metavar="ACTION")
    sp = action(g, "scan", cmd_lemma_scan, "scan f for strict decrease")
    sp.add_argument("--c", type=_fraction, action="append", help="hour fraction (repeatable; default all k/24)")
    sp.add_argument("--step", type=float, default=0.05, help="grid step in degrees")
    sp = action(g, "transcript", cmd_lemma_transcript, "six-step global proof transcript")
    _xyc(sp)
    sp.add_argument("--random", type=int, metavar="N", help="run N random triples instead")
    sp.add_argument("--csv", metavar="PATH")
    sp = action(g, "chain", cmd_lemma_chain, "finite chain of local neighbourhoods from y down to x")
    _xyc(sp)
    sp.add_argument("--provider", choices=["figure", "ratio"], default="figure", help="neighbourhood source")
    sp.add_argument("--csv", metavar="PATH")

    # figure
    g = groups.add_parser("figure", help="local-proof figure").add_subparsers(dest="action", required=True, metavar="ACTION")
    sp = action(g, "verify", cmd_figure_verify, "check figure identities and bounds")
    _xyc(sp)
    sp.add_argument("--random", type=int, metavar="N", help="check the identities on N random figures instead")
    sp.add_argument("--csv", metavar="PATH")
    sp = action(g, "eta", cmd_figure_eta, "radius of the verified left neighbourhood of y")
    sp.add_argument("--y", type=float, help="degrees")
    sp.add_argument("--c", type=_fraction)
    sp = action(g, "svg", cmd_figure_svg, "draw the figure")
    _xyc(sp)
    sp.add_argument("--svg", metavar="PATH")

    # sundial
    g = groups.add_parser("sundial", help="seasonal hour lines").add_subparsers(dest="action", required=True, metavar="ACTION")
    for name, func, hlp in (
        ("lines", cmd_sundial_lines, "sample hour lines"),
        ("deviation", cmd_sundial_deviation, "compare hour-line curvature with the straightness bounds"),
    ):
        sp = action(g, name, func, hlp)
        sp.add_argument("--lat", type=float, default=30.0, help="latitude, degrees")
        sp.add_argument("--c", type=_fraction, help="hour fraction (default: all k/12)")
        sp.add_argument("--obliquity", type=float, default=23.5, help="degrees")
        sp.add_argument("--gnomon", type=float, default=18.0, help="gnomon length in barleycorns")
        sp.add_argument("--n", type=int, default=65, help="declination samples")
        if name == "lines":
            sp.add_argument("--csv", metavar="PATH")
            sp.add_argument("--svg", metavar="PATH")

    # dioptre
    g = groups.add_parser("dioptre", help="refraction by a glass sphere").add_subparsers(dest="action", required=True, metavar="ACTION")
    specs = (
        ("trace", cmd_dioptre_trace, "trace rays"),
        ("laws", cmd_dioptre_laws, "check the refraction laws"),
        ("prop3", cmd_dioptre_prop3, "no common crossing of two rays"),
        ("focus", cmd_dioptre_focus, "beam areas and burning region"),
    )
    for name, func, hlp in specs:
        sp = action(g, name, func, hlp)
        sp.add_argument("--model", choices=["snell", "table", "ptolemy"], default="snell")
        sp.add_argument("--n", type=float, default=1.5, help="refractive index (snell)")
        if name == "trace":
            sp.add_argument("--i", type=float, nargs="+", help="incidences, degrees")
            sp.add_argument("--sweep", type=float, nargs=3, metavar=("FROM", "TO", "STEP"))
            sp.add_argument("--csv", metavar="PATH")
        elif name == "laws":
            sp.add_argument("--step", type=float, default=1.0, help="grid step, degrees")
            sp.add_argument("--csv", metavar="PATH")
        elif name == "prop3":
            sp.add_argument("--i1", type=float)
            sp.add_argument("--i2", type=float)
            sp.add_argument("--csv", metavar="PATH")
        else:
            sp.add_argument("--csv", metavar="PATH")
            sp.add_argument("--svg", metavar="PATH")

    # sky
    g = groups.add_parser("sky", help="altitude maximum and meridian transit").add_subparsers(dest="action", required=True, metavar="ACTION")
    sp = action(g, "prop28", cmd_sky_prop28, "maximum altitude versus transit on one day")
    _body_args(sp, "sun")
    sp.add_argument("--lat", type=float, default=33.0)
    sp.add_argument("--day", type=float, default=30.0)
    sp.add_argument("--window", type=float, default=1.0, help="trajectory half-window for --csv, hours")
    sp.add_argument("--samples", type=int, default=121)
    sp.add_argument("--csv", metavar="PATH")
    sp = action(g, "moon-max", cmd_sky_moon_max, "largest ID arc over a synodic month")
    sp.add_argument("--lat", type=float, default=33.0)
    sp.add_argument("--lambda0", type=float, default=0.0, help="initial ecliptic longitude, degrees")
    sp.add_argument("--step", type=float, default=0.25, help="day step")
    sp.add_argument("--expect", type=float, nargs=2, metavar=("LO", "HI"), help="required range, degrees")
    sp = action(g, "east-set", cmd_sky_east_set, "search for a setting east of the meridian")
    _body_args(sp, "sun")
    sp.add_argument("--lat-from", type=float, default=66.0)
    sp.add_argument("--lat-to", type=float, default=67.0)
    sp.add_argument("--lat-step", type=float, default=0.1)
    sp.add_argument("--days", type=float, default=3.0)
    return p


def _xyc(sp):
    sp.add_argument("--x", type=float, help="degrees")
    sp.add_argument("--y", type=float, help="degrees")
    sp.add_argument("--c", type=_fraction, help="fraction, k/12 or decimal")


def _body_args(sp, default):
    sp.add_argument("--body", choices=["sun", "moon", "star"], default=default)
    sp.add_argument("--lambda0", type=float, default=90.0, help="initial ecliptic longitude, degrees")


def _splice_config(argv: list[str]) -> list[str]:
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if not known.config:
        return rest
    tokens = read_config(known.config)
    positional = [k for k, a in enumerate(rest) if not a.startswith("-")][:2]
    at = positional[-1] + 1 if len(positional) == 2 else len(rest)
    return rest[:at] + tokens + rest[at:]


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_splice_config(argv))
    except UsageError as exc:
        print(f"haytham: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except CheckFailed as exc:
        print(f"haytham: check failed: {exc}", file=sys.stderr)
        return 1
    except (UsageError, DomainError, DegenerateError) as exc:
        print(f"haytham: error: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())
