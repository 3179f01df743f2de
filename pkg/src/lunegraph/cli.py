"""Command-line front end.

Subcommands: build (point file -> edge list / metrics), grow (spiral
growth -> points, edges, trace, SVG), sweep-edges (edge-loss curve plus
power-law fit), sweep-grow (metrics per (beta, dtheta) run), render
(points + edges -> SVG), stability (half-plane-limit check).

Data goes to stdout or to files named by --*-out flags; diagnostics and
progress go to stderr, so outputs pipe cleanly.  A key=value config file
can preset any growth or sweep parameter; explicit flags win.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import (
    RandomSetConfig,
    edge_loss_sweep,
    fit_power_law,
    format_growth_sweep_csv,
    generate_random_set,
    growth_sweep,
)
from .geometry import Point
from .growth import GrowthConfig, grow
from .metrics import METRICS_CSV_HEADER, compute_metrics
from .render import RenderStyle, render_svg
from .skeleton import (
    CONNECTIVITY_MODES,
    PATH_CONNECTED,
    GridIndex,
    SkeletonGraph,
    build_indexed,
    build_naive,
    format_edges,
    format_points,
    load_edges,
    load_points,
    stability_violation,
)


def _emit(text: str, path: str | None) -> None:
    if path is None:
        return
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_config(path: str) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.rstrip()!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _pick(args, config, key, cast, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        try:
            return cast(config[key])
        except ValueError:
            raise ValueError(f"config key {key}: cannot parse {config[key]!r}") from None
    return default


def _growth_config(args, config, beta=None, dtheta=None) -> GrowthConfig:
    beta = _pick(args, config, "beta", float, beta)
    dtheta = _pick(args, config, "dtheta", float, dtheta)
    if beta is None:
        raise ValueError("missing beta (flag --beta or config key beta)")
    if dtheta is None:
        raise ValueError("missing dtheta (flag --dtheta or config key dtheta)")
    strict = _pick(args, config, "strict", lambda s: s.lower() in ("1", "true", "yes"), False)
    return GrowthConfig(
        beta=beta,
        dtheta=dtheta,
        seed=Point(
            _pick(args, config, "seed_x", float, 0.0),
            _pick(args, config, "seed_y", float, 0.0),
        ),
        r0=_pick(args, config, "r0", float, 5.0),
        dr=_pick(args, config, "dr", float, 0.5),
        delta=_pick(args, config, "delta", float, 2.5),
        r_max=_pick(args, config, "r_max", float, 90.0),
        connectivity_mode=_pick(args, config, "mode", str, PATH_CONNECTED),
        strict_no_edge_loss=bool(strict),
    )


def _float_list(text: str):
    values = [float(tok) for tok in text.replace(",", " ").split()]
    if not values:
        raise ValueError("empty list")
    return values


def _add_growth_flags(sub) -> None:
    sub.add_argument("--beta", type=float, help="lune parameter, >= 1")
    sub.add_argument("--dtheta", type=float, help="angle step in degrees")
    sub.add_argument("--seed-x", dest="seed_x", type=float)
    sub.add_argument("--seed-y", dest="seed_y", type=float)
    sub.add_argument("--r0", type=float, help="first ring radius (default 5)")
    sub.add_argument("--dr", type=float, help="ring step (default 0.5)")
    sub.add_argument("--delta", type=float, help="minimum separation (default 2.5)")
    sub.add_argument("--r-max", dest="r_max", type=float, help="stop radius (default 90)")
    sub.add_argument("--mode", choices=CONNECTIVITY_MODES, help="connectivity criterion")
    sub.add_argument("--strict", action="store_true", default=None,
                     help="reject candidates that destroy any existing edge")
    sub.add_argument("--config", help="key=value file presetting these flags")


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lunegraph",
        description="Construct, grow, measure and render lune-based proximity graphs.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("build", help="skeleton of a point file at one beta")
    p.add_argument("--points", required=True, help="point file, one 'x y' per line")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--indexed", action="store_true", help="use the grid-indexed builder")
    p.add_argument("--cell-size", type=float, default=None, help="grid cell size override")
    p.add_argument("--edges-out", default="-")
    p.add_argument("--metrics-out", default=None)
    p.set_defaults(func=_cmd_build)

    p = subs.add_parser("grow", help="grow a connected skeleton on a spiral")
    _add_growth_flags(p)
    p.add_argument("--points-out", default="-")
    p.add_argument("--edges-out", default=None)
    p.add_argument("--trace-out", default=None)
    p.add_argument("--svg-out", default=None)
    p.add_argument("--progress", action="store_true", help="per-ring progress on stderr")
    p.set_defaults(func=_cmd_grow)

    p = subs.add_parser("sweep-edges", help="edge count vs beta, with power-law fit")
    p.add_argument("--points", help="point file to sweep")
    p.add_argument("--random", type=int, help="generate a random set of this size instead")
    p.add_argument("--rng-seed", dest="rng_seed", type=int)
    p.add_argument("--domain-radius", dest="domain_radius", type=float)
    p.add_argument("--min-separation", dest="min_separation", type=float)
    p.add_argument("--beta-min", dest="beta_min", type=float)
    p.add_argument("--beta-max", dest="beta_max", type=float)
    p.add_argument("--beta-step", dest="beta_step", type=float)
    p.add_argument("--config", help="key=value file presetting these flags")
    p.add_argument("--curve-out", default="-")
    p.add_argument("--fit-out", default=None)
    p.set_defaults(func=_cmd_sweep_edges)

    p = subs.add_parser("sweep-grow", help="grow and measure a (beta, dtheta) grid")
    _add_growth_flags(p)
    p.add_argument("--betas", help="comma-separated beta values")
    p.add_argument("--dthetas", help="comma-separated dtheta values")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_sweep_grow)

    p = subs.add_parser("render", help="SVG of points plus edges")
    p.add_argument("--points", required=True)
    p.add_argument("--edges", help="edge file; omit to build at --beta")
    p.add_argument("--beta", type=float, help="build edges at this beta when no --edges")
    p.add_argument("--node-radius", type=float, default=2.5)
    p.add_argument("--edge-width", type=float, default=1.0)
    p.add_argument("--padding", type=float, default=10.0)
    p.add_argument("--node-fill", default="black")
    p.add_argument("--edge-stroke", default="black")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_render)

    p = subs.add_parser("stability", help="does the beta=1 edge set survive any beta?")
    p.add_argument("--points", required=True)
    p.set_defaults(func=_cmd_stability)

    return parser


def _cmd_build(args) -> int:
    ps = load_points(args.points)
    if args.indexed:
        g = build_indexed(ps, args.beta, GridIndex.build(ps, args.cell_size))
    else:
        g = build_naive(ps, args.beta)
    _emit(format_edges(g.sorted_edges()), args.edges_out)
    if args.metrics_out:
        report = compute_metrics(ps, g)
        _emit(METRICS_CSV_HEADER + "\n" + report.csv_row() + "\n", args.metrics_out)
    return 0


def _cmd_grow(args) -> int:
    config = _load_config(args.config) if args.config else {}
    cfg = _growth_config(args, config)
    on_ring = None
    if args.progress:
        def on_ring(r, points, edges):
            print(f"ring r={r:g}: {points} points, {edges} edges", file=sys.stderr)
    ps, g, trace = grow(cfg, on_ring=on_ring)
    _emit(format_points(ps), args.points_out)
    if args.edges_out:
        _emit(format_edges(g.sorted_edges()), args.edges_out)
    if args.trace_out:
        _emit(trace.to_csv(), args.trace_out)
    if args.svg_out:
        _emit(render_svg(ps, g), args.svg_out)
    return 0


def _cmd_sweep_edges(args) -> int:
    config = _load_config(args.config) if args.config else {}
    if args.points:
        ps = load_points(args.points)
    else:
        n = _pick(args, config, "random", int, None) or _pick(args, config, "n", int, None)
        if n is None:
            raise ValueError("need --points FILE or --random N")
        ps = generate_random_set(RandomSetConfig(
            n=n,
            domain_radius=_pick(args, config, "domain_radius", float, 250.0),
            min_separation=_pick(args, config, "min_separation", float, 5.0),
            rng_seed=_pick(args, config, "rng_seed", int, 0),
        ))
    curve = edge_loss_sweep(
        ps,
        _pick(args, config, "beta_min", float, 1.0),
        _pick(args, config, "beta_max", float, 100.0),
        _pick(args, config, "beta_step", float, 0.1),
    )
    _emit(curve.to_csv(), args.curve_out)
    try:
        fit = fit_power_law(curve)
    except ValueError as exc:
        if args.fit_out:
            raise
        print(f"fit skipped: {exc}", file=sys.stderr)
        return 0
    print(
        f"fit: exponent={fit.exponent:g} coefficient={fit.coefficient:g} "
        f"r_squared={fit.r_squared:g}",
        file=sys.stderr,
    )
    if args.fit_out:
        _emit(fit.CSV_HEADER + "\n" + fit.csv_row() + "\n", args.fit_out)
    return 0


def _cmd_sweep_grow(args) -> int:
    config = _load_config(args.config) if args.config else {}
    betas = _pick(args, config, "betas", _float_list, None)
    dthetas = _pick(args, config, "dthetas", _float_list, None)
    if isinstance(betas, str):
        betas = _float_list(betas)
    if isinstance(dthetas, str):
        dthetas = _float_list(dthetas)
    if betas is None or dthetas is None:
        raise ValueError("need --betas and --dthetas lists")
    base = _growth_config(args, config, beta=1.0, dtheta=360.0)
    runs = growth_sweep(base, betas, dthetas)
    _emit(format_growth_sweep_csv(runs), args.out)
    return 0


def _cmd_render(args) -> int:
    ps = load_points(args.points)
    if args.edges:
        edges = load_edges(args.edges)
        g = SkeletonGraph(len(ps), args.beta if args.beta is not None else float("nan"), edges)
    elif args.beta is not None:
        g = build_naive(ps, args.beta)
    else:
        g = None
    style = RenderStyle(
        node_radius=args.node_radius,
        edge_width=args.edge_width,
        canvas_padding=args.padding,
        node_fill=args.node_fill,
        edge_stroke=args.edge_stroke,
    )
    _emit(render_svg(ps, g, style), args.out)
    return 0


def _cmd_stability(args) -> int:
    ps = load_points(args.points)
    violation = stability_violation(ps)
    if violation is None:
        print("stable: yes")
    else:
        i, j, k = violation
        print("stable: no")
        print(f"violation: edge ({i}, {j}) blocked by {k}")
    return 0


def cli_main(argv=None) -> int:
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
