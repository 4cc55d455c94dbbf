"""Command-line front end.

Exit codes: 0 ok, 1 internal error, 2 usage/validation error, 3 output
path not writable, 4 a certified property failed.

Examples::

    ptcorr simulate --geometry mt-m --kappa 1 --gamma-re 2 --length 1
    ptcorr sweep --geometry m-xmtx --kl-steps 400 --gok-steps 400 --out map.csv --svg map.svg
    ptcorr sweep --geometry each --gok-re 0.83 --gok-im 0.41 --kappa 0.85 \\
        --len-min 0 --len-max 8 --len-steps 400 --indist 0.96 --out curves.csv
    ptcorr invariance --mode pair --trials 100000 --seed 7
    ptcorr search3 --trials 1000 --seed 1
    ptcorr report --out-dir figures
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import io
from .correlations import two_photon
from .invariance import DEFAULT_TOL, MODES, search_3mode
from .linalg import perm2
from .propagator import CouplerParams, Geometry, compose_geometry
from .sweep import KAPPA_DEFAULT, axis, extract_features, visibility_curves, visibility_map

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_IO, EXIT_PROPERTY = 0, 1, 2, 3, 4

GEOMETRY_CHOICES = [g.value for g in Geometry]

DEFAULTS = {
    "simulate": {"gamma_im": 0.0, "indist": 1.0},
    "sweep": {
        "kl_min": 0.0, "kl_max": 2 * math.pi, "kl_steps": 400,
        "gok_min": 0.0, "gok_max": 4.0, "gok_steps": 400,
        "gok_im": 0.0, "kappa": KAPPA_DEFAULT, "indist": 1.0,
    },
    "invariance": {"seed": 0, "tol": DEFAULT_TOL},
    "search3": {"seed": 0, "tol": DEFAULT_TOL, "rearrangements": 10},
    "report": {"map_steps": 200, "len_steps": 400, "len_max": 8.0, "kappa": KAPPA_DEFAULT, "indist": 0.96},
}

REQUIRED = {
    "simulate": ["geometry", "kappa", "gamma_re", "length"],
    "sweep": ["geometry", "out"],
    "invariance": ["mode", "trials"],
    "search3": ["trials"],
    "report": ["out_dir"],
}

# loss values of the calibrated couplers (gamma/kappa)
REPORT_LOSSES = (0.0, 0.38 + 0.19j, 0.83 + 0.41j)


class OutputError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ptcorr", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--params", type=Path, help="JSON file with the same keys as the flags; flags win")

    p = sub.add_parser("simulate", help="two-photon observables of one geometry")
    common(p)
    p.add_argument("--geometry", choices=GEOMETRY_CHOICES)
    p.add_argument("--kappa", type=float)
    p.add_argument("--gamma-re", type=float)
    p.add_argument("--gamma-im", type=float)
    p.add_argument("--length", type=float)
    p.add_argument("--indist", type=float)

    p = sub.add_parser("sweep", help="visibility map (kl x gamma/kappa) or curves vs length")
    common(p)
    p.add_argument("--geometry", choices=GEOMETRY_CHOICES + ["each"])
    for name in ("kl-min", "kl-max", "gok-min", "gok-max", "gok-re", "gok-im", "len-min", "len-max", "kappa", "indist"):
        p.add_argument(f"--{name}", type=float)
    for name in ("kl-steps", "gok-steps", "len-steps"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--out", type=Path, help="CSV output path")
    p.add_argument("--svg", type=Path)
    p.add_argument("--json", type=Path)
    p.add_argument("--figure", type=Path, help="matplotlib rendering (png, pdf, ...)")

    p = sub.add_parser("invariance", help="randomized permanent-invariance certification")
    common(p)
    p.add_argument("--mode", choices=sorted(MODES))
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--tol", type=float)

    p = sub.add_parser("search3", help="three-mode N = PMP order-invariance search")
    common(p)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--rearrangements", type=int, help="non-PMP rearrangements sampled per trial")

    p = sub.add_parser("report", help="regenerate the map and curve figures with their CSV data")
    common(p)
    p.add_argument("--out-dir", type=Path)
    p.add_argument("--map-steps", type=int)
    p.add_argument("--len-steps", type=int)
    p.add_argument("--len-max", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--indist", type=float)
    return parser


def resolve(parser: argparse.ArgumentParser, args: argparse.Namespace) -> dict:
    """Merge flags over the optional params file over built-in defaults."""
    values = dict(DEFAULTS.get(args.command, {}))
    if args.params is not None:
        try:
            loaded = json.loads(args.params.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read params file {args.params}: {exc}")
        if not isinstance(loaded, dict):
            parser.error("params file must hold a JSON object")
        known = set(vars(args))
        for key, val in loaded.items():
            dest = key.lstrip("-").replace("-", "_")
            if dest not in known or dest in ("command", "params"):
                parser.error(f"unknown key in params file: {key}")
            values[dest] = val
    for key, val in vars(args).items():
        if key in ("command", "params"):
            continue
        if val is not None:
            values[key] = val
        else:
            values.setdefault(key, None)
    missing = [k for k in REQUIRED[args.command] if values.get(k) is None]
    if missing:
        parser.error("missing required option(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))
    return values


def _emit(text: str):
    sys.stdout.write(text)


def _write(path: Path, text: str):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _manifest_params(values: dict) -> dict:
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(values.items()) if v is not None}


def cmd_simulate(parser, values) -> int:
    try:
        p = CouplerParams(values["kappa"], complex(values["gamma_re"], values["gamma_im"]), values["length"])
        geometry = Geometry.parse(values["geometry"])
        t = compose_geometry(geometry, p)
        result = two_photon(t, values["indist"])
    except ValueError as exc:
        parser.error(str(exc))
    out = {
        "manifest": io.make_manifest("simulate", _manifest_params(values)),
        "geometry": geometry.value,
        "matrix": [[[z.real, z.imag] for z in row] for row in t.tolist()],
        "perm": complex(perm2(t)),
        "indistinguishability": values["indist"],
        **result.to_dict(),
    }
    _emit(io.dumps(out))
    return EXIT_OK


def _curve_mode(values) -> bool:
    return any(values.get(k) is not None for k in ("gok_re", "len_min", "len_max", "len_steps"))


def cmd_sweep(parser, values) -> int:
    manifest = io.make_manifest("sweep", _manifest_params(values))
    try:
        if _curve_mode(values):
            for key in ("len_min", "len_max", "len_steps"):
                if values.get(key) is None:
                    parser.error(f"curve mode needs --{key.replace('_', '-')}")
            lengths = axis(values["len_min"], values["len_max"], values["len_steps"])
            if lengths[0] < 0:
                parser.error("lengths must be non-negative")
            configs = list(Geometry) if values["geometry"] == "each" else [values["geometry"]]
            gok = complex(values.get("gok_re") or 0.0, values["gok_im"])
            result = visibility_curves(configs, gok, lengths, values["kappa"], values["indist"])
            csv_text = io.curves_csv(result, manifest)
        else:
            if values["geometry"] == "each":
                parser.error("--geometry each is only available in curve mode")
            result = visibility_map(
                values["geometry"],
                (values["kl_min"], values["kl_max"], values["kl_steps"]),
                (values["gok_min"], values["gok_max"], values["gok_steps"]),
                gok_imag=values["gok_im"],
            )
            if not 0.0 <= values["indist"] <= 1.0:
                parser.error("--indist must lie in [0, 1]")
            result.values = result.values * values["indist"]
            csv_text = io.grid_csv(result, manifest)
    except ValueError as exc:
        parser.error(str(exc))

    from . import svg

    written = []
    _write(values["out"], csv_text)
    written.append(str(values["out"]))
    if values.get("svg"):
        text = svg.curves_svg(result) if _curve_mode(values) else svg.heatmap_svg(result)
        _write(values["svg"], text)
        written.append(str(values["svg"]))
    if values.get("json"):
        _write(values["json"], io.dumps({"manifest": manifest, "result": result.to_dict()}))
        written.append(str(values["json"]))
    if values.get("figure"):
        from . import plotting

        try:
            if _curve_mode(values):
                plotting.plot_curves(result, values["figure"])
            else:
                plotting.plot_map(result, values["figure"])
        except OSError as exc:
            raise OutputError(f"cannot write {values['figure']}: {exc}") from exc
        written.append(str(values["figure"]))
    _emit(io.dumps({"written": written}))
    return EXIT_OK


def cmd_invariance(parser, values) -> int:
    if values["trials"] <= 0:
        parser.error("--trials must be positive")
    if not values["tol"] > 0:
        parser.error("--tol must be positive")
    kwargs = {"tol": values["tol"]}
    if values["mode"] in ("sequence", "antidiag-seq") and values.get("max_len") is not None:
        if values["max_len"] < 1:
            parser.error("--max-len must be at least 1")
        kwargs["max_len"] = values["max_len"]
    report = MODES[values["mode"]](values["trials"], values["seed"], **kwargs)
    manifest = io.make_manifest("invariance", _manifest_params(values), seed=values["seed"])
    _emit(io.dumps({"manifest": manifest, "report": report.to_dict()}))
    return EXIT_OK if report.passed else EXIT_PROPERTY


def cmd_search3(parser, values) -> int:
    if values["trials"] <= 0:
        parser.error("--trials must be positive")
    if not values["tol"] > 0:
        parser.error("--tol must be positive")
    if values["rearrangements"] < 0:
        parser.error("--rearrangements must be non-negative")
    report = search_3mode(values["trials"], values["seed"], values["tol"], values["rearrangements"])
    manifest = io.make_manifest("search3", _manifest_params(values), seed=values["seed"])
    _emit(io.dumps({"manifest": manifest, "report": report.to_dict()}))
    return EXIT_OK if report.passed else EXIT_PROPERTY


def cmd_report(parser, values) -> int:
    from . import plotting

    out = Path(values["out_dir"])
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {out}: {exc}") from exc
    steps = values["map_steps"]
    len_steps = values["len_steps"]
    if steps < 2 or len_steps < 2:
        parser.error("step counts must be at least 2")
    manifest = io.make_manifest("report", _manifest_params(values))
    summary = {"manifest": manifest, "maps": {}, "curves": []}

    grids = []
    for g in (Geometry.M_XMTX, Geometry.M_MT, Geometry.MT_M):
        grid = visibility_map(g, (0.0, 2 * math.pi, steps), (0.0, 4.0, steps))
        grids.append(grid)
        name = f"map_{g.value}.csv"
        _write(out / name, io.grid_csv(grid, manifest))
        lossless = extract_features(grid.kl_axis, grid.values[0])
        summary["maps"][g.value] = {
            "csv": name,
            "lossless_first_minimum": lossless.first_minimum(),
            "max_visibility": float(np.nanmax(grid.values)),
        }
    plotting.plot_map_panels(grids, out / "visibility_maps.png")

    lengths = axis(0.0, values["len_max"], len_steps)
    curve_sets = []
    for k, gok in enumerate(REPORT_LOSSES):
        cs = visibility_curves(list(Geometry), gok, lengths, values["kappa"], values["indist"])
        curve_sets.append(cs)
        name = f"curves_{k}.csv"
        _write(out / name, io.curves_csv(cs, manifest))
        lockstep = float(np.nanmax(np.abs(cs.values[Geometry.M_XMTX] - cs.values[Geometry.XMTX_M])))
        summary["curves"].append({"csv": name, "gamma_over_kappa": gok, "lockstep_residual": lockstep})
    plotting.plot_curve_panels(curve_sets, out / "visibility_curves.png")
    summary["figures"] = ["visibility_maps.png", "visibility_curves.png"]
    _write(out / "report.json", io.dumps(summary))
    _emit(io.dumps(summary))
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "invariance": cmd_invariance,
    "search3": cmd_search3,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        values = resolve(parser, args)
        return COMMANDS[args.command](parser, values)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except OutputError as exc:
        print(f"ptcorr: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001
        print(f"ptcorr: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
