"""Command line front end.

::

    lateral-cp sweep --quantity force --material silica --zmin-nm 100 --zmax-nm 1000
    lateral-cp spectrum --material gold --z-nm 264 --n-phi 720
    lateral-cp asymptotics --material gold --z-nm 4.26 8.52 4260 8520
    lateral-cp materials list
    lateral-cp preset fig2 --out fig2.csv

Exit codes: 0 success, 2 some rows did not converge, 3 unknown material,
4 invalid range or parameters. ``LATERAL_CP_MATERIALS`` overrides the
material registry file.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .materials import ENV_VAR, UnknownMaterial, load_registry, registry_path
from .quadrature import QuadratureConfig
from .sweeps import PRESETS, QUANTITIES, InvalidRange, SweepSpec, compare_asymptotics, preset, run_spectrum, run_sweep

log = logging.getLogger("lateral_cp")

EXIT_OK, EXIT_NONCONVERGED, EXIT_UNKNOWN_MATERIAL, EXIT_INVALID = 0, 2, 3, 4


def _add_output(p):
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_tolerance(p):
    p.add_argument("--rel-tol", type=float, default=1e-9, help="relative quadrature tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lateral-cp", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="evaluate a quantity over a range of distances")
    sw.add_argument("--quantity", choices=QUANTITIES, default="force")
    sw.add_argument("--material", default="silica")
    sw.add_argument("--zmin-nm", type=float, default=100.0)
    sw.add_argument("--zmax-nm", type=float, default=1000.0)
    sw.add_argument("--points", type=int, default=500)
    sw.add_argument("--scale", choices=("linear", "log"), default="linear")
    sw.add_argument("--t-ns", type=float, default=0.0, help="time after excitation [ns]")
    sw.add_argument("--gamma-mode", choices=("total", "free-space"), default="total")
    sw.add_argument("--workers", type=int, default=1)
    _add_tolerance(sw)
    _add_output(sw)

    sp = sub.add_parser("spectrum", help="polar emission spectrum at one distance")
    sp.add_argument("--material", default="gold")
    sp.add_argument("--z-nm", type=float, required=True)
    sp.add_argument("--n-phi", type=int, default=720)
    _add_tolerance(sp)
    _add_output(sp)

    asy = sub.add_parser("asymptotics", help="full integral against the near-field and retarded laws")
    asy.add_argument("--material", default="gold")
    asy.add_argument("--z-nm", type=float, nargs="+", required=True)
    _add_tolerance(asy)
    _add_output(asy)

    mat = sub.add_parser("materials", help="material registry")
    mat.add_argument("action", choices=("list",))

    pre = sub.add_parser("preset", help="figure reproduction datasets")
    pre.add_argument("name", choices=sorted(PRESETS))
    pre.add_argument("--workers", type=int, default=1)
    _add_tolerance(pre)
    _add_output(pre)
    return parser


def _emit(dataset, args) -> int:
    if args.out:
        dataset.write(args.out, args.format)
        log.info("wrote %d rows to %s", len(dataset.rows), args.out)
    else:
        sys.stdout.write(dataset.to_json() + "\n" if args.format == "json" else dataset.to_csv())
    return EXIT_NONCONVERGED if dataset.any_nonconverged else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "materials":
            print(f"# registry: {registry_path()} (override with {ENV_VAR})")
            for name, m in sorted(load_registry().items()):
                eps = "perfect conductor" if m.is_perfect_conductor else f"eps = {m.epsilon.real:g} + {m.epsilon.imag:g}i"
                print(f"{name:10s} {eps}")
            return EXIT_OK
        tol = QuadratureConfig(rel_tol=args.rel_tol)
        if args.command == "sweep":
            spec = SweepSpec(
                quantity=args.quantity,
                material=args.material,
                z_min=args.zmin_nm * 1e-9,
                z_max=args.zmax_nm * 1e-9,
                n_points=args.points,
                scale=args.scale,
                t=args.t_ns * 1e-9,
                gamma_mode=args.gamma_mode,
                tolerances=tol,
            )
            return _emit(run_sweep(spec, workers=args.workers), args)
        if args.command == "spectrum":
            return _emit(run_spectrum(args.material, args.z_nm * 1e-9, args.n_phi, tol), args)
        if args.command == "asymptotics":
            return _emit(compare_asymptotics(args.material, [z * 1e-9 for z in args.z_nm], tol), args)
        if args.command == "preset":
            return _emit(preset(args.name, workers=args.workers, tolerances=tol), args)
    except UnknownMaterial as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_UNKNOWN_MATERIAL
    except (InvalidRange, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_INVALID
