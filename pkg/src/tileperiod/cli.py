"""``tileperiod`` command line.

Exit codes: 0 success, 1 bad input (with a ``line:col`` prefix when the
position is known), 2 resource limit.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .core import ResourceLimit, TilingError
from .render import render_svg

EXIT_OK, EXIT_USER, EXIT_LIMIT = 0, 1, 2


def _err(msg: str) -> None:
    print(f"tileperiod: {msg}", file=sys.stderr)


def cmd_periods(args) -> int:
    from .solver import eigenperiods

    system = io.load_system(args.system)
    reports = eigenperiods(system, args.pmax, args.mode, args.jobs)
    wdir = Path(args.witness) if args.witness else None
    if wdir:
        wdir.mkdir(parents=True, exist_ok=True)
    for p in sorted(reports):
        rep = reports[p]
        print(f"p={p} eigen={str(rep.eigen).lower()}")
        region = rep.witness_region()
        if wdir and region is not None:
            doc = io.witness_to_json(system, region, p, args.mode)
            (wdir / f"p{p}.json").write_text(io.dumps(doc))
            (wdir / f"p{p}.svg").write_text(render_svg(region, system.labels()))
    return EXIT_OK


def cmd_compile_tm(args) -> int:
    from .tm import encode_tm, manifest

    machine = io.load_machine(args.machine)
    system = encode_tm(machine)
    io.save_system(system, args.out)
    sys.stdout.write(manifest(system))
    return EXIT_OK


def cmd_build(args) -> int:
    from .construct import build_construction, builder_manifest

    spec = io.load_construction_spec(args.spec)
    system = build_construction(spec)
    io.save_system(system, args.out)
    sys.stdout.write(builder_manifest(system))
    return EXIT_OK


def cmd_render(args) -> int:
    region, labels = io.load_witness(args.witness)
    Path(args.out).write_text(render_svg(region, labels))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tileperiod",
                                 description="Periods of 2D tiling systems.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("periods", help="list eigenperiods up to --pmax")
    p.add_argument("system")
    p.add_argument("--mode", choices=("horizontal", "total"), default="total")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--witness", metavar="DIR", help="write JSON and SVG witnesses here")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (one period each)")
    p.set_defaults(func=cmd_periods)

    p = sub.add_parser("compile-tm", help="encode a machine as Wang tiles")
    p.add_argument("machine")
    p.add_argument("out")
    p.set_defaults(func=cmd_compile_tm)

    p = sub.add_parser("build", help="build a period construction from a spec file")
    p.add_argument("spec")
    p.add_argument("out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("render", help="draw a witness as SVG")
    p.add_argument("witness")
    p.add_argument("out")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "pmax", 1) < 1:
        _err("--pmax must be positive")
        return EXIT_USER
    try:
        return args.func(args)
    except ResourceLimit as e:
        _err(f"resource limit: {e}")
        return EXIT_LIMIT
    except TilingError as e:
        _err(f"{type(e).__name__}: {e}")
        return EXIT_USER
    except OSError as e:
        _err(str(e))
        return EXIT_USER


if __name__ == "__main__":
    sys.exit(main())
