"""Command-line front end."""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from .config import ConfigurationError, RunConfig

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _parse_vector(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.replace(" ", "").strip("[]").split(","))
    except ValueError:
        raise ConfigurationError(f"cannot parse vector {text!r}") from None
    if len(vals) != 6:
        raise ConfigurationError("--a needs six comma-separated numbers")
    return vals


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value configuration file")
    common.add_argument("--seed", type=int)
    common.add_argument("--delta0", type=float)
    common.add_argument("--workers", type=int)
    common.add_argument("--out", help="output file (or prefix for extract/link)")

    member = argparse.ArgumentParser(add_help=False)
    member.add_argument("--a", required=True, help="six coefficients a0,...,a5")
    member.add_argument("--r", type=float, default=0.0, help="|z| in [0, 1]")
    member.add_argument("--theta", type=float, default=0.0, help="arg z")

    parser = argparse.ArgumentParser(prog="s3verify", description="Numerical checks for a family of surfaces in S^3.",
                                     epilog="Tolerances and sample sizes: --tol.<name> VALUE, --size.<name> VALUE "
                                            "(see print-config).")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=["groups", "equivariance", "trigpoly", "genus", "witnesses", "links", "all"])

    s = sub.add_parser("scan", parents=[common], help="stream per-parameter genus or zero records")
    s.add_argument("mode", choices=["genus", "zeros"])
    s.add_argument("grid", help="KIND:COUNT with KIND in boundary, interior, rhozero")

    e = sub.add_parser("extract", parents=[common, member], help="mesh one member")
    e.add_argument("--res", type=int, default=128, help="grid points per great circle")

    li = sub.add_parser("link", parents=[common, member], help="build the Hopf link of a boundary member")
    li.add_argument("--subdiv", type=int, default=64)

    sub.add_parser("enumerate", parents=[common], help="write the 336 common zeros of v1, v2, v3 as CSV")
    sub.add_parser("print-config", parents=[common], help="print the effective configuration")
    return parser


def _split_overrides(argv: Sequence[str]) -> tuple[list[str], list[tuple[str, str]]]:
    rest, overrides = [], []
    it = iter(range(len(argv)))
    args = list(argv)
    for i in it:
        tok = args[i]
        if tok.startswith(("--tol.", "--size.")):
            key = tok[2:]
            if "=" in key:
                key, val = key.split("=", 1)
            else:
                if i + 1 >= len(args):
                    raise ConfigurationError(f"{tok} needs a value")
                val = args[i + 1]
                next(it, None)
            overrides.append((key, val))
        else:
            rest.append(tok)
    return rest, overrides


def _config(ns: argparse.Namespace, overrides: list[tuple[str, str]]) -> RunConfig:
    cfg = RunConfig()
    if ns.config:
        cfg.load_file(ns.config)
    for key in ("seed", "delta0", "workers", "out"):
        val = getattr(ns, key, None)
        if val is not None:
            cfg.set(key, str(val))
    for k, v in overrides:
        cfg.set(k, v)
    return cfg


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _member(ns):
    from .surface_family import FamilyParameter

    if not 0.0 <= ns.r <= 1.0:
        raise ConfigurationError("--r must lie in [0, 1]")
    a = _parse_vector(ns.a)
    if not any(a):
        raise ConfigurationError("--a must not vanish")
    return FamilyParameter(a, ns.r, ns.theta)


def cmd_verify(ns, cfg: RunConfig) -> int:
    from .suites import build_report

    report = build_report(ns.suite, cfg)
    _emit(json.dumps(report, indent=2) + "\n", cfg.out)
    return EXIT_OK if report["summary"]["ok"] else EXIT_FAIL


def cmd_scan(ns, cfg: RunConfig) -> int:
    from .suites import SCAN_BOUNDS, run_scan, scan_summary

    try:
        kind, count = ns.grid.split(":")
        count = int(count)
    except ValueError:
        raise ConfigurationError(f"grid argument {ns.grid!r} is not KIND:COUNT") from None
    if kind not in SCAN_BOUNDS or count < 0:
        raise ConfigurationError(f"unknown scan kind {kind!r}")
    records = run_scan(kind, count, cfg)
    summary = scan_summary(kind, records)
    if ns.mode == "zeros":
        for r in records:
            r.pop("genus", None)
            r.pop("branch", None)
    lines = [json.dumps({"schema": 1, **r}) for r in records]
    lines.append(json.dumps({"schema": 1, "summary": summary}))
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK if summary["bounds_hold"] else EXIT_FAIL


def cmd_extract(ns, cfg: RunConfig) -> int:
    from . import level_topology as lt
    from .surface_family import SurfaceFamily

    param = _member(ns)
    fam = SurfaceFamily(cfg.delta0)
    try:
        mesh = lt.member_levelset(param, ns.res, fam)
        info = {"schema": 1, "param": param.to_dict(), "resolution": ns.res, "vertices": len(mesh.vertices),
                "triangles": len(mesh.triangles), "euler_characteristic": lt.euler_characteristic(mesh),
                "components": lt.components(mesh), "genus": lt.genus(mesh)}
    except lt.ExtractionError as err:
        print(json.dumps({"schema": 1, "error": err.code, "message": str(err)}))
        return EXIT_FAIL
    if cfg.out:
        lt.write_obj(cfg.out + ".obj", mesh)
        lt.write_vertex_csv(cfg.out + ".csv", mesh)
        info["files"] = [cfg.out + ".obj", cfg.out + ".csv"]
    print(json.dumps(info))
    return EXIT_OK


def cmd_link(ns, cfg: RunConfig) -> int:
    from . import links_config as lc
    from .surface_family import ParameterError, SurfaceFamily

    param = _member(ns)
    try:
        link = lc.upsilon_link(param, n_subdiv=ns.subdiv, family=SurfaceFamily(cfg.delta0))
    except (lc.LinkError, lc.ConfigError) as err:
        print(json.dumps({"schema": 1, "error": err.code, "message": str(err)}))
        return EXIT_FAIL
    except ParameterError as err:
        print(json.dumps({"schema": 1, "error": "PRECONDITION", "message": str(err)}))
        return EXIT_FAIL
    info = {"schema": 1, "param": param.to_dict(), "config": link.config.to_dict(), "linking_number": link.linking,
            "min_F_on_plus": link.min_plus, "max_F_on_minus": link.max_minus}
    if cfg.out:
        lc.write_loops_csv(cfg.out + ".csv", [link.plus, link.minus])
        lc.write_loops_obj(cfg.out + ".obj", [link.plus, link.minus])
        info["files"] = [cfg.out + ".csv", cfg.out + ".obj"]
    print(json.dumps(info))
    return EXIT_OK


def cmd_enumerate(ns, cfg: RunConfig) -> int:
    from . import witness as wf

    pts = wf.enumerate_z_alpha3()
    if cfg.out:
        wf.write_zero_set_csv(cfg.out, pts)
    else:
        sys.stdout.write("theta,l,m,re_z1,im_z1,re_z2,im_z2\n")
        for p in pts:
            sys.stdout.write(f"{p.theta!r},{p.label[0]},{p.label[1]},{p.z1.real!r},{p.z1.imag!r},"
                             f"{p.z2.real!r},{p.z2.imag!r}\n")
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "scan": cmd_scan, "extract": cmd_extract, "link": cmd_link,
            "enumerate": cmd_enumerate}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        rest, overrides = _split_overrides(argv)
    except ConfigurationError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        ns = parser.parse_args(rest)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = _config(ns, overrides)
        if ns.command == "print-config":
            _emit(cfg.dump(), cfg.out)
            return EXIT_OK
        return COMMANDS[ns.command](ns, cfg)
    except ConfigurationError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    np.seterr(all="ignore")
    sys.exit(main())
