"""Command-line entry point: ``sgcat <command> FILE ...``.

Exit codes: 0 success or stabilized, 2 inconclusive, 3 input error,
4 internal invariant violation.
"""
from __future__ import annotations

import argparse
import sys
import time

from .errors import HorizonExceeded, InputError, InvariantViolation, SgcatError, UnsupportedInput
from .fileformat import read_presentation
from .leavitt import (check_relations_in_orbit_model, export_presentation, gamma_zero_tower,
                      leavitt_presentation_rad_square_zero, strong_grading_factorizations)
from .modules import projective_module, regular_module, simple_module
from .omega import omega_nc
from .report import render
from .stabilization import (DEFAULT_HORIZON, global_dim_probe, iso_in_stabilization, sg_hom,
                            strong_grading_index)

EXIT_OK, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3, 4


def module_from_spec(alg, spec: str):
    """S<vertex>, P<vertex>, or L (also Λ) for the regular module."""
    if spec in ("L", "Λ", "Lambda"):
        return regular_module(alg)
    if len(spec) >= 2 and spec[0] in "SP":
        v = spec[1:]
        if v not in alg.quiver.vertices:
            raise InputError(f"unknown vertex '{v}' in module spec '{spec}'")
        i = alg.quiver.vertex_index(v)
        return simple_module(alg, i) if spec[0] == "S" else projective_module(alg, i)
    raise InputError(f"unknown module spec '{spec}' (use S<vertex>, P<vertex> or L)")


def _summary(alg, pf) -> dict:
    return {
        "name": alg.name,
        "field": str(alg.field),
        "vertices": list(alg.quiver.vertices),
        "arrows": [" ".join(a) for a in alg.quiver.arrows],
        "rad_square_zero": pf.rad_square_zero,
        "dim_algebra": alg.dim,
        "dim_E": alg.num_vertices,
        "dim_omega_nc": omega_nc(alg).dim,
    }


def cmd_algebra(args, alg, pf):
    om = omega_nc(alg)
    return {"basis": list(alg.labels), "omega_nc_basis": list(om.labels)}, EXIT_OK


def cmd_sghom(args, alg, pf):
    X = module_from_spec(alg, args.X)
    Y = module_from_spec(alg, args.Y)
    r = sg_hom(X, args.n, Y, args.m, args.horizon, model=args.model)
    code = EXIT_OK if r.stabilized else EXIT_INCONCLUSIVE
    return r.to_dict(), code


def cmd_iso(args, alg, pf):
    X = module_from_spec(alg, args.X)
    Y = module_from_spec(alg, args.Y)
    v = iso_in_stabilization(X, args.n, Y, args.m, args.horizon, args.trials, args.seed)
    v = {k: val for k, val in v.items() if k != "witness"}
    code = EXIT_OK if v["kind"] != "Unknown" else EXIT_INCONCLUSIVE
    return v, code


def cmd_leavitt(args, alg, pf):
    if args.action == "emit":
        if not pf.rad_square_zero:
            raise UnsupportedInput("leavitt emit needs a rad_square_zero presentation")
        pres = leavitt_presentation_rad_square_zero(alg.quiver)
        text = export_presentation(pres)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        return {"presentation": text.splitlines(), "homogeneous": pres.check_homogeneous(),
                "notes": pres.notes}, EXIT_OK
    if not pf.rad_square_zero:
        raise UnsupportedInput("leavitt check needs a rad_square_zero presentation")
    res = check_relations_in_orbit_model(alg.quiver, args.stage, algebra=alg)
    rows = [{"family": r.family, "relation": r.text, "pass": r.passed, "zero_at_stage": r.zero_at}
            for r in res]
    ok = all(r.passed for r in res)
    return {"stage_budget": args.stage, "relations": rows, "all_pass": ok}, (EXIT_OK if ok else EXIT_INTERNAL)


def cmd_grading(args, alg, pf):
    cert = strong_grading_index(alg, args.horizon)
    out = cert.to_dict()
    out["factorizations"] = strong_grading_factorizations(alg, cert)
    return out, EXIT_OK


def cmd_gldim(args, alg, pf):
    v = global_dim_probe(alg, args.horizon)
    return v, (EXIT_OK if v["kind"] == "FiniteWithBound" else EXIT_INCONCLUSIVE)


def cmd_gamma0(args, alg, pf):
    t = gamma_zero_tower(alg, args.horizon)
    d = t.to_dict()
    return d, (EXIT_OK if d["verdict"]["kind"] == "Stabilized" else EXIT_INCONCLUSIVE)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sgcat", description="Singularity categories of finite-dimensional algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="presentation file")
    common.add_argument("--json", action="store_true", help="emit the JSON twin of the report")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps (default 0)")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("algebra", parents=[common], help="summarize Λ, E and Ω_nc")
    s.set_defaults(func=cmd_algebra)

    for name, func, hdef in (("sghom", cmd_sghom, DEFAULT_HORIZON), ("iso", cmd_iso, 4)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("X")
        s.add_argument("n", type=int)
        s.add_argument("Y")
        s.add_argument("m", type=int)
        s.add_argument("--horizon", type=int, default=hdef)
        if name == "sghom":
            s.add_argument("--model", choices=["minimal", "nc"], default="minimal")
        else:
            s.add_argument("--trials", type=int, default=4)
        s.set_defaults(func=func)

    s = sub.add_parser("leavitt", parents=[common], help="emit or check the graded presentation")
    s.add_argument("action", choices=["emit", "check"])
    s.add_argument("--stage", type=int, default=3)
    s.add_argument("--out", default=None, help="also write the emitted presentation here")
    s.set_defaults(func=cmd_leavitt)

    for name, func, hdef in (("grading", cmd_grading, 6), ("gldim", cmd_gldim, DEFAULT_HORIZON),
                             ("gamma0", cmd_gamma0, 4)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--horizon", type=int, default=hdef)
        s.set_defaults(func=func)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    report = {"command": " ".join(["sgcat"] + argv), "seed": args.seed}
    t0 = time.perf_counter()
    try:
        pf = read_presentation(args.file)
        alg = pf.build()
        report["algebra"] = _summary(alg, pf)
        result, code = args.func(args, alg, pf)
        report["result"] = result
    except OSError as e:
        report["error"] = {"kind": "input", "message": str(e)}
        code = EXIT_INPUT
    except InputError as e:
        report["error"] = {"kind": type(e).__name__, "message": str(e)}
        code = EXIT_INPUT
    except HorizonExceeded as e:
        report["error"] = {"kind": "HorizonExceeded", "message": str(e), "data": e.data}
        code = EXIT_INTERNAL
    except (InvariantViolation, SgcatError) as e:
        report["error"] = {"kind": type(e).__name__, "message": str(e)}
        code = EXIT_INTERNAL
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - t0, 3)
    report["exit_code"] = code
    text = render(report, args.json)
    if not args.json and args.command == "leavitt" and args.action == "emit" and "result" in report:
        pres = report["result"]["presentation"]
        head = dict(report)
        head["result"] = {k: v for k, v in report["result"].items() if k != "presentation"}
        text = render(head) + "\n" + "\n".join(pres) + "\n"
    stream = sys.stderr if "error" in report else out
    stream.write(text)
    return code


def main(argv=None) -> int:
    code = run(argv)
    sys.exit(code)


if __name__ == "__main__":
    main()
