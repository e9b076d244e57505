"""Command-line entry point: JSON reports for every subsystem.

Subcommands: group, orbit, poly, verify, deform, algdep, dataset.  All
randomness is controlled by --seed, so reports are reproducible except for
the timing fields.  Exit codes: 0 success / all checks passed, 1 check
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from gmpy2 import mpq


def _digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


def _emit(report):
    json.dump(report, sys.stdout, indent=1, default=str)
    sys.stdout.write("\n")


def cmd_group(args):
    from .catalog import group_info

    _emit(group_info(args.name))
    return 0


def _resolve_labels(group_name, class_items):
    from .catalog import make_group

    _, spec = make_group(group_name)
    labels = []
    for item in class_items:
        if isinstance(item, str):
            want = {"ctype": item}
        else:
            want = {"ctype": item["type"]}
            if "outer" in item:
                want["outer"] = item["outer"]
            if "incidence" in item:
                want["incidence"] = item["incidence"]
        matches = [
            c
            for c in spec.classes
            if c.ctype == want["ctype"]
            and ("outer" not in want or c.outer == want["outer"])
            and ("incidence" not in want or c.incidence == want["incidence"])
        ]
        if len(matches) != 1:
            raise SystemExit(
                f"class selector {item!r} matches {len(matches)} classes of "
                f"{group_name}; add an 'outer' or 'incidence' discriminator"
            )
        labels.append(matches[0].label)
    return tuple(labels)


def cmd_orbit(args):
    from .braid import ClassTupleSpec, orbit_report, subgroup_orbits

    with open(args.spec) as fh:
        spec_json = json.load(fh)
    labels = _resolve_labels(spec_json["group"], spec_json["classes"])
    t0 = time.time()
    tuple_spec = ClassTupleSpec(spec_json["group"], labels)
    if spec_json.get("braid_words"):
        words = [tuple(w) for w in spec_json["braid_words"]]
        orbits = subgroup_orbits(tuple_spec, words, seed=args.seed)
        report = {
            "group": spec_json["group"],
            "classes": list(labels),
            "braid_words": spec_json["braid_words"],
            "orbit_lengths": [len(o) for o in orbits],
        }
    else:
        report = orbit_report(
            tuple_spec,
            seed=args.seed,
            symmetrize=spec_json.get("symmetrize"),
            with_blocks=spec_json.get("blocks", True),
        )
    report["seed"] = args.seed
    report["inputs_digest"] = _digest(args.spec)
    report["seconds"] = round(time.time() - t0, 3)
    _emit(report)
    return 0


def _load_poly_arg(path):
    from .dataset import load_entry
    from .poly import BiPoly, UniPoly

    if path.startswith("@"):
        entry = load_entry(path[1:])
        case = entry.cases[0]
        return case.bipoly if case.bipoly is not None else case.unipoly
    with open(path) as fh:
        obj = json.load(fh)
    if "model" in obj:
        return BiPoly(
            p=UniPoly.from_strings(obj["model"]["p"]),
            q=UniPoly.from_strings(obj["model"]["q"]),
        )
    if "dense" in obj:
        return BiPoly(t_coeffs=[UniPoly.from_strings(c) for c in obj["dense"]])
    if "coeffs" in obj:
        return UniPoly.from_strings(obj["coeffs"])
    raise SystemExit("polynomial file needs 'model', 'dense' or 'coeffs'")


def cmd_poly(args):
    from . import poly as P
    from .poly import INFINITY, BiPoly, QuadPoint, UniPoly

    f = _load_poly_arg(args.file)
    out = {"file": args.file, "op": args.op}
    if args.file[0] != "@":
        out["inputs_digest"] = _digest(args.file)
    if args.op == "disc":
        if isinstance(f, BiPoly):
            d = P.discriminant_t(f)
            out["disc_t"] = [str(c) for c in d.coeffs]
        else:
            out["disc"] = str(P.discriminant(f))
    elif args.op == "pattern":
        if not isinstance(f, BiPoly):
            raise SystemExit("pattern needs a bivariate polynomial")
        at = _parse_at(args)
        out["at"] = str(at)
        out["pattern"] = str(P.multiplicity_pattern(f, at))
    elif args.op == "sturm":
        g = f.eval_t(mpq(args.at)) if isinstance(f, BiPoly) else f
        out["real_roots"] = P.sturm_count(g)
        out["degree"] = g.degree
        out["totally_real"] = bool(P.is_totally_real(g))
    elif args.op == "factor":
        if args.mod is None:
            raise SystemExit("factor requires --mod p")
        g = f.eval_t(mpq(args.at)) if isinstance(f, BiPoly) else f
        out["mod"] = args.mod
        out["degrees"] = [list(t) for t in P.factor_mod_p(g, args.mod)]
    _emit(out)
    return 0


def _parse_at(args):
    from .poly import INFINITY, QuadPoint, UniPoly

    if args.at in ("inf", "oo", "infinity"):
        return INFINITY
    if args.quad:
        a, b = (mpq(x) for x in args.quad)
        return QuadPoint(UniPoly([b, a, 1]))
    if args.at is None:
        raise SystemExit("--at or --quad required")
    return mpq(args.at)


def cmd_verify(args):
    from .dataset import entry_ids
    from .galois import verify_all, verify_theorem

    t0 = time.time()
    if args.id == "all":
        report = verify_all(fast=args.fast)
    else:
        report = verify_theorem(args.id, fast=args.fast)
    report["seconds"] = round(time.time() - t0, 3)
    _emit(report)
    return 0 if report["ok"] else 1


def cmd_dataset(args):
    from .dataset import entry_ids, load_entry

    rows = []
    for eid in entry_ids():
        e = load_entry(eid)
        rows.append(
            {
                "id": eid,
                "group": e.group,
                "kind": e.kind,
                "cases": [c.label for c in e.cases],
                "checks": [c["type"] for c in e.checks],
            }
        )
    _emit({"entries": rows})
    return 0


def cmd_deform(args):
    from .deform import (
        ComplexMode,
        PadicMode,
        ShapeSystem,
        continue_lambda,
        load_shape_json,
        seed_values_from_json,
    )

    with open(args.shape) as fh:
        shape_json = json.load(fh)
    with open(args.seed_file) as fh:
        seed_json = json.load(fh)
    shape = load_shape_json(shape_json)
    if args.padic:
        mode = PadicMode(args.padic[0], args.padic[1])
    else:
        mode = ComplexMode(args.digits)
    system = ShapeSystem(shape)
    vals, lam0 = seed_values_from_json(system, seed_json, mode)
    system.setup(vals, lam0, mode)
    path = [mpq(x) for x in args.path.split(",")]
    t0 = time.time()
    sols = continue_lambda(system, vals, lam0, path, mode)
    out = {
        "shape_digest": _digest(args.shape),
        "seed_digest": _digest(args.seed_file),
        "mode": "padic" if args.padic else "complex",
        "unknowns": [str(u) for u in system.unknowns],
        "solutions": [[str(v) for v in sol] for sol in sols],
        "seconds": round(time.time() - t0, 3),
    }
    _emit(out)
    return 0


def cmd_algdep(args):
    from .deform import ComplexMode, PadicMode, fit_relation, scan_degrees

    with open(args.samples) as fh:
        obj = json.load(fh)
    if obj.get("mode") == "padic":
        mode = PadicMode(obj["p"], obj.get("prec", 200))
        samples = [(int(x), int(y)) for x, y in obj["samples"]]
    else:
        mode = ComplexMode(obj.get("digits", 200))
        samples = [
            (mode.ctx.mpf(x), mode.ctx.mpf(y)) for x, y in obj["samples"]
        ]
    d1, d2 = args.deg
    rel = fit_relation(samples, d1, d2, mode, holdout=args.holdout)
    if rel is None:
        degs, rel, tried = scan_degrees(samples, mode, start=(d1, d2))
        out = {"scanned": tried, "degrees": degs}
    else:
        out = {"degrees": [d1, d2]}
    if rel is not None:
        out["relation"] = {f"{i},{j}": str(c) for (i, j), c in sorted(rel.items())}
        out["ok"] = True
    else:
        out["ok"] = False
    _emit(out)
    return 0 if out.get("ok") else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="hurwitz",
        description="Braid orbits, Hurwitz-curve invariants and exact "
        "verification of explicit Galois polynomials.",
    )
    ap.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    ap.add_argument("--jobs", type=int, default=0,
                    help="worker cap for parallel sections (0 = serial)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("group", help="catalog group info")
    gsub = g.add_subparsers(dest="gcmd", required=True)
    gi = gsub.add_parser("info")
    gi.add_argument("name")

    o = sub.add_parser("orbit", help="braid orbit of a Nielsen class")
    o.add_argument("spec", help="JSON: {group, classes, braid_words?, symmetrize?}")

    p = sub.add_parser("poly", help="exact polynomial operations")
    p.add_argument("op", choices=["disc", "pattern", "sturm", "factor"])
    p.add_argument("file", help="polynomial JSON file or @dataset_id")
    p.add_argument("--at", help="rational t value or 'inf'")
    p.add_argument("--quad", nargs=2, metavar=("A", "B"),
                   help="evaluate at the roots of t^2 + A t + B")
    p.add_argument("--mod", type=int, help="prime modulus for factor")

    v = sub.add_parser("verify", help="run dataset verification bundles")
    v.add_argument("id", help="dataset entry id or 'all'")
    v.add_argument("--fast", action="store_true",
                   help="smoke-test grids (not the acceptance settings)")
    v.add_argument("--json", action="store_true", help="(default) JSON output")

    d = sub.add_parser("deform", help="continue a family along a lambda path")
    d.add_argument("shape", help="shape JSON")
    d.add_argument("--seed-file", required=True, dest="seed_file")
    d.add_argument("--path", required=True, help="comma-separated lambda values")
    d.add_argument("--padic", nargs=2, type=int, metavar=("P", "K"))
    d.add_argument("--digits", type=int, default=200)

    a = sub.add_parser("algdep", help="fit a bivariate relation to samples")
    a.add_argument("samples", help="samples JSON")
    a.add_argument("--deg", nargs=2, type=int, required=True)
    a.add_argument("--holdout", type=int, default=10)

    ds = sub.add_parser("dataset", help="bundled polynomial dataset")
    dssub = ds.add_subparsers(dest="dscmd", required=True)
    dssub.add_parser("list")
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    dispatch = {
        "group": cmd_group,
        "orbit": cmd_orbit,
        "poly": cmd_poly,
        "verify": cmd_verify,
        "deform": cmd_deform,
        "algdep": cmd_algdep,
        "dataset": cmd_dataset,
    }
    try:
        return dispatch[args.cmd](args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        raise


if __name__ == "__main__":
    sys.exit(main())
