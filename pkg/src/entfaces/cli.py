"""Command line front end.

    entfaces inequalities --n 4 --format csv
    entfaces rays --n 4 --out rays.json
    entfaces faces --n 4 --out faces.csv
    entfaces table --format csv
    entfaces membership --face "(U23^123,U12^12)" --a 1.5 --b 0.4
    entfaces witness --face "(W2^12,U23^134)" --k 4 --partition 2,1,1 --out w.json
    entfaces region --face "(U23^123,U12^12)" --grid 2,1,0.01 --out sawtooth.csv

``membership`` exits 0 for Entropic, 1 for NotEntropic, 2 for Uncharacterized.
Errors in the computation exit with 3 (argparse usage errors also use 2).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from contextlib import contextmanager

from .catalog import CatalogError, build_catalog
from .dist import DistError
from .entspace import DEFAULT_TOL, subset_label
from .faces import (
    ENTROPIC,
    NOT_ENTROPIC,
    FaceError,
    FacePoint,
    membership,
    point_from_params,
    region_sample,
    witness,
    witness_error,
)

EXIT_CODES = {ENTROPIC: 0, NOT_ENTROPIC: 1}
EXIT_UNCHARACTERIZED = 2
EXIT_ERROR = 3


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _dump_json(obj, fh):
    json.dump(obj, fh, indent=1)
    fh.write("\n")


def _csv_writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _subset_headers(n):
    return [subset_label(m) for m in range(1, 1 << n)]


def cmd_inequalities(args):
    cat_ineqs = build_catalog(args.n).inequalities
    with _output(args.out) as fh:
        if args.format == "json":
            _dump_json([{"index": q.index, "kind": q.kind,
                         "coefficients": {subset_label(m): c for m, c in q.as_dict().items()}}
                        for q in cat_ineqs], fh)
        else:
            w = _csv_writer(fh)
            w.writerow(["index", "kind"] + _subset_headers(args.n))
            for q in cat_ineqs:
                w.writerow([q.index, q.kind] + list(q.coefficients))
    return 0


def cmd_rays(args):
    cat = build_catalog(args.n)
    with _output(args.out) as fh:
        if args.format == "json":
            rows = []
            for i, (r, nm) in enumerate(zip(cat.rays, cat.names)):
                obj = r.rep.to_json_obj()
                obj["index"] = i
                obj["name"] = str(nm)
                obj["tight"] = sorted(r.tight)
                rows.append(obj)
            _dump_json(rows, fh)
        else:
            w = _csv_writer(fh)
            w.writerow(["index", "name"] + _subset_headers(args.n) + ["tight"])
            for i, (r, nm) in enumerate(zip(cat.rays, cat.names)):
                w.writerow([i, str(nm)] + list(r.vector) + [" ".join(map(str, sorted(r.tight)))])
    return 0


def cmd_faces(args):
    cat = build_catalog(args.n)
    with _output(args.out) as fh:
        if args.format == "json":
            _dump_json([{"ray_i": f.i, "ray_j": f.j, "is_2face": f.is_2face} for f in cat.faces], fh)
        else:
            w = _csv_writer(fh)
            w.writerow(["ray_i", "ray_j", "is_2face"])
            for f in cat.faces:
                w.writerow([f.i, f.j, int(f.is_2face)])
    return 0


def cmd_table(args):
    cat = build_catalog(4)
    rows = [ft.as_row() for ft in cat.face_types]
    with _output(args.out) as fh:
        if args.format == "json":
            _dump_json(rows, fh)
        else:
            w = _csv_writer(fh)
            w.writerow(["type_id", "ray1", "ray2", "count", "status", "theorem"])
            for r in rows:
                w.writerow([r["type_id"], r["ray1"], r["ray2"], r["count"], r["status"], r["theorem"]])
    return 0


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise FaceError("missing " + ", ".join("--" + n for n in missing))


def cmd_membership(args):
    _need(args, "face", "a", "b")
    fp = FacePoint(args.face, args.a, args.b)
    v = membership(fp, tol=args.tol)
    with _output(args.out) as fh:
        _dump_json({"face": args.face, "a": args.a, "b": args.b,
                    "status": v.status, "detail": v.detail}, fh)
    return EXIT_CODES.get(v.status, EXIT_UNCHARACTERIZED)


def _params(args) -> dict:
    params = {}
    if args.partition:
        params["partition"] = [int(x) for x in args.partition.split(",")]
        if args.k:
            params["k"] = int(args.k)
    elif args.k:
        ks = [int(x) for x in str(args.k).split(",")]
        if len(ks) == 2:
            params["k1"], params["k2"] = ks
        else:
            params["k"] = ks[0]
    return params


def cmd_witness(args):
    _need(args, "face")
    params = _params(args)
    if params:
        fp = point_from_params(args.face, params, b=args.b)
    else:
        _need(args, "a", "b")
        fp = FacePoint(args.face, args.a, args.b)
    d = witness(fp, params=params, tol=args.tol)
    err = witness_error(fp, d)
    report = {"face": args.face, "a": fp.a, "b": fp.b, "params": params,
              "support": d.support_size, "alphabets": list(d.alphabet_sizes),
              "max_error": err, "tolerance": args.tol, "verified": err <= args.tol}
    if args.out is None:
        _dump_json({"report": report, "dist": d.to_json_obj()}, sys.stdout)
    else:
        with _output(args.out) as fh:
            _dump_json(d.to_json_obj(), fh)
        _dump_json(report, sys.stdout)
    return 0


def cmd_region(args):
    _need(args, "face", "grid")
    try:
        a_max, b_max, step = (float(x) for x in args.grid.split(","))
    except ValueError:
        raise FaceError("--grid expects AMAX,BMAX,STEP") from None
    rows = region_sample(args.face, (a_max, b_max, step), tol=args.tol, snap=not args.no_snap)
    with _output(args.out) as fh:
        if args.format == "json":
            _dump_json([{"a": a, "b": b, "status": v.status} for a, b, v in rows], fh)
        else:
            w = _csv_writer(fh)
            w.writerow(["a", "b", "status"])
            for a, b, v in rows:
                w.writerow([repr(a), repr(b), v.status])
    return 0


COMMANDS = {
    "inequalities": (cmd_inequalities, "elemental inequalities of Gamma_n"),
    "rays": (cmd_rays, "extreme rays of Gamma_n with names and tight facets"),
    "faces": (cmd_faces, "pairwise 2-face matrix of Gamma_n"),
    "table": (cmd_table, "the 59 face types of Gamma_4"),
    "membership": (cmd_membership, "is a face point entropic?"),
    "witness": (cmd_witness, "build and verify a characterizing distribution"),
    "region": (cmd_region, "membership on a grid, as CSV"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entfaces", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (fn, helptext) in COMMANDS.items():
        p = sub.add_parser(name, help=helptext, description=helptext)
        p.set_defaults(func=fn)
        p.add_argument("--n", type=int, default=4, choices=(2, 3, 4),
                       help="number of random variables (default 4)")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                       help="absolute tolerance in bits (default 1e-9)")
        p.add_argument("--format", choices=("json", "csv"),
                       default="csv" if name in ("inequalities", "rays", "faces", "table", "region") else "json",
                       help="output format")
        p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
        if name in ("membership", "witness", "region"):
            p.add_argument("--face", metavar="STR", help='face such as "(U23^123,U12^12)" or a type id')
        if name in ("membership", "witness"):
            p.add_argument("--a", type=float, metavar="F", help="coordinate on the first ray (bits)")
            p.add_argument("--b", type=float, metavar="F", help="coordinate on the second ray (bits)")
        if name == "witness":
            p.add_argument("--k", metavar="INT", help="exact k, or k1,k2 for the lattice face")
            p.add_argument("--partition", metavar="a,b,c", help="number partition of k")
        if name == "region":
            p.add_argument("--grid", metavar="AMAX,BMAX,STEP", help="sampling grid")
            p.add_argument("--no-snap", action="store_true",
                           help="do not add the log2(k) values to the grid axes")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.tol <= 0:
        print("entfaces: error: --tol must be positive", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (FaceError, CatalogError, DistError, OSError) as exc:
        print(f"entfaces: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
