"""Command-line front door for the library.

Each subcommand parses its input file(s), dispatches to the library and
prints one report.  Reports are canonical JSON by default (sorted keys,
no whitespace) so identical inputs give byte-identical output; ``--text``
switches to a short human-readable rendering.  Exit status is 0 for a
passing report, 1 for a failing report, and 2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import ainfty as _ai
from . import conductors as _cond
from . import maslov as _mas
from . import morse as _mor
from . import novikov as _nov
from . import polytopes as _pol

PASS = 0
FAIL = 1
BAD_INPUT = 2

_FAMILY = {"assoc": "K", "multi": "J"}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(obj, text: str, as_text: bool) -> None:
    sys.stdout.write((text if as_text else _dump(obj)) + "\n")


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _bool(b) -> str:
    return "true" if b else "false"


def _report_ok(report: dict) -> bool:
    """A report passes when every boolean it carries is true."""
    return all(v for v in report.values() if isinstance(v, bool))


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_polytope(args) -> int:
    family = _FAMILY[args.family]
    if args.faces:
        faces = _pol.enumerate_faces(family, args.l)
        rows = sorted(
            ({"dim": _pol.face_dimension(f), "face": _pol.serialize_face(f)}
             for f in faces),
            key=lambda r: (r["dim"], r["face"]))
        text = "\n".join(f"{r['dim']} {r['face']}" for r in rows)
        _emit(rows, text, args.text)
        return PASS
    if args.facet_signs:
        rows = [
            {"face": f.face, "kind": f.kind, "params": list(f.params),
             "sign": f.orientation_sign}
            for f in _pol.facets_with_signs(family, args.l)
        ]
        rows.sort(key=lambda r: r["face"])
        text = "\n".join(
            f"{r['face']} {r['kind']}{tuple(r['params'])} {r['sign']:+d}"
            for r in rows)
        _emit(rows, text, args.text)
        return PASS
    if args.boundary_check:
        rep = _pol.boundary_map_consistency(family, args.l)
        text = (f"dd_zero={_bool(rep['dd_zero'])} faces={rep['faces']} "
                f"boundary_entries={rep['boundary_entries']}")
        _emit(rep, text, args.text)
        return PASS if rep["dd_zero"] else FAIL
    fv = _pol.f_vector(family, args.l)
    _emit(fv, " ".join(str(x) for x in fv), args.text)
    return PASS


def _cmd_novikov(args) -> int:
    cutoff = Fraction(args.cutoff) if args.cutoff is not None else None
    a = _nov.parse_series(args.expr, ring=args.ring, cutoff=cutoff)
    val = str(_nov.valuation(a)) if a else None
    out = {"series": _nov.format_series(a), "valuation": val}
    _emit(out, out["series"], args.text)
    return PASS


def _cmd_maslov(args) -> int:
    obj = _load_json(args.file)
    path = _mas.path_from_json(obj)
    if "reference" in obj:
        ref = [[Fraction(str(e)) for e in row] for row in obj["reference"]]
    else:
        ref = path.pieces[0].value(path.start)
    report = _mas.rs_index_report(ref, path)
    out = _mas.report_to_json(report)
    try:
        out["string_index"] = _mas.string_index(path)
    except _mas.NonTransverseEndpoints:
        out["string_index"] = None
    si = out["string_index"]
    text = (f"rs_index={out['rs_index']} "
            f"string_index={'none' if si is None else si} "
            f"crossings={len(out['crossings'])}")
    _emit(out, text, args.text)
    return PASS


def _complex(obj) -> "_ai.FloerComplex":
    return _ai.assemble_differential(_ai.datum_from_json(obj))


def _entries(obj, ring: str, key: str = "H") -> "_ai.MapDatum":
    return _ai.map_from_json({key: obj}, ring=ring)


def _kv_text(report: dict) -> str:
    parts = []
    for k in sorted(report):
        v = report[k]
        if isinstance(v, bool):
            parts.append(f"{k}={_bool(v)}")
        elif isinstance(v, (int, str)):
            parts.append(f"{k}={v}")
    return " ".join(parts)


def _cmd_ainfty(args) -> int:
    obj = _load_json(args.file)
    if args.action == "check":
        report = _ai.check_a_infinity(_ai.datum_from_json(obj))
    elif args.action == "map":
        source = _complex(obj["source"])
        target = _complex(obj["target"])
        h = _entries(obj["map"], source.datum.ring)
        report = _ai.check_chain_map(target, source, h)
    elif args.action == "homotopy":
        source = _complex(obj["source"])
        target = _complex(obj["target"])
        ring = source.datum.ring
        report = _ai.check_homotopy(
            target, source,
            _entries(obj["h0"], ring), _entries(obj["h1"], ring),
            _entries(obj["k"], ring, key="K"))
    elif args.action == "compose":
        c0 = _complex(obj["c0"])
        c1 = _complex(obj["c1"])
        c2 = _complex(obj["c2"])
        ring = c0.datum.ring
        report = _ai.check_composition(
            c0, c1, c2,
            _entries(obj["h01"], ring), _entries(obj["h12"], ring))
    else:  # augment
        c = _complex(obj["datum"])
        a = _ai.augmentation_from_json(obj["augmentation"],
                                       ring=c.datum.ring)
        push = None
        if "map" in obj and "source" in obj:
            push = (_complex(obj["source"]),
                    _entries(obj["map"], c.datum.ring))
        report = _ai.check_augmentation(c, a, push)
    _emit(report, _kv_text(report), args.text)
    return PASS if _report_ok(report) else FAIL


def _cmd_floer_hf(args) -> int:
    obj = _load_json(args.file)
    ring = "Q" if args.rational else "Z"
    if "points" in obj:
        datum = _mor.build_floer_complex(_mor.morse_datum_from_json(obj))
    else:
        datum = _ai.datum_from_json(obj)
    coh = _ai.cohomology(_ai.assemble_differential(datum), ring=ring)
    ranks = ",".join(f"{d}:{coh['ranks'][d]}" for d in sorted(coh["ranks"]))
    text = f"total_rank={coh['total_rank']} ranks={ranks}"
    _emit(coh, text, args.text)
    return PASS


def _cmd_floer_sphere(args) -> int:
    datum = _mor.sphere_fixture(args.n)
    sub = _ai.pair_subcomplex(datum, 0, 1)
    coh = _ai.cohomology(_ai.assemble_differential(sub), ring="Z")
    # the fixture has no arity-1 tensors, so generators represent classes
    degrees = sorted(g.mu for g in sub.generators)
    products = []
    for e in datum.tensors:
        if e.arity != 2:
            continue
        products.append({
            "a": e.inputs[0].split(".")[0],
            "b": e.inputs[1].split(".")[0],
            "out": e.output.split(".")[0],
            "coefficient": _nov.format_series(e.coeff),
        })
    products.sort(key=lambda r: (r["a"], r["b"]))
    out = {
        "n": args.n,
        "total_rank": coh["total_rank"],
        "degrees": degrees,
        "products": products,
    }
    names = sorted({r["a"] for r in products} | {r["b"] for r in products})
    lines = [f"rank={coh['total_rank']} degrees=" +
             ",".join(str(d) for d in degrees)]
    prod = {(r["a"], r["b"]): r["out"] for r in products}
    for a in names:
        for b in names:
            lines.append(f"{a}*{b}={prod.get((a, b), '0')}")
    _emit(out, "\n".join(lines), args.text)
    return PASS


def _cmd_sft(args) -> int:
    m = tuple(int(x) for x in args.m.split(","))
    q = _mor.SftIndexQuery(n=args.n, g=args.g, v=args.v, m=m)
    rep = _mor.sft_report(q)
    text = f"bound={rep['bound']} satisfies={_bool(rep['satisfies'])}"
    _emit(rep, text, args.text)
    return PASS if rep["satisfies"] else FAIL


def _cmd_conductor(args) -> int:
    obj = _load_json(args.file)
    h = _cond.continuation_from_json(obj["h"])
    k = _cond.continuation_from_json(obj["k"])
    exact = _cond.is_exact(h, k)
    overlap = len(set(h.images) & set(k.positions))
    out = {
        "exact": exact,
        "overlap": overlap,
        "image": list(_cond.image(h).labels),
        "cokernel": list(_cond.cokernel(h).labels),
    }
    _emit(out, f"exact={_bool(exact)} overlap={overlap}", args.text)
    return PASS if exact else FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="openstrings",
        description="Polytope, Novikov, Maslov and Floer-complex reports.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("polytope", help="face lattices and boundary signs")
    p.add_argument("family", choices=sorted(_FAMILY))
    p.add_argument("--l", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--faces", action="store_true")
    mode.add_argument("--f-vector", action="store_true")
    mode.add_argument("--facet-signs", dest="facet_signs",
                      action="store_true")
    mode.add_argument("--boundary-check", dest="boundary_check",
                      action="store_true")
    p.add_argument("--text", action="store_true")
    p.set_defaults(run=_cmd_polytope)

    p = sub.add_parser("novikov", help="formal series arithmetic")
    nsub = p.add_subparsers(dest="action", required=True)
    pe = nsub.add_parser("eval", help="parse and normalize a series")
    pe.add_argument("expr")
    pe.add_argument("--ring", choices=["Z", "Q"], default="Z")
    pe.add_argument("--cutoff", default=None)
    pe.add_argument("--text", action="store_true")
    pe.set_defaults(run=_cmd_novikov)

    p = sub.add_parser("maslov", help="crossing-form path indices")
    msub = p.add_subparsers(dest="action", required=True)
    mi = msub.add_parser("index", help="index report for a path file")
    mi.add_argument("file")
    mi.add_argument("--text", action="store_true")
    mi.set_defaults(run=_cmd_maslov)

    p = sub.add_parser("ainfty", help="differential, map and homotopy checks")
    asub = p.add_subparsers(dest="action", required=True)
    for name, helptext in (
            ("check", "does the assembled differential square to zero"),
            ("map", "chain-map check for a continuation bundle"),
            ("homotopy", "homotopy identity for a five-part bundle"),
            ("compose", "functoriality of composed continuations"),
            ("augment", "augmentation conditions, optionally pushed forward")):
        ap = asub.add_parser(name, help=helptext)
        ap.add_argument("file")
        ap.add_argument("--text", action="store_true")
        ap.set_defaults(run=_cmd_ainfty, action=name)

    p = sub.add_parser("floer", help="cohomology of assembled complexes")
    fsub = p.add_subparsers(dest="action", required=True)
    fh = fsub.add_parser("hf", help="cohomology ranks from a datum file")
    fh.add_argument("file")
    fh.add_argument("--rational", action="store_true",
                    help="use field coefficients instead of integers")
    fh.add_argument("--text", action="store_true")
    fh.set_defaults(run=_cmd_floer_hf)
    fs = fsub.add_parser("sphere", help="built-in two-point fixture")
    fs.add_argument("--n", type=int, required=True)
    fs.add_argument("--text", action="store_true")
    fs.set_defaults(run=_cmd_floer_sphere)

    p = sub.add_parser("sft", help="transversality index bound")
    ssub = p.add_subparsers(dest="action", required=True)
    sb = ssub.add_parser("bound")
    sb.add_argument("--n", type=int, required=True)
    sb.add_argument("--g", type=int, required=True)
    sb.add_argument("--v", type=int, required=True)
    sb.add_argument("--m", required=True,
                    help="comma-separated multiplicities, one per point")
    sb.add_argument("--text", action="store_true")
    sb.set_defaults(run=_cmd_sft)

    p = sub.add_parser("conductor", help="exactness of continuation pairs")
    csub = p.add_subparsers(dest="action", required=True)
    ce = csub.add_parser("exact")
    ce.add_argument("file")
    ce.add_argument("--text", action="store_true")
    ce.set_defaults(run=_cmd_conductor)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except json.JSONDecodeError as e:
        sys.stderr.write(
            f"parse error at line {e.lineno}, column {e.colno}: {e.msg}\n")
        return BAD_INPUT
    except _nov.ParseError as e:
        sys.stderr.write(f"parse error: {e}\n")
        return BAD_INPUT
    except OSError as e:
        sys.stderr.write(f"cannot read input: {e}\n")
        return BAD_INPUT
    except (ValueError, KeyError, TypeError) as e:
        sys.stderr.write(f"invalid input: {e}\n")
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
