"""Command line entry point.  Every subcommand prints one JSON document.

Exit codes: 0 ok, 1 usage error, 2 domain error, 3 enumeration budget exceeded.
"""

import argparse
import json
import random
import sys

from .errors import DomainError, EnumerationTooLarge
from .exactfield import ExactMatrix, GF, QQ, field_from_json, field_to_json
from .surface import GeneratorId, MarkedPoint, SurfaceType, build_presentation, free_generators


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


# -- argument helpers --------------------------------------------------------

def _surface_args(p):
    p.add_argument("--surface", help="e.g. 'g=1,l=0,r=1,m=2:1'")
    for name in ("g", "l", "r", "d"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--m", help="primary points per irregular boundary, comma separated")


def _surface(args):
    if args.surface:
        t = SurfaceType.parse(args.surface)
    else:
        m = tuple(int(x) for x in args.m.split(",") if x) if args.m else ()
        d = args.d if args.d is not None else len(m)
        t = SurfaceType(args.g or 0, args.l or 0, args.r or 0, d, m)
    return t


def _field_args(p, default=None):
    p.add_argument("--p", type=int, default=default, help="prime field GF(p); omit for QQ")
    p.add_argument("--field", help='field JSON, e.g. {"kind":"Fp","p":5}')


def _field(args):
    if getattr(args, "field", None):
        return field_from_json(json.loads(args.field))
    if getattr(args, "p", None):
        return GF(args.p)
    return QQ


def _load(source):
    """JSON from a file path, '-' for stdin, or an inline JSON string."""
    if source is None or source == "-":
        return json.load(sys.stdin)
    text = source.strip()
    if text.startswith(("[", "{")):
        return json.loads(text)
    with open(source) as fh:
        return json.load(fh)


def _matrix(args, field):
    obj = _load(args.matrix)
    if isinstance(obj, dict):
        field = field_from_json(obj["field"]) if "field" in obj else field
        obj = obj["matrix"]
    return ExactMatrix(obj, field)


def _flag(source, field):
    from .flags import Flag
    obj = _load(source)
    if isinstance(obj, dict):
        field = field_from_json(obj["field"]) if "field" in obj else field
        obj = obj["steps"]
    return Flag.from_json(obj, field)


def _rep(args):
    from .repvar import DecoratedRep
    return DecoratedRep.from_json(_load(args.input))


def _parts(args):
    parts = [tuple(int(x) for x in p.split(",")) for p in (args.part or [])]
    for extra in (args.part2, args.part3):
        if extra:
            parts.append(tuple(int(x) for x in extra.split(",")))
    if not parts:
        raise UsageError("give at least one --part")
    return parts


# -- commands ------------------------------------------------------------------

def cmd_present(args):
    t = _surface(args)
    bp = MarkedPoint.parse(args.basepoint) if args.basepoint else None
    pres = build_presentation(t, bp)
    out = pres.to_json()
    if args.drop:
        out["free_generators"] = [g.name for g in free_generators(pres, args.drop)]
    return out


def cmd_dims(args):
    from .repvar import DIM_OBJECTS, dims_report
    t = _surface(args)
    objs = [args.object] if args.object else list(DIM_OBJECTS)
    reports = [dims_report(t, args.n, o) for o in objs]
    return reports[0] if args.object else {"surface": t.to_json(), "n": args.n, "dims": reports}


def cmd_sample(args):
    from .repvar import sample_random
    t = _surface(args)
    field = _field(args)
    dep = GeneratorId.parse(args.dependent) if args.dependent else None
    return sample_random(t, args.n, field, seed=args.seed, dependent=dep).to_json()


def cmd_verify(args):
    from .repvar import is_pinned, verify_relation
    rep = _rep(args)
    return {"ok": verify_relation(rep), "borel": all(x.is_borel() for x in rep.N),
            "pinned": is_pinned(rep)}


def cmd_solve(args):
    from .repvar import solve_for
    return solve_for(_rep(args), args.target).to_json()


def cmd_act(args):
    from .repvar import MixedGroupElement, mixed_conjugate
    rep = _rep(args)
    if args.element:
        x = MixedGroupElement.from_json(_load(args.element), rep.surface, rep.n, rep.field)
    else:
        if args.seed is None:
            raise UsageError("give --element or --seed for a random group element")
        x = MixedGroupElement.random(rep.surface, rep.n, rep.field, args.cls,
                                     random.Random(args.seed), hatted=args.hatted)
    return {"element": x.to_json(), "rep": mixed_conjugate(x, rep, args.cls, hatted=args.hatted).to_json()}


def cmd_relpos(args):
    from .flags import relative_position
    field = _field(args)
    f1, f2 = _flag(args.flag1, field), _flag(args.flag2, field)
    return {"perm": relative_position(f1, f2).to_json()}


def cmd_stratum(args):
    from .repvar import stratum
    rep = _rep(args)
    segs = [f"t{i}_{j}" for i, mi in enumerate(rep.surface.m, start=1) for j in range(1, mi + 1)]
    return {"segments": [{"segment": s, "perm": p.to_json()} for s, p in zip(segs, stratum(rep))]}


def cmd_jordan_type(args):
    from .jordan import jordan_type
    m = _matrix(args, _field(args))
    return {"field": field_to_json(m.field), "jordan_type": jordan_type(m).to_json(m.field)}


def _listed(items, limit):
    out = []
    for k, item in enumerate(items):
        if limit is not None and k >= limit:
            break
        out.append(item)
    return out


def cmd_shuffles(args):
    from .jordan import JordanType, box_label, count_shuffles, enumerate_shuffles
    jt = JordanType.from_partitions(*_parts(args))
    out = {"shuffles": count_shuffles(jt)}
    if args.list:
        out["items"] = [[box_label(b) for b in s] for s in _listed(enumerate_shuffles(jt), args.limit)]
    return out


def cmd_types(args):
    from .jordan import (JordanType, count_shuffled_jordan_types, count_shuffles,
                         enumerate_shuffled_jordan_types)
    jt = JordanType.from_partitions(*_parts(args))
    out = {"shuffles": count_shuffles(jt), "types": count_shuffled_jordan_types(jt)}
    if args.list:
        out["items"] = [t.labels() for t in _listed(enumerate_shuffled_jordan_types(jt), args.limit)]
    return out


def cmd_jw(args):
    from .jordan import enumerate_shuffled_jordan_types, jordan_type, shuffled_matrix
    m = _matrix(args, _field(args))
    jt = jordan_type(m)
    items = [{"matrix": shuffled_matrix(jt, t, m.field).to_json(), "shuffle": t.labels()}
             for t in enumerate_shuffled_jordan_types(jt)]
    return {"field": field_to_json(m.field), "jordan_type": jt.to_json(m.field),
            "count": len(items), "items": items}


def cmd_classify_flag(args):
    from .jordan import classify_invariant_flag
    m = _matrix(args, _field(args))
    f = _flag(args.flag, m.field)
    t = classify_invariant_flag(m, f)
    return {"field": field_to_json(m.field), **t.to_json(m.field)}


def _type_arg(text, jt):
    from .jordan import ShuffledJordanType, parse_box
    text = text.strip()
    if text.startswith("[") or text.startswith("{"):
        obj = json.loads(text)
        labels = obj["shuffle"] if isinstance(obj, dict) else obj
    else:
        labels = [x for x in text.replace(",", " ").split() if x]
    return ShuffledJordanType(jt, tuple(parse_box(x) for x in labels))


def cmd_flag_from_type(args):
    from .jordan import flag_from_type, jordan_type
    m = _matrix(args, _field(args))
    t = _type_arg(args.type, jordan_type(m))
    f = flag_from_type(m, t)
    return {"field": field_to_json(m.field), "steps": f.to_json()}


def cmd_fibre(args):
    from .covering import fibre_over
    rep = _rep(args)
    return fibre_over(rep).to_json(rep.field)


def cmd_census(args):
    from . import census
    if args.mode == "bconj":
        r = census.b_conjugacy_census(args.n, args.q)
        out = {"mode": "bconj", "n": r.n, "q": r.q, "classes": r.classes,
               "jw_count": r.jw_count, "one_jw_per_class": r.one_jw_per_class}
    elif args.mode == "flags":
        out = {"mode": "flags", **census.invariant_flag_census_parallel(args.n, args.q, args.jobs)}
    else:
        t = _surface(args)
        report = census.orbit_count(t, args.n, args.q, args.cls, args.method, args.eliminate)
        out = report.to_json()
    if args.out:
        with open(args.out, "a") as fh:
            fh.write(json.dumps(out) + "\n")
    return out


# -- parser --------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="charvar", description="Decorated character varieties, exactly.")
    parser.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
        return p

    p = add("present", cmd_present, "finite presentation of the fundamental groupoid")
    _surface_args(p)
    p.add_argument("--basepoint", help="p1_1 or s1")
    p.add_argument("--drop", help="generator to drop, e.g. t1_2")

    p = add("dims", cmd_dims, "dimension formulas")
    _surface_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--object", choices=["RepVariety", "RepVarietyHat", "LocFi", "LocFr",
                                        "LocPFr", "MonSpace", "Hom"])

    p = add("sample", cmd_sample, "random point of the representation variety")
    _surface_args(p)
    p.add_argument("--n", type=int, required=True)
    _field_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dependent", help="slot solved from the relation")

    p = add("verify", cmd_verify, "check the relation of a point")
    p.add_argument("--input", default="-")

    p = add("solve", cmd_solve, "solve the relation for one slot")
    p.add_argument("--input", default="-")
    p.add_argument("--target", required=True)

    p = add("act", cmd_act, "mixed conjugation")
    p.add_argument("--input", default="-")
    p.add_argument("--element")
    p.add_argument("--seed", type=int)
    p.add_argument("--class", dest="cls", choices=["fi", "fr", "pfr", "g"], default="fi")
    p.add_argument("--hatted", action="store_true")

    p = add("relpos", cmd_relpos, "relative position of two flags")
    p.add_argument("--flag1", required=True)
    p.add_argument("--flag2", required=True)
    _field_args(p)

    p = add("stratum", cmd_stratum, "relative positions along boundary segments")
    p.add_argument("--input", default="-")

    for name, func, help_ in (("jordan-type", cmd_jordan_type, "Jordan type of a matrix"),
                              ("jw", cmd_jw, "shuffled Jordan matrices of a matrix's type")):
        p = add(name, func, help_)
        p.add_argument("--matrix", required=True)
        _field_args(p)

    for name, func, help_ in (("shuffles", cmd_shuffles, "count or list shuffles"),
                              ("types", cmd_types, "count or list shuffled Jordan types")):
        p = add(name, func, help_)
        p.add_argument("--part", action="append", help="partition, e.g. 3,2,2,1 (repeatable)")
        p.add_argument("--part2")
        p.add_argument("--part3")
        p.add_argument("--list", action="store_true")
        p.add_argument("--limit", type=int)

    p = add("classify-flag", cmd_classify_flag, "shuffled Jordan type of an invariant flag")
    p.add_argument("--matrix", required=True)
    p.add_argument("--flag", required=True)
    _field_args(p)

    p = add("flag-from-type", cmd_flag_from_type, "invariant flag of a given shuffled type")
    p.add_argument("--matrix", required=True)
    p.add_argument("--type", required=True, help="box labels such as 'λ1:1.1 λ1:2.1 λ1:1.2'")
    _field_args(p)

    p = add("fibre", cmd_fibre, "fibre of the forgetful covering over a point")
    p.add_argument("--input", default="-")

    p = add("census", cmd_census, "brute-force orbit counts over F_q")
    _surface_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--class", dest="cls", choices=["fi", "fr", "pfr", "g"], default="fi")
    p.add_argument("--method", choices=["orbits", "burnside"], default="orbits")
    p.add_argument("--eliminate", help="slot solved from the relation")
    p.add_argument("--mode", choices=["orbits", "bconj", "flags"], default="orbits")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="append the report as a JSON line to this file")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        out = args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"charvar: error: {exc}\n")
        return 1
    except EnumerationTooLarge as exc:
        sys.stderr.write(f"charvar: budget exceeded: {exc}\n")
        return 3
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"charvar: cannot read input: {exc}\n")
        return 1
    except (DomainError, ValueError, KeyError) as exc:
        sys.stderr.write(f"charvar: {type(exc).__name__}: {exc}\n")
        return 2
    json.dump(out, sys.stdout, indent=2 if args.pretty else None, ensure_ascii=False)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
