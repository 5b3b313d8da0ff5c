"""Command-line surface.

Exit codes: 0 for success or an OK verdict, 1 for a validation or
mathematical failure (with a witness in the report), 2 for malformed
input or an exceeded enumeration budget.  All output is deterministic.
"""

import argparse
import json
import sys

from toricvb import chern, fileio, klyachko, mnev, moduli
from toricvb.errors import BudgetError, InferenceError, SchemaError
from toricvb.fan import validate_fan


def _print_report(rep):
    print(rep.message)
    return 0 if rep.ok else 1


def cmd_validate_fan(args):
    fan = fileio.load_fan(args.fan)
    return _print_report(validate_fan(fan))


def cmd_validate_psi(args):
    psi = fileio.load_psi(args.psi)
    return _print_report(klyachko.validate_psi(psi))


def cmd_infer_psi(args):
    data = fileio.load_klyachko(args.klyachko)
    rep = klyachko.validate_filtrations(data)
    if not rep.ok:
        return _print_report(rep)
    psi = klyachko.psi_of(data)
    doc = fileio.dump_psi(psi)
    if args.out:
        fileio.write_json(doc, args.out)
        print(f"OK: wrote multisets for {len(psi.fan.max_cones)} maximal cones "
              f"to {args.out}")
    else:
        print(json.dumps(doc, indent=2))
    return 0


def cmd_check_compat(args):
    data = fileio.load_klyachko(args.klyachko)
    psi = fileio.load_psi(args.psi)
    rep = klyachko.validate_psi(psi)
    if not rep.ok:
        return _print_report(rep)
    return _print_report(klyachko.check_compatibility(data, psi))


def cmd_split(args):
    data = fileio.load_klyachko(args.klyachko)
    psi = fileio.load_psi(args.psi)
    k = args.cone
    if not 0 <= k < len(data.fan.max_cones):
        raise SchemaError(f"cone index {k} out of range")
    cone = data.fan.max_cone(k)
    rep = klyachko.check_compatibility(data, psi)
    if not rep.ok:
        return _print_report(rep)
    splitting = klyachko.split_cone(data, cone, psi.multiset(k))
    print(f"OK: splitting on cone {k} rays {cone.rays}")
    for cls, space in splitting.parts:
        rows = [[data.field.format(x) for x in row] for row in space.basis.entries]
        print(f"  class {list(cls.canonical)}: dim {space.dim} basis {rows}")
    return 0


def cmd_chern(args):
    psi = fileio.load_psi(args.psi)
    rep = klyachko.validate_psi(psi)
    if not rep.ok:
        return _print_report(rep)
    classes = chern.chern_of_psi(psi)
    for k in range(len(psi.fan.max_cones)):
        rays = psi.fan.max_cones[k]
        vecs = [psi.fan.rays[i] for i in rays]
        print(f"cone {k} rays {list(rays)} = {vecs}:")
        for i, pp in enumerate(classes):
            print(f"  c_{i} = {pp.pieces[k].render()}")
    return 0


def cmd_conditions(args):
    psi = fileio.load_psi(args.psi)
    rep = klyachko.validate_psi(psi)
    if not rep.ok:
        return _print_report(rep)
    conds = moduli.generate_conditions(psi)
    for cond in conds:
        rays = [ray for ray, _ in cond.pairs]
        dims = [dim for _, dim in cond.pairs]
        vecs = [psi.fan.rays[i] for i in rays]
        mark = " (trivial)" if cond.trivial else ""
        print(f"rays {rays} = {vecs} dims {dims}: required_dim "
              f"{cond.required_dim}{mark}")
    print(f"OK: {len(conds)} conditions")
    return 0


def cmd_member(args):
    flags = fileio.load_flags(args.flags)
    psi = fileio.load_psi(args.psi)
    rep = klyachko.validate_psi(psi)
    if not rep.ok:
        return _print_report(rep)
    try:
        ok, violations = moduli.check_membership(flags, psi)
    except ValueError as e:
        raise SchemaError(str(e))
    if ok:
        print("OK: flags satisfy all rank conditions")
        return 0
    for cond in violations:
        rays = [ray for ray, _ in cond.pairs]
        dims = [dim for _, dim in cond.pairs]
        print(f"violated: rays {rays} dims {dims} required_dim {cond.required_dim}")
    return 1


def cmd_enumerate(args):
    psi = fileio.load_psi(args.psi)
    rep = klyachko.validate_psi(psi)
    if not rep.ok:
        return _print_report(rep)
    pts = moduli.enumerate_points(psi, args.p)
    print(f"count {pts.count} over F_{args.p}")
    if args.points:
        for k, pt in enumerate(pts.points):
            desc = []
            for ray, chain in enumerate(pt.chains):
                for s in chain:
                    rows = [[str(x) for x in row] for row in s.basis.entries]
                    desc.append(f"ray {ray} dim {s.dim} {rows}")
            print(f"  point {k}: " + "; ".join(desc))
    if args.orbits:
        rep = moduli.orbit_analysis(pts)
        print(f"orbits {rep.orbit_count} sizes {list(rep.orbit_sizes)} "
              f"group_order {rep.group_order} free {rep.free}")
    return 0


def _parse_incidences(text):
    if not text:
        return frozenset()
    pairs = []
    for part in text.split(","):
        try:
            i, j = part.split(":")
            pairs.append((int(i), int(j)))
        except ValueError:
            raise SchemaError(f"bad incidence '{part}'; expected i:j")
    return frozenset(pairs)


def cmd_mnev(args):
    pat = mnev.IncidencePattern(d=args.d, dprime=args.dprime,
                                incidences=_parse_incidences(args.incidences))
    fan, psi = mnev.build_universality_instance(pat)
    fan_doc = fileio.dump_fan(fan)
    psi_doc = fileio.dump_psi(psi)
    if args.out_fan:
        fileio.write_json(fan_doc, args.out_fan)
        print(f"wrote fan to {args.out_fan}")
    else:
        print(json.dumps(fan_doc, indent=2))
    if args.out_psi:
        fileio.write_json(psi_doc, args.out_psi)
        print(f"wrote multisets to {args.out_psi}")
    else:
        print(json.dumps(psi_doc, indent=2))
    if args.verify_field:
        rep = mnev.verify_equivalence(pat, args.verify_field)
        return _print_report(rep)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="toricvb",
        description="exact computations with toric vector bundles")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-fan", help="structural fan validation")
    p.add_argument("fan")
    p.set_defaults(func=cmd_validate_fan)

    p = sub.add_parser("validate-psi", help="size and face compatibility of multisets")
    p.add_argument("psi")
    p.set_defaults(func=cmd_validate_psi)

    p = sub.add_parser("infer-psi", help="multisets of a filtration datum")
    p.add_argument("klyachko")
    p.add_argument("--out", help="write the multisets to this file")
    p.set_defaults(func=cmd_infer_psi)

    p = sub.add_parser("check-compat", help="rank test of data against multisets")
    p.add_argument("klyachko")
    p.add_argument("psi")
    p.set_defaults(func=cmd_check_compat)

    p = sub.add_parser("split", help="equivariant splitting on one maximal cone")
    p.add_argument("klyachko")
    p.add_argument("psi")
    p.add_argument("--cone", type=int, required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("chern", help="equivariant Chern classes per maximal cone")
    p.add_argument("psi")
    p.set_defaults(func=cmd_chern)

    p = sub.add_parser("conditions", help="rank conditions cutting out the moduli")
    p.add_argument("psi")
    p.set_defaults(func=cmd_conditions)

    p = sub.add_parser("member", help="membership of flags in the moduli")
    p.add_argument("flags")
    p.add_argument("psi")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("enumerate", help="moduli points over a prime field")
    p.add_argument("psi")
    p.add_argument("--p", type=int, required=True, help="prime modulus")
    p.add_argument("--points", action="store_true", help="list the points")
    p.add_argument("--orbits", action="store_true", help="PGL orbit analysis")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("mnev", help="universality instance from an incidence pattern")
    p.add_argument("--d", type=int, required=True, help="number of points")
    p.add_argument("--dprime", type=int, required=True, help="number of lines")
    p.add_argument("--incidences", default="", help='e.g. "1:1,2:1"')
    p.add_argument("--out-fan", help="write the fan to this file")
    p.add_argument("--out-psi", help="write the multisets to this file")
    p.add_argument("--verify-field", type=int, help="verify over F_p")
    p.set_defaults(func=cmd_mnev)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, BudgetError) as e:
        print(f"error: {e}")
        return 2
    except InferenceError as e:
        print(f"FAIL: {e}")
        return 1
    except ValueError as e:
        print(f"error: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
