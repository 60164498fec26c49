"""Command-line interface.

Subcommands: verify, construct, transplant, unfold, spectrum,
spectrum-compare, catalog, scan, gww.  Exit codes: 0 success / property
holds, 1 a checked property fails, 2 parse error, 3 a resource bound was
exceeded.  GF_BOUND in the environment overrides the enumeration bound.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import catalog as cat
from .constructions import type1, type2, type3
from .drums import BaseTile, boundary_polygon, export_json, export_svg, load_domain_json, unfold
from .errors import BoundExceeded, SpecFormatError
from .groups import left_cosets
from .limits import enumeration_bound
from .permutations import format_cycles
from .spectral import dirichlet_eigenvalues, pairwise_relative_gaps, rasterize
from .specio import (
    construction_from_stanza,
    format_triple_spec,
    parse_triple_spec,
    stanza_from_construction,
)
from .transplant import (
    InvolutionSystem,
    detect_isometry,
    find_transplantation,
    fixeq_check,
    format_involution_system,
    is_tree,
    okada_shudo_scan,
    parse_involution_system,
    verify_intertwiner,
)
from .triples import compress, check_inv, inv_witnesses, property_report


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _parse_h(text: str) -> Fraction:
    return Fraction(text)


def cmd_verify(args) -> int:
    triple, pair, _ = parse_triple_spec(_read(args.spec))
    requested = [p.strip() for p in args.props.split(",")] if args.props else \
        ["ac", "ec", "ff", "max", "pair", "inv"]
    known = {"ac", "ec", "ff", "max", "pair", "inv"}
    unknown = set(requested) - known
    if unknown:
        raise SpecFormatError(f"unknown properties: {sorted(unknown)}")
    report = property_report(
        triple,
        pair_candidate=pair,
        r=args.sides,
        tree_required=not args.no_tree,
        bound=args.bound,
        check_inv_property="inv" in requested,
    )
    if args.json:
        print(json.dumps(report.to_json_dict(), indent=1))
    else:
        if triple.label:
            print(f"triple: {triple.label}")
        print(f"|G| = {triple.G.order}, |H| = {triple.H.order}, |K| = {triple.K.order}")
        for line in report.lines():
            print(line)
    status = {
        "ac": report.ac,
        "ec": report.ec,
        "ff": report.ff,
        "max": report.max,
        "pair": report.pair.value != "failed",
        "inv": report.inv is not None,
    }
    return 0 if all(status[p] for p in requested) else 1


def cmd_catalog(args) -> int:
    if args.action == "list":
        for n, q in cat.SUPPORTED:
            order = cat.psl_order(n, q)
            pts = (q**n - 1) // (q - 1)
            print(f"({n},{q}): order {order}, index {pts}, degree {2 * pts}")
        return 0
    n, q = (int(x) for x in args.nq.split(","))
    triple = cat.psl_triple(n, q)
    pair = cat.duality_automorphism(n, q)
    if args.compress:
        table = left_cosets(triple.G, triple.H)
        pair = [table.action_of(c) for c in pair]
        triple = compress(triple)
    text = format_triple_spec(triple, pair_candidate=pair)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def cmd_construct(args) -> int:
    base, base_pair, stanza = parse_triple_spec(_read(args.spec))
    if stanza is None:
        if args.type is None:
            raise SpecFormatError("no construct stanza in file and no --type given")
        stanza = {"variant": str(args.type)}
        if args.n is not None:
            stanza["n"] = str(args.n)
        if args.l is not None:
            stanza["l"] = str(args.l)
        if args.k is not None:
            stanza["k"] = str(args.k)
        if args.top_degree is None or args.top_gens is None:
            raise SpecFormatError("need --top-degree and --top-gens for the top group")
        stanza["T_degree"] = str(args.top_degree)
        stanza["T_generators"] = args.top_gens
    elif args.type is not None and int(stanza.get("variant", 0)) != args.type:
        raise SpecFormatError("--type disagrees with the construct stanza")
    if args.compress_base:
        base = compress(base, args.bound)
    data = construction_from_stanza(base, stanza)
    build = {1: type1, 2: type2, 3: type3}[data.variant]
    result = build(data, args.bound)
    # a degenerate construction hands the base back, pair candidate included
    text = format_triple_spec(result, pair_candidate=base_pair if result is base else None)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out} (|G| = {result.G.order}, |H| = {result.H.order}, "
              f"|K| = {result.K.order}, degree {result.G.degree})")
    else:
        print(text, end="")
    return 0


def cmd_transplant(args) -> int:
    A = parse_involution_system(_read(args.a))
    B = parse_involution_system(_read(args.b))
    sol = find_transplantation(A, B)
    iso = detect_isometry(A, B)
    out = {
        "schema": 1,
        "tiles": A.n_tiles,
        "solution_dimension": 0 if sol is None else sol.dimension(),
        "invertible": bool(sol and sol.invertible),
        "certificate": "" if sol is None else sol.certificate,
        "permutation_solution": None if iso is None else format_cycles(iso, one_based=True),
    }
    if args.json:
        print(json.dumps(out, indent=1))
    else:
        print(f"tiles: {out['tiles']}")
        print(f"solution space dimension: {out['solution_dimension']}")
        print(f"invertible intertwiner: {'yes' if out['invertible'] else 'no'} ({out['certificate']})")
        print(f"permutation intertwiner: {out['permutation_solution'] or 'none'}")
    if sol and sol.invertible:
        assert verify_intertwiner(sol.T, A, B)
        return 0
    return 1


def cmd_unfold(args) -> int:
    sys_ = parse_involution_system(_read(args.system))
    tile = BaseTile.named(args.tile)
    domain = unfold(sys_, tile)
    print(f"tiles: {domain.n_tiles}, overlap: {domain.overlap_flag}")
    boundary = None
    if not domain.overlap_flag:
        try:
            boundary = boundary_polygon(domain)
            print(f"boundary vertices: {len(boundary)}, area: {domain.total_area()}")
        except ValueError as exc:
            print(f"boundary: {exc}")
    if args.svg:
        export_svg(domain, args.svg, boundary)
        print(f"wrote {args.svg}")
    if args.json_out:
        if boundary is None:
            print("no exact boundary; skipping JSON export")
        else:
            export_json(domain, args.json_out, boundary)
            print(f"wrote {args.json_out}")
    return 0 if not domain.overlap_flag else 1


def cmd_spectrum(args) -> int:
    _, boundary = load_domain_json(args.domain)
    if boundary is None:
        raise SpecFormatError("domain json has no boundary polygon")
    mask = rasterize(boundary, _parse_h(args.h))
    res = dirichlet_eigenvalues(mask, args.k, seed=args.seed)
    if args.json:
        print(json.dumps({"schema": 1, "h": str(res.h), "eigenvalues": res.eigenvalues}, indent=1))
    else:
        print(f"h = {res.h}, interior nodes = {mask.occupied_count}")
        for i, ev in enumerate(res.eigenvalues, 1):
            print(f"  lambda_{i:<2d} = {ev:.6f}")
    return 0


def cmd_spectrum_compare(args) -> int:
    _, pa = load_domain_json(args.a)
    _, pb = load_domain_json(args.b)
    if pa is None or pb is None:
        raise SpecFormatError("domain json has no boundary polygon")
    h = _parse_h(args.h)
    ra = dirichlet_eigenvalues(rasterize(pa, h), args.k, seed=args.seed)
    rb = dirichlet_eigenvalues(rasterize(pb, h), args.k, seed=args.seed)
    gaps = pairwise_relative_gaps(ra, rb)
    for i, (x, y, g) in enumerate(zip(ra.eigenvalues, rb.eigenvalues, gaps), 1):
        print(f"  lambda_{i:<2d}: {x:12.6f} {y:12.6f}  gap {g:.2e}")
    ok = max(gaps) <= args.tol
    print(f"{'PASS' if ok else 'FAIL'}: max relative gap {max(gaps):.2e} "
          f"{'<=' if ok else '>'} tolerance {args.tol}")
    return 0 if ok else 1


def cmd_scan(args) -> int:
    triple, _, _ = parse_triple_spec(_read(args.spec))
    pairs = okada_shudo_scan(triple, args.nmax, args.r, args.bound)
    print(f"found {len(pairs)} transplantable nonisometric pair(s)")
    if args.outdir:
        os.makedirs(args.outdir, exist_ok=True)
        for i, (a, b) in enumerate(pairs):
            for side, sys_ in (("a", a), ("b", b)):
                path = os.path.join(args.outdir, f"pair{i:03d}{side}.ivs")
                with open(path, "w") as fh:
                    fh.write(format_involution_system(sys_))
        print(f"wrote {2 * len(pairs)} system files to {args.outdir}")
    return 0 if pairs else 1


def cmd_gww(args) -> int:
    """End-to-end flagship pipeline, deterministic throughout."""
    report = {"schema": 1, "stages": {}}

    def stage(name, value):
        report["stages"][name] = value
        if not args.json:
            print(f"{name}: {value}")

    triple = cat.psl_triple(3, 2)
    rep = property_report(triple, pair_candidate=cat.duality_automorphism(3, 2),
                          check_inv_property=False)
    stage("catalog", f"psl(3,2): |G| = {triple.G.order}, index {triple.G.order // triple.H.order}")
    stage("ac", rep.ac)
    if not rep.ac:
        print("ABORT at stage ac")
        return 1
    tile = BaseTile.named(args.tile)
    table_k = left_cosets(triple.G, triple.K)
    chosen = None
    rational_tile = args.tile == "half-square"
    for gs, sys_a in inv_witnesses(triple, 3, tree_required=True):
        sys_b = InvolutionSystem(len(table_k), 3, tuple(table_k.action_of(g) for g in gs))
        if not is_tree(sys_b):
            continue
        for order in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
            a2, b2 = sys_a.permute_colors(order), sys_b.permute_colors(order)
            da, db = unfold(a2, tile), unfold(b2, tile)
            if rational_tile:
                if da.overlap_flag or db.overlap_flag:
                    continue
                try:
                    pa, pb = boundary_polygon(da), boundary_polygon(db)
                except ValueError:
                    continue
                chosen = (a2, b2, da, db, pa, pb)
            else:
                chosen = (a2, b2, da, db, None, None)
            break
        if chosen:
            break
    if not chosen:
        print("ABORT at stage unfold: no witness yields clean domains")
        return 1
    sys_a, sys_b, da, db, pa, pb = chosen
    stage("tree", is_tree(sys_a) and is_tree(sys_b))
    stage("fixeq", f"{fixeq_check(sys_a)} (traces {tuple(sys_a.traces())}, sum {sum(sys_a.traces())})")
    sol = find_transplantation(sys_a, sys_b)
    stage("transplantation_invertible", bool(sol and sol.invertible))
    stage("permutation_solution", sol.permutation_solution is not None if sol else None)
    if not (sol and sol.invertible) or sol.permutation_solution is not None:
        print("ABORT at stage transplantation")
        return 1
    stage("overlap_a", da.overlap_flag)
    stage("overlap_b", db.overlap_flag)
    outdir = args.outdir or "."
    os.makedirs(outdir, exist_ok=True)
    for side, domain, poly, sys_ in (("a", da, pa, sys_a), ("b", db, pb, sys_b)):
        with open(os.path.join(outdir, f"gww_{side}.ivs"), "w") as fh:
            fh.write(format_involution_system(sys_))
        export_svg(domain, os.path.join(outdir, f"gww_{side}.svg"), poly)
        if poly is not None:
            export_json(domain, os.path.join(outdir, f"gww_{side}.json"), poly)
    stage("artifacts", f"written to {outdir}")
    if pa is None:
        stage("spectra", "skipped (non-rational tile coordinates)")
        if args.json:
            print(json.dumps(report, indent=1))
        return 0
    h = _parse_h(args.h)
    ra = dirichlet_eigenvalues(rasterize(pa, h), args.k, seed=args.seed)
    rb = dirichlet_eigenvalues(rasterize(pb, h), args.k, seed=args.seed)
    gaps = pairwise_relative_gaps(ra, rb)
    stage("spectrum_a", [round(x, 6) for x in ra.eigenvalues])
    stage("spectrum_b", [round(x, 6) for x in rb.eigenvalues])
    ok = max(gaps) <= args.tol
    stage("max_relative_gap", max(gaps))
    if args.json:
        report["pass"] = ok
        print(json.dumps(report, indent=1))
    else:
        print(f"{'PASS' if ok else 'FAIL'}: first {args.k} eigenvalues agree within "
              f"{args.tol:.2%} at h = {h}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="isodrum",
        description="Construct and verify group triples and isospectral drums.",
    )
    ap.add_argument("--seed", type=int, default=0, help="seed for all randomized internals")
    ap.add_argument("--threads", type=int, default=1,
                    help="cap on worker threads (the computational core is serial; "
                         "accepted for interface stability)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check AC/EC/FF/MAX/PAIR/INV on a triple spec")
    p.add_argument("spec")
    p.add_argument("--json", action="store_true")
    p.add_argument("--props", default=None,
                   help="comma list of properties the exit code requires (default all)")
    p.add_argument("--sides", type=int, default=3)
    p.add_argument("--no-tree", action="store_true", help="drop the tree requirement for INV")
    p.add_argument("--bound", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="list or emit the projective flagship triples")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("--nq", default="3,2", help="n,q as in 3,2")
    p.add_argument("--out", default=None)
    p.add_argument("--compress", action="store_true",
                   help="emit on the coset action (degree = index)")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("construct", help="build a type 1/2/3 wreath triple")
    p.add_argument("--spec", required=True)
    p.add_argument("--type", type=int, choices=[1, 2, 3], default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--top-degree", type=int, default=None)
    p.add_argument("--top-gens", default=None, help="bracketed 1-based cycle list")
    p.add_argument("--compress-base", action="store_true")
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("transplant", help="solve the transplantation equation for two systems")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_transplant)

    p = sub.add_parser("unfold", help="unfold an involution system into a planar domain")
    p.add_argument("--system", required=True)
    p.add_argument("--tile", default="half-square")
    p.add_argument("--svg", default=None)
    p.add_argument("--json", dest="json_out", default=None, help="exact JSON output path")
    p.set_defaults(func=cmd_unfold)

    p = sub.add_parser("spectrum", help="Dirichlet eigenvalues of a domain")
    p.add_argument("--domain", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--h", default="1/64")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("spectrum-compare", help="pairwise eigenvalue gaps of two domains")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--h", default="1/64")
    p.add_argument("--tol", type=float, default=0.01)
    p.set_defaults(func=cmd_spectrum_compare)

    p = sub.add_parser("scan", help="bounded census of transplantable pairs")
    p.add_argument("--spec", required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--outdir", default=None)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("gww", help="the full flagship pipeline")
    p.add_argument("--h", default="1/64")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--tile", default="half-square")
    p.add_argument("--outdir", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gww)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except BoundExceeded as exc:
        print(f"resource bound exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
