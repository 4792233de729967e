"""Command-line front end.

JSON goes to stdout, diagnostics to stderr.  Exit codes: 0 success, 1 domain
error, 2 search budget exhausted, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .classify import classify, sylow_screen
from .errors import BudgetExceeded, SchurkitError
from .groups import (
    AbelianGroup,
    invariant_factors,
    make_automorphism,
    parse_element,
    parse_group,
    power_automorphism,
    sylow_subgroup,
)
from .morphisms import (
    Status,
    algebraic_iso_from_map,
    find_algebraic_isos,
    find_inducing_iso,
    orbits_match_classes,
    scheme_automorphism_search,
    separability_report,
)
from .sring import (
    SRing,
    check_eq1,
    check_row_sums,
    check_unit_law,
    cyclotomic,
    fusion,
    group_ring,
    rank_two,
    wreath_product,
)
from .witness import build_witness, standard_embedding

EXIT_OK, EXIT_DOMAIN, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_spec(text: str) -> AbelianGroup:
    """Accept ``15x8``, ``3,5,8`` and ``{3,5,8}``."""
    t = text.strip().strip("{}").replace(",", "x")
    return parse_group(t)


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise SchurkitError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchurkitError(f"{path} is not valid JSON: {exc}") from None


def _load_sring(path: str) -> SRing:
    return SRing.from_dict(_read_json(path))


def _load_maps(arg: str) -> list[list[int]]:
    """A class map given inline as JSON, or a file with one map or a list."""
    try:
        data = json.loads(arg)
    except json.JSONDecodeError:
        data = _read_json(arg)
    if isinstance(data, dict) and "phi" in data:
        data = data["phi"]
    if data and all(isinstance(x, int) for x in data):
        data = [data]
    return data


def _emit(obj) -> None:
    if isinstance(obj, str):
        sys.stdout.write(obj + "\n")
    else:
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_group_info(a) -> int:
    G = parse_spec(a.spec)
    sylow = []
    for p, rep in sylow_screen(G).items():
        sylow.append(
            {
                "p": p,
                "order": sylow_subgroup(G, p).order,
                "factors": list(rep.factors),
                "admissible": rep.admissible,
            }
        )
    _emit(
        {
            "group": G.literal,
            "name": G.name,
            "order": G.order,
            "primary_factors": list(G.primary_factors),
            "invariant_factors": list(invariant_factors(G.primary_factors)),
            "cyclic": G.is_cyclic(),
            "elementary": G.is_elementary(),
            "sylow": sylow,
        }
    )
    return EXIT_OK


def cmd_sring_build(a) -> int:
    if a.cyclotomic is not None:
        G = parse_spec(a.cyclotomic)
        autos = [power_automorphism(G, k) for k in a.power]
        for text in a.auto:
            images = [parse_element(G, t) for t in text.split(";")]
            autos.append(make_automorphism(G, images))
        A = cyclotomic(G, autos)
    elif a.group_ring is not None:
        A = group_ring(parse_spec(a.group_ring))
    elif a.rank_two is not None:
        A = rank_two(parse_spec(a.rank_two))
    elif a.source is not None:
        A = _load_sring(a.source)
    else:
        raise UsageError("sring build needs --cyclotomic, --group-ring, --rank-two or --from")
    if a.fusion is not None:
        maps = _load_maps(a.fusion)
        A = fusion(A, [algebraic_iso_from_map(A, A, m) for m in maps])
    if a.wreath is not None:
        G = parse_spec(a.wreath)
        A = wreath_product(A, G, standard_embedding(A.group, G))
    _write(A.to_json(), a.output)
    return EXIT_OK


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text + "\n")
    else:
        _emit(text)


def cmd_sring_check(a) -> int:
    A = _load_sring(a.file)
    report = {
        "group": A.group.literal,
        "rank": A.rank,
        "partition": True,
        "identity_class": True,
        "inverse_closed": True,
        "product_closed": True,
        "eq1": check_eq1(A),
        "row_sums": check_row_sums(A),
        "unit_law": check_unit_law(A),
        "symmetric_classes": sum(A.is_symmetric(X) for X in range(A.rank)),
        "sizes": [int(s) for s in A.sizes],
    }
    _emit(report)
    ok = report["eq1"] and report["row_sums"] and report["unit_law"]
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_iso_alg(a) -> int:
    A = _load_sring(a.source)
    B = _load_sring(a.target) if a.target else A
    isos = find_algebraic_isos(A, B, limit=a.limit)
    _emit({"count": len(isos), "isos": [list(p.class_map) for p in isos]})
    return EXIT_OK


def cmd_iso_induced(a) -> int:
    A = _load_sring(a.source)
    B = _load_sring(a.target) if a.target else A
    (m,) = _load_maps(a.phi)
    phi = algebraic_iso_from_map(A, B, m)
    res = find_inducing_iso(phi, a.budget)
    _emit(res.to_dict())
    if res.status is Status.TIMEOUT:
        print(f"timeout: search stopped after {res.nodes_explored} nodes", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_iso_report(a) -> int:
    A = _load_sring(a.source)
    targets = [_load_sring(t) for t in a.targets]
    rep = separability_report(A, targets, a.budget)
    _emit({"verdict": rep.verdict, "entries": rep.to_list()})
    if rep.verdict == "undetermined":
        print("timeout: some inducing searches hit the budget", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_schurity(a) -> int:
    A = _load_sring(a.file)
    aut = scheme_automorphism_search(A, a.budget)
    _emit(
        {
            "schurian": orbits_match_classes(A, aut.group),
            "stabilizer_order": aut.order,
            "orbits": len(aut.orbits()),
            "rank": A.rank,
            "nodes": aut.nodes,
        }
    )
    return EXIT_OK


def cmd_classify(a) -> int:
    _emit(classify(parse_spec(a.spec)).to_dict())
    return EXIT_OK


def cmd_witness(a) -> int:
    cert = build_witness(parse_spec(a.spec), a.budget, direct_search=not a.no_direct)
    _write(cert.to_json(indent=2), a.output)
    if cert.conclusion is None:
        failed = [k for k, v in cert.checks.items() if v is False]
        print(f"warning: certificate is inconclusive ({', '.join(failed)})", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="schurkit", description="S-rings over finite abelian groups.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--budget", type=int, default=None, help="node budget for searches (default 10^8 or $SCHURKIT_BUDGET)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("group", help="group information")
    gs = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    gi = gs.add_parser("info")
    gi.add_argument("spec")
    gi.set_defaults(func=cmd_group_info)

    s = sub.add_parser("sring", help="build and validate S-rings")
    ss = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sb = ss.add_parser("build")
    src = sb.add_mutually_exclusive_group()
    src.add_argument("--cyclotomic", metavar="SPEC")
    src.add_argument("--group-ring", metavar="SPEC")
    src.add_argument("--rank-two", metavar="SPEC")
    src.add_argument("--from", dest="source", metavar="FILE")
    sb.add_argument("--power", type=int, action="append", default=[], help="add x -> kx (with --cyclotomic)")
    sb.add_argument("--auto", action="append", default=[], metavar="IMAGES", help="generator images '[..];[..]'")
    sb.add_argument("--fusion", metavar="PHI", help="class map(s), inline JSON or file")
    sb.add_argument("--wreath", metavar="SPEC", help="lift into a larger group by wreath product")
    sb.add_argument("-o", "--output")
    sb.set_defaults(func=cmd_sring_build)
    sc = ss.add_parser("check")
    sc.add_argument("file")
    sc.set_defaults(func=cmd_sring_check)

    i = sub.add_parser("iso", help="algebraic and combinatorial isomorphisms")
    is_ = i.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ia = is_.add_parser("alg")
    ia.add_argument("source")
    ia.add_argument("target", nargs="?")
    ia.add_argument("--limit", type=int)
    ia.set_defaults(func=cmd_iso_alg)
    ii = is_.add_parser("induced")
    ii.add_argument("source")
    ii.add_argument("phi")
    ii.add_argument("--target")
    ii.set_defaults(func=cmd_iso_induced)
    ir = is_.add_parser("report")
    ir.add_argument("source")
    ir.add_argument("targets", nargs="*")
    ir.set_defaults(func=cmd_iso_report)

    sch = sub.add_parser("schurity", help="decide schurity")
    sch.add_argument("file")
    sch.set_defaults(func=cmd_schurity)

    c = sub.add_parser("classify", help="weak separability verdict")
    c.add_argument("spec")
    c.set_defaults(func=cmd_classify)

    w = sub.add_parser("witness", help="non-separability certificate")
    w.add_argument("spec")
    w.add_argument("--no-direct", action="store_true", help="skip the direct inducing search")
    w.add_argument("-o", "--output")
    w.set_defaults(func=cmd_witness)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SchurkitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())
