"""Command-line interface.

Subcommands: parse, embeddings, aut, reduct, arrow, degree, expansion,
verify, plus corpus (file generation) and category (pool report).  Every
command prints a human-readable summary and, with --json PATH, writes a
canonical JSON report whose bytes depend only on the run configuration
(timing is only embedded with --timing).

Exit codes: 0 verdict computed, 1 hypothesis not satisfied, 2 input
error, 3 search-space guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path

from . import report as report_mod
from .arrows import arrow_morphisms, arrow_objects, find_bad_coloring
from .category import category_from_pool, dump_report
from .corpus import BUILTIN_POOLS, FAMILIES, generate_family
from .degrees import big_degree_exact, small_degree_bounds
from .errors import FinramError, GuardExceeded, HypothesisNotSatisfied, InputError
from .expansion import (
    classify_restrictions,
    aut_count_identity,
    expansion_from_json,
    expansion_to_json,
    is_self_similar,
    order_forgetting_expansion,
    property_checks,
)
from .formulas import apply_reduct, builtin_reduct_spec, parse_reduct_spec
from .structures import Structure, parse_structure, serialize_structure
from .verify import SUITES, run_suite

_SHORTHAND_RE = re.compile(r"^(chain|clique|emptygraph|tournament-cycle)[_ ]?(\d+)$")


def _read_pool_file(path: str) -> list[tuple[str, Structure]]:
    """Pool files: 'object NAME' header lines, each followed by one
    structure (grammar or shorthand) until the next header."""
    text = Path(path).read_text(encoding="utf-8")
    entries: list[tuple[str, list[str]]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            continue
        if line.startswith("object "):
            name = line[len("object "):].strip()
            if not name:
                raise InputError(f"empty object name in pool file {path}")
            entries.append((name, []))
        elif entries:
            entries[-1][1].append(raw)
        elif line:
            raise InputError(f"pool file {path} must start with an 'object NAME' line")
    if not entries:
        raise InputError(f"pool file {path} declares no objects")
    pool = []
    names = set()
    for name, lines in entries:
        if name in names:
            raise InputError(f"duplicate object name {name!r} in pool file")
        names.add(name)
        pool.append((name, parse_structure("\n".join(lines))))
    return pool


def _load_pool(token: str) -> list[tuple[str, Structure]]:
    if token in BUILTIN_POOLS:
        return BUILTIN_POOLS[token]()
    if Path(token).exists():
        return _read_pool_file(token)
    raise InputError(
        f"unknown pool {token!r}: not a built-in name {sorted(BUILTIN_POOLS)} "
        "and not a file"
    )


def _resolve_structure(token: str, pool: dict[str, Structure] | None) -> tuple[str, Structure]:
    """A structure argument names a pool object, a file, or a shorthand."""
    if pool and token in pool:
        return token, pool[token]
    if Path(token).exists():
        return Path(token).stem, parse_structure(Path(token).read_text(encoding="utf-8"))
    m = _SHORTHAND_RE.match(token.strip())
    if m:
        return token, parse_structure(f"{m.group(1)} {m.group(2)}")
    raise InputError(
        f"cannot resolve structure {token!r}: not a pool object, file, or shorthand"
    )


def _emit(args, command: str, result, inputs: dict[str, str] | None, t0: float) -> None:
    if getattr(args, "json", None):
        elapsed = (time.monotonic() - t0) * 1000 if args.timing else None
        rep = report_mod.build_report(command, result, inputs, elapsed)
        report_mod.write_json(args.json, rep)
        print(f"json report written to {args.json}")


def _structure_inputs(**tokens: str) -> dict[str, str]:
    return {k: v for k, v in tokens.items() if v is not None}


# ---------------------------------------------------------------------------
# Subcommand handlers

def _cmd_parse(args) -> int:
    text = Path(args.infile).read_text(encoding="utf-8")
    s = parse_structure(text)
    out = serialize_structure(s)
    if parse_structure(out) != s:
        raise AssertionError("serializer round-trip failed")
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    _emit(args, "parse", {"size": s.size, "canonical": out}, {"in": text}, args._t0)
    return 0


def _pool_from_args(args) -> dict[str, Structure] | None:
    if getattr(args, "cat", None):
        return dict(_load_pool(args.cat))
    return None


def _cmd_embeddings(args) -> int:
    pool = _pool_from_args(args)
    name_a, a = _resolve_structure(args.A, pool)
    name_b, b = _resolve_structure(args.B, pool)
    from .structures import enumerate_embeddings

    embs = enumerate_embeddings(a, b)
    print(f"{len(embs)} embeddings of {name_a} into {name_b}")
    for e in embs:
        print("  " + str(list(e.map)))
    _emit(args, "embeddings",
          {"A": name_a, "B": name_b, "count": len(embs),
           "maps": [list(e.map) for e in embs]},
          _structure_inputs(A=serialize_structure(a), B=serialize_structure(b)),
          args._t0)
    return 0


def _cmd_aut(args) -> int:
    pool = _pool_from_args(args)
    name_a, a = _resolve_structure(args.A, pool)
    from .structures import automorphism_group

    auts = automorphism_group(a)
    print(f"automorphism group of {name_a}: order {len(auts)}")
    for e in auts:
        print("  " + str(list(e.map)))
    _emit(args, "aut", {"A": name_a, "order": len(auts),
                        "maps": [list(e.map) for e in auts]},
          _structure_inputs(A=serialize_structure(a)), args._t0)
    return 0


def _cmd_reduct(args) -> int:
    pool = _pool_from_args(args)
    name_in, s = _resolve_structure(args.infile, pool)
    if args.phi.startswith("builtin:"):
        names = [n.strip() for n in args.phi[len("builtin:"):].split(",")]
        spec = builtin_reduct_spec(names)
        phi_text = args.phi
    else:
        phi_text = Path(args.phi).read_text(encoding="utf-8")
        spec = parse_reduct_spec(phi_text, s.signature)
    out_struct = apply_reduct(spec, s)
    out_text = serialize_structure(out_struct)
    if args.out:
        Path(args.out).write_text(out_text, encoding="utf-8")
        print(f"reduct written to {args.out}")
    else:
        sys.stdout.write(out_text)
    _emit(args, "reduct",
          {"in": name_in, "tuple_counts": {n: len(t) for n, t in out_struct.relations},
           "structure": out_text},
          {"phi": phi_text, "in": serialize_structure(s)}, args._t0)
    return 0


def _cmd_arrow(args) -> int:
    pool = _pool_from_args(args)
    name_c, sc = _resolve_structure(args.C, pool)
    name_b, sb = _resolve_structure(args.B, pool)
    name_a, sa = _resolve_structure(args.A, pool)
    if pool:
        cat = category_from_pool(pool)
        c_id, b_id, a_id = name_c, name_b, name_a
    else:
        cat = category_from_pool({"C": sc, "B": sb, "A": sa})
        c_id, b_id, a_id = "C", "B", "A"
    arrow = arrow_morphisms if args.mor else arrow_objects
    mode = "morphisms" if args.mor else "classes"
    if args.find_bad:
        bad = find_bad_coloring(cat, c_id, b_id, a_id, args.k, args.t, mode,
                                workers=args.workers, pruning=args.pruning,
                                guard_limit=args.guard)
        if bad is None:
            print("no bad coloring: the arrow holds")
            result = {"bad_coloring": None, "holds": True}
        else:
            print("bad coloring found:")
            for item, color in zip(bad.items, bad.colors):
                print(f"  {item}: {color}")
            result = {"bad_coloring": {"items": [str(i) for i in bad.items],
                                       "colors": list(bad.colors)},
                      "holds": False}
    else:
        res = arrow(cat, c_id, b_id, a_id, args.k, args.t,
                    workers=args.workers, pruning=args.pruning,
                    guard_limit=args.guard)
        verdict = "HOLDS" if res.holds else "REFUTED"
        print(f"{verdict}: {name_c} -> ({name_b})^{name_a} with k={args.k}, t={args.t} [{mode}]")
        if res.note:
            print(f"note: {res.note}")
        if res.certificate:
            print("certificate coloring:")
            for item, color in zip(res.certificate.items, res.certificate.colors):
                print(f"  {item}: {color}")
        result = {
            "verdict": "holds" if res.holds else "refuted",
            "mode": mode,
            "k": args.k,
            "t": args.t,
            "counts": res.counts,
            "note": res.note,
            "certificate": None if res.certificate is None else {
                "items": [str(i) for i in res.certificate.items],
                "colors": list(res.certificate.colors),
            },
        }
    _emit(args, "arrow", result,
          _structure_inputs(C=serialize_structure(sc), B=serialize_structure(sb),
                            A=serialize_structure(sa)), args._t0)
    return 0


def _cmd_degree(args) -> int:
    if args.degree_cmd == "verify":
        return _cmd_verify(args)
    if args.degree_cmd == "big":
        pool = _pool_from_args(args)
        name_s, ss = _resolve_structure(args.S, pool)
        name_a, sa = _resolve_structure(args.A, pool)
        if pool:
            cat, s_id, a_id = category_from_pool(pool), name_s, name_a
        else:
            cat = category_from_pool({"S": ss, "A": sa})
            s_id, a_id = "S", "A"
        mode = "morphisms" if args.mor else "classes"
        rep = big_degree_exact(cat, s_id, a_id, mode)
        print(f"{rep.quantity} = {rep.value}")
        for note in rep.notes:
            print(f"note: {note}")
        _emit(args, "degree big", rep.to_dict(),
              _structure_inputs(S=serialize_structure(ss), A=serialize_structure(sa)),
              args._t0)
        return 0
    # small
    pool = _load_pool(args.pool)
    cat = category_from_pool(dict(pool))
    if args.A not in dict(pool):
        raise InputError(f"object {args.A!r} is not in the pool")
    mode = "morphisms" if args.mor else "classes"
    rep = small_degree_bounds(cat, args.A, args.k_max, args.t_max, mode,
                              workers=args.workers, pruning=args.pruning,
                              guard_limit=args.guard)
    print(f"{rep.quantity} = {rep.value} (exact for this category)")
    print(f"bounded sweep (k <= {args.k_max}, t <= {args.t_max}): "
          f"lower {rep.params['lower']}, upper {rep.params['upper']}")
    _emit(args, "degree small", rep.to_dict(), {"pool": args.pool}, args._t0)
    return 0


def _cmd_expansion(args) -> int:
    if args.expansion_cmd == "generate":
        pool = _load_pool(args.pool)
        age = None
        if args.age_of:
            age = parse_structure(Path(args.age_of).read_text(encoding="utf-8")) \
                if Path(args.age_of).exists() else parse_structure(args.age_of)
        u = order_forgetting_expansion(pool, age_of=age)
        data = expansion_to_json(u)
        Path(args.out).write_text(json.dumps(data, indent=1, sort_keys=True),
                                  encoding="utf-8")
        print(f"order-forgetting expansion with {len(u.source.objects)} source "
              f"objects over {len(u.target.objects)} base objects -> {args.out}")
        _emit(args, "expansion generate",
              {"source_objects": list(u.source.objects),
               "target_objects": list(u.target.objects)},
              {"pool": args.pool}, args._t0)
        return 0
    data = json.loads(Path(args.file).read_text(encoding="utf-8"))
    u = expansion_from_json(data)
    if args.expansion_cmd == "validate":
        print(f"expansion valid: {len(u.source.objects)} source objects, "
              f"{len(u.target.objects)} target objects")
        _emit(args, "expansion validate",
              {"valid": True, "source_objects": list(u.source.objects)},
              {"file": json.dumps(data, sort_keys=True)}, args._t0)
        return 0
    # check
    result = {
        "restrictions": classify_restrictions(u),
        "properties": property_checks(u),
        "aut_counting": {a: aut_count_identity(u, a) for a in u.target.objects},
    }
    if args.s_star:
        ok, detail = is_self_similar(u, args.s_star)
        result["self_similar"] = {"object": args.s_star, "holds": ok, "detail": detail}
    print("restrictions:", result["restrictions"]["has_restrictions"],
          "unique:", result["restrictions"]["has_unique_restrictions"])
    print("reasonable:", result["properties"]["reasonable"],
          "expansion property:", result["properties"]["expansion_property"])
    if args.s_star:
        print("self-similar:", result["self_similar"]["holds"])
    _emit(args, "expansion check", result,
          {"file": json.dumps(data, sort_keys=True)}, args._t0)
    return 0


def _cmd_category(args) -> int:
    pool = _load_pool(args.cat)
    cat = category_from_pool(dict(pool))
    rep = dump_report(cat)
    print(f"objects: {rep['objects']}")
    print(f"predicates: all_mono={rep['predicates']['all_mono']} "
          f"directed={rep['predicates']['directed']} "
          f"amalgamation={rep['predicates']['amalgamation']}")
    _emit(args, "category", rep, {"cat": args.cat}, args._t0)
    return 0


def _cmd_corpus(args) -> int:
    family = generate_family(args.family, args.size)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, s in family:
        (outdir / f"{name}.str").write_text(serialize_structure(s), encoding="utf-8")
    print(f"{len(family)} structures of family {args.family} (size <= {args.size}) "
          f"written to {outdir}")
    _emit(args, "corpus", {"family": args.family, "size": args.size,
                           "count": len(family), "names": [n for n, _ in family]},
          None, args._t0)
    return 0


def _cmd_verify(args) -> int:
    result = run_suite(args.identity, workers=args.workers, pruning=args.pruning,
                       guard_limit=args.guard, pool=getattr(args, "pool", None))
    suites = result["suites"] if "suites" in result else [result]
    for suite in suites:
        status = "ok" if suite["ok"] else "VIOLATIONS"
        print(f"suite {suite['suite']}: {suite['checked']} checked, "
              f"{suite['skipped']} skipped, {suite['violations']} violations [{status}]")
    if args.report_dir:
        outdir = Path(args.report_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        for suite in suites:
            rows = suite["cases"]
            report_mod.write_suite_csv(outdir / f"{suite['suite']}.csv", rows)
            report_mod.render_suite_figure(
                outdir / f"{suite['suite']}.png", suite["suite"], rows
            )
        report_mod.write_json(outdir / "verify.json",
                              report_mod.build_report("verify", result))
        print(f"report files written to {outdir}")
    _emit(args, "verify", result, None, args._t0)
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finram",
        description="exact finite-scale structural Ramsey computations",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write a canonical JSON report")
    common.add_argument("--guard", type=int, default=None,
                        help="search-space guard (default 10^7 items)")
    common.add_argument("--workers", type=int, default=1,
                        help="parallel workers for coloring search")
    common.add_argument("--pruning", action="store_true",
                        help="quotient coloring search by the host's symmetries")
    common.add_argument("--timing", action="store_true",
                        help="embed elapsed time in the JSON report")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and canonicalize a structure file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("embeddings", parents=[common], help="enumerate embeddings A -> B")
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--cat", help="pool file or built-in pool name")
    p.set_defaults(func=_cmd_embeddings)

    p = sub.add_parser("aut", parents=[common], help="automorphism group of A")
    p.add_argument("--A", required=True)
    p.add_argument("--cat")
    p.set_defaults(func=_cmd_aut)

    p = sub.add_parser("reduct", parents=[common], help="apply a reduct specification")
    p.add_argument("--phi", required=True,
                   help="reduct file, or builtin:NAME[,NAME...] (Betw, Cyc, Sep, rho_N, Betw', Cyc', Sep')")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.add_argument("--cat")
    p.set_defaults(func=_cmd_reduct)

    p = sub.add_parser("arrow", parents=[common], help="decide an arrow relation")
    p.add_argument("--C", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-t", type=int, required=True)
    p.add_argument("--mor", action="store_true", help="color morphisms instead of copies")
    p.add_argument("--find-bad", action="store_true", dest="find_bad",
                   help="print the least defeating coloring, if any")
    p.add_argument("--cat")
    p.set_defaults(func=_cmd_arrow)

    p = sub.add_parser("degree", parents=[common], help="degree computations")
    dsub = p.add_subparsers(dest="degree_cmd", required=True)
    pb = dsub.add_parser("big", parents=[common])
    pb.add_argument("--S", required=True)
    pb.add_argument("--A", required=True)
    pb.add_argument("--mor", action="store_true")
    pb.add_argument("--cat")
    ps = dsub.add_parser("small", parents=[common])
    ps.add_argument("--pool", required=True)
    ps.add_argument("--A", required=True)
    ps.add_argument("--k-max", type=int, default=2, dest="k_max")
    ps.add_argument("--t-max", type=int, default=8, dest="t_max")
    ps.add_argument("--mor", action="store_true")
    pv = dsub.add_parser("verify", parents=[common])
    pv.add_argument("--identity", required=True,
                    choices=sorted(SUITES) + ["all"])
    pv.add_argument("--pool", help="built-in graph pool (graphs_leN) for the mult/monotonicity corpora")
    pv.add_argument("--report-dir", dest="report_dir")
    p.set_defaults(func=_cmd_degree)

    p = sub.add_parser("expansion", parents=[common], help="expansion functor tools")
    esub = p.add_subparsers(dest="expansion_cmd", required=True)
    pg = esub.add_parser("generate", parents=[common])
    pg.add_argument("--pool", required=True)
    pg.add_argument("--out", required=True)
    pg.add_argument("--age-of", dest="age_of",
                    help="structure file or text; keep only orders embedding into it")
    pval = esub.add_parser("validate", parents=[common])
    pval.add_argument("--file", required=True)
    pc = esub.add_parser("check", parents=[common])
    pc.add_argument("--file", required=True)
    pc.add_argument("--s-star", dest="s_star",
                    help="source object to test for self-similarity")
    p.set_defaults(func=_cmd_expansion)

    p = sub.add_parser("verify", parents=[common], help="run identity verification suites")
    p.add_argument("--identity", required=True, choices=sorted(SUITES) + ["all"])
    p.add_argument("--pool", help="built-in graph pool (graphs_leN) for the mult/monotonicity corpora")
    p.add_argument("--report-dir", dest="report_dir")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("category", parents=[common], help="JSON report for a structure pool")
    p.add_argument("--cat", required=True)
    p.set_defaults(func=_cmd_category)

    p = sub.add_parser("corpus", parents=[common], help="generate structure files")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_corpus)

    return parser


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "workers", 1) < 1:
            raise InputError("parallelism degree must be at least 1")
        if args.guard is not None and args.guard <= 0:
            raise InputError("guard limit must be positive")
        args._t0 = time.monotonic()
        return args.func(args)
    except GuardExceeded as e:
        print(f"guard exceeded: {e}", file=sys.stderr)
        return 3
    except HypothesisNotSatisfied as e:
        print(f"hypothesis not satisfied: {e}", file=sys.stderr)
        return 1
    except FinramError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
