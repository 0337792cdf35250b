"""Command-line front end.

Subcommands: decompose, verify, oracle, classify, fuzz, subdivide.  Exit
codes are a stable contract: 0 ok, 1 negative verdict, 2 precondition
violated, 3 parse error, 4 internal error (always a bug), 5 bounds exceeded.

All randomness flows from one seed through random.Random, using only
randrange-derived draws, so identical flags give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .core import (
    BoundExceededError,
    CycleDecomposition,
    GraphError,
    InternalError,
    PreconditionError,
    graph_from_json,
    graph_to_json,
    is_eulerian,
    signature_from_json,
    signature_to_json,
    subdivide,
    validate_certificate,
)
from .decomposer import decompose_block
from .oracle import DEFAULT_MAX_DIM, oracle_decompose, oracle_is_strongly_ecd
from .recipes import random_recipe, realize, recipe_from_json, validate_recipe

OK, NEGATIVE, PRECONDITION, PARSE, INTERNAL, BOUNDS = 0, 1, 2, 3, 4, 5


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _ParseFail(f"{path}: {exc}") from None


class _ParseFail(Exception):
    pass


def _emit(data, out_path: str | None):
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _sample_even_signature(rng: random.Random, ids: list[str]) -> frozenset[str]:
    if not ids:
        return frozenset()
    k = rng.randrange(0, len(ids) + 1, 2)
    chosen: set[str] = set()
    while len(chosen) < k:
        chosen.add(ids[rng.randrange(len(ids))])
    if len(chosen) % 2:
        chosen.discard(sorted(chosen)[0])
    return frozenset(chosen)


def cmd_decompose(args) -> int:
    recipe = recipe_from_json(_load_json(args.recipe))
    report = validate_recipe(recipe)
    if not report.ok:
        first = report.failures[0]
        print(
            f"recipe invalid at {first.path or 'root'}: [{first.clause}] {first.message}",
            file=sys.stderr,
        )
        return PRECONDITION
    real = realize(recipe, validate=False)
    if args.sig is not None:
        odd = signature_from_json(_load_json(args.sig), real.graph)
    else:
        rng = random.Random(args.seed)
        odd = _sample_even_signature(rng, sorted(real.graph.edge_ids()))
    if len(odd) % 2:
        print("the signature must have even size", file=sys.stderr)
        return PRECONDITION
    cert = decompose_block(real.block, odd)
    _emit(cert.to_json(), args.out)
    longest = max((len(c) for c in cert.cycles), default=0)
    print(f"{len(cert.cycles)} cycles, longest {longest}", file=sys.stderr)
    return OK


def cmd_verify(args) -> int:
    g = graph_from_json(_load_json(args.graph))
    cert = CycleDecomposition.from_json(_load_json(args.cert))
    check = validate_certificate(g, cert)
    if check.ok:
        _emit({"ok": True}, args.out)
        return OK
    _emit(
        {"ok": False, "reason": check.reason, "cycle_index": check.cycle_index},
        args.out,
    )
    return NEGATIVE


def cmd_oracle(args) -> int:
    g = graph_from_json(_load_json(args.graph))
    found = oracle_decompose(g, max_edges=args.max_edges)
    if found is None:
        _emit({"decomposable": False}, args.out)
        return NEGATIVE
    _emit({"decomposable": True, "certificate": found.to_json()}, args.out)
    return OK


def cmd_classify(args) -> int:
    g = graph_from_json(_load_json(args.graph))
    if not is_eulerian(g):
        print("the graph is not Eulerian", file=sys.stderr)
        return PRECONDITION
    report = oracle_is_strongly_ecd(
        g.with_signature(()), max_edges=args.max_edges, max_dim=args.max_dim, jobs=args.jobs
    )
    _emit(report.to_json(), args.out)
    return OK if report.verdict == "strongly-decomposable" else NEGATIVE


def cmd_fuzz(args) -> int:
    if args.count < 1:
        print("count must be >= 1", file=sys.stderr)
        return PRECONDITION
    cases = []
    failures = 0
    for i in range(args.count):
        seed = args.seed + i
        recipe = random_recipe(seed, args.budget)
        real = realize(recipe, validate=False)
        ids = sorted(real.graph.edge_ids())
        rng = random.Random(seed * 65_537 + 1)
        status = "ok"
        detail = None
        sigs = max(4, args.signatures)
        for _ in range(sigs):
            odd = _sample_even_signature(rng, ids)
            try:
                cert = decompose_block(real.block, odd)
            except InternalError as exc:
                status, detail = "internal-error", str(exc)
                break
            check = validate_certificate(real.graph.with_signature(odd), cert)
            if not check.ok:
                status, detail = "invalid-certificate", check.reason
                break
            if len(ids) <= 16:
                if oracle_decompose(real.graph.with_signature(odd)) is None:
                    status, detail = "oracle-disagreement", None
                    break
        if status != "ok":
            failures += 1
        cases.append(
            {
                "seed": seed,
                "recipe": type(recipe).__name__,
                "edges": len(ids),
                "signatures": sigs,
                "oracle_checked": len(ids) <= 16,
                "status": status,
                "detail": detail,
            }
        )
    _emit({"cases": cases, "failures": failures}, args.out)
    return OK if failures == 0 else NEGATIVE


def cmd_subdivide(args) -> int:
    g = graph_from_json(_load_json(args.graph))
    profile = _load_json(args.profile)
    if not isinstance(profile, dict):
        raise GraphError("profile JSON must map edge ids to lengths")
    lengths = {str(e): n for e, n in profile.items()}
    host, induced = subdivide(g.with_signature(()), lengths)
    _emit(
        {"graph": graph_to_json(host), "induced_signature": signature_to_json(induced)},
        args.out,
    )
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evcyc",
        description="Even-cycle decompositions of signed graphs: construct, verify, cross-check.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="decompose a recipe under a signature")
    p.add_argument("--recipe", required=True, help="recipe JSON file")
    p.add_argument("--sig", help="signature JSON file (list of odd edge ids)")
    p.add_argument("--seed", type=int, default=0, help="seed for a random even signature")
    p.add_argument("--out", help="write the certificate here instead of stdout")
    p.set_defaults(run=cmd_decompose)

    p = sub.add_parser("verify", help="validate a certificate against a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--cert", required=True)
    p.add_argument("--out")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("oracle", help="exhaustive decomposition search on a signed graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--max-edges", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("classify", help="sweep all even signature classes of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--max-edges", type=int, default=None)
    p.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(run=cmd_classify)
    p.add_argument("--out")

    p = sub.add_parser("fuzz", help="random recipes and signatures vs the oracle")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--budget", type=int, default=12, help="edge budget per recipe")
    p.add_argument("--signatures", type=int, default=4, help="signatures per recipe (min 4)")
    p.add_argument("--out")
    p.set_defaults(run=cmd_fuzz)

    p = sub.add_parser("subdivide", help="subdivide a graph and report the induced signature")
    p.add_argument("--graph", required=True)
    p.add_argument("--profile", required=True, help="JSON mapping edge ids to lengths >= 1")
    p.add_argument("--out")
    p.set_defaults(run=cmd_subdivide)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except _ParseFail as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return PARSE
    except GraphError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return PARSE
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return PRECONDITION
    except BoundExceededError as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return BOUNDS
    except InternalError as exc:
        print(f"internal error (this is a bug): {exc}", file=sys.stderr)
        return INTERNAL
    return OK


if __name__ == "__main__":
    sys.exit(main())
